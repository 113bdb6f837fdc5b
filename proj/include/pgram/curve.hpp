#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bivariate.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "polygon.hpp"

namespace pgram {

/// Enumerate all elements of a finite field in a fixed order (residues, or
/// coefficient vectors counted little-endian).
inline std::vector<field_element> enumerate_field(const field_ptr& ctx, std::uint64_t cap = 1u << 22) {
    if (!ctx->finite()) fail(errc::invalid_argument, "cannot enumerate the rationals");
    BigInt q = ctx->size();
    if (q > cap) fail(errc::enumeration_too_large, "field has " + q.str() + " elements, cap " + std::to_string(cap));
    std::uint64_t qq = static_cast<std::uint64_t>(q);
    std::vector<field_element> out;
    out.reserve(qq);
    if (ctx->kind == field_kind::prime) {
        for (std::uint64_t v = 0; v < qq; ++v) out.push_back(field_element::from_residue(ctx, v));
    } else {
        std::vector<std::uint64_t> digits(ctx->degree, 0);
        for (std::uint64_t k = 0; k < qq; ++k) {
            out.push_back(field_element::from_coeffs(ctx, digits));
            for (std::size_t i = 0; i < digits.size(); ++i) {
                if (++digits[i] < ctx->p) break;
                digits[i] = 0;
            }
        }
    }
    return out;
}

namespace fepoly {

/// Dense univariate polynomials over an arbitrary exact field, ascending
/// coefficients; just enough machinery for cubic-in-x curve analysis.
using poly = std::vector<field_element>;

inline void trim(poly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline int deg(const poly& a) { return static_cast<int>(a.size()) - 1; }

inline poly rem(poly a, const poly& b) {
    // b monic not required; divide exactly over the field
    field_element lead_inv = b.back().inv();
    while (deg(a) >= deg(b)) {
        field_element c = a.back() * lead_inv;
        int shift = deg(a) - deg(b);
        for (std::size_t j = 0; j < b.size(); ++j)
            a[static_cast<std::size_t>(shift) + j] = a[static_cast<std::size_t>(shift) + j] - c * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline poly gcd(poly a, poly b) {
    trim(a); trim(b);
    while (!b.empty()) {
        a = rem(std::move(a), b);
        std::swap(a, b);
    }
    return a;
}

/// x^e mod f, binary exponentiation with arbitrary-precision exponent.
inline poly powmod_x(BigInt e, const poly& f, const field_ptr& ctx) {
    poly result{field_element::one(ctx)};
    poly base = rem(poly{field_element::zero(ctx), field_element::one(ctx)}, f);
    auto mul = [&](const poly& u, const poly& v) {
        if (u.empty() || v.empty()) return poly{};
        poly w(u.size() + v.size() - 1, field_element::zero(ctx));
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) w[i + j] = w[i + j] + u[i] * v[j];
        trim(w);
        return w;
    };
    while (e > 0) {
        if ((e & 1) != 0) result = rem(mul(result, base), f);
        base = rem(mul(base, base), f);
        e >>= 1;
    }
    return result;
}

/// Number of distinct roots of f in the field of q elements:
/// deg gcd(x^q - x, f).
inline std::size_t distinct_roots(const poly& f_in, const field_ptr& ctx) {
    poly f = f_in;
    trim(f);
    if (f.empty()) fail(errc::invalid_argument, "root count of the zero polynomial");
    if (deg(f) == 0) return 0;
    poly xq = powmod_x(ctx->size(), f, ctx);
    // xq - x
    if (xq.size() < 2) xq.resize(2, field_element::zero(ctx));
    xq[1] = xq[1] - field_element::one(ctx);
    trim(xq);
    if (xq.empty()) return static_cast<std::size_t>(deg(f));
    poly g = gcd(f, xq);
    return static_cast<std::size_t>(std::max(0, deg(g)));
}

} // namespace fepoly

/// Spectral curve in normal form, determined by n and the 2m+2 parameters
/// I_0..I_m, J_0..J_m:
///   R(x,y) = x^3 y^n - sum_i J_i x^2 y^{n+i-m} + sum_i I_i x y^{m-i} - 1.
struct normal_form_curve {
    std::size_t n = 0;
    std::vector<field_element> I, J;  // each of size m+1

    normal_form_curve() = default;

    normal_form_curve(std::size_t n_, std::vector<field_element> I_, std::vector<field_element> J_)
        : n(n_), I(std::move(I_)), J(std::move(J_)) {
        if (n < 4) fail(errc::invalid_argument, "curve needs n >= 4");
        if (I.size() != m() + 1 || J.size() != m() + 1)
            fail(errc::invalid_argument, "need exactly m+1 = " + std::to_string(m() + 1) + " parameters I and J");
    }

    std::size_t m() const { return n / 2; }
    const field_ptr& ctx() const { return I.at(0).ctx(); }

    /// The good fiber used when the characteristic does not divide n:
    /// I_m = -1, J_m = 1, all other parameters zero.
    static normal_form_curve lemma_tame(std::size_t n, const field_ptr& ctx) {
        std::size_t m = n / 2;
        std::vector<field_element> I(m + 1, field_element::zero(ctx)), J(m + 1, field_element::zero(ctx));
        I[m] = field_element::from_int(ctx, -1);
        J[m] = field_element::one(ctx);
        return normal_form_curve(n, std::move(I), std::move(J));
    }

    /// The good fiber used when the characteristic divides n:
    /// I_m = 1, J_{m-1} = -1, J_m = 1.
    static normal_form_curve lemma_wild(std::size_t n, const field_ptr& ctx) {
        std::size_t m = n / 2;
        std::vector<field_element> I(m + 1, field_element::zero(ctx)), J(m + 1, field_element::zero(ctx));
        I[m] = field_element::one(ctx);
        J[m - 1] = field_element::from_int(ctx, -1);
        J[m] = field_element::one(ctx);
        return normal_form_curve(n, std::move(I), std::move(J));
    }

    std::string to_string() const {
        std::string s = "n=" + std::to_string(n) + "; I=";
        for (std::size_t i = 0; i < I.size(); ++i) { if (i) s += ","; s += I[i].to_string(); }
        s += "; J=";
        for (std::size_t i = 0; i < J.size(); ++i) { if (i) s += ","; s += J[i].to_string(); }
        s += "; field=" + ctx()->description();
        return s;
    }

    static normal_form_curve parse(const std::string& text) {
        auto grab = [&](const std::string& key) -> std::string {
            auto pos = text.find(key + "=");
            if (pos == std::string::npos) fail(errc::parse_error, "curve description missing " + key + "=");
            auto end = text.find(';', pos);
            return text.substr(pos + key.size() + 1,
                               end == std::string::npos ? std::string::npos : end - pos - key.size() - 1);
        };
        std::size_t n = std::stoull(grab("n"));
        field_ptr ctx = field_context::parse(grab("field"));
        auto parse_list = [&](const std::string& body) {
            std::vector<field_element> out;
            for (const auto& tok : iodetail::split_top_level(body, ',')) out.push_back(field_element::parse(ctx, tok));
            return out;
        };
        return normal_form_curve(n, parse_list(grab("I")), parse_list(grab("J")));
    }
};

/// The affine polynomial R(x, y) of the curve, exactly as displayed.
inline bivariate_fe build_curve(const normal_form_curve& c) {
    const field_ptr& ctx = c.ctx();
    const std::size_t m = c.m();
    bivariate_fe r = bivariate_fe::term(3, static_cast<int>(c.n), field_element::one(ctx));
    for (std::size_t i = 0; i <= m; ++i)
        r.accumulate(2, static_cast<int>(c.n + i - m), -c.J[i]);
    for (std::size_t i = 0; i <= m; ++i)
        r.accumulate(1, static_cast<int>(m - i), c.I[i]);
    r.accumulate(0, 0, -field_element::one(ctx));
    return r;
}

struct good_fiber_report {
    bool integral = false;
    bool im_nonzero = false;
    bool jm_nonzero = false;
    bool disc_o_nonzero = false;  // J_0^2 - 4 I_m
    bool disc_w_nonzero = false;  // I_0^2 - 4 J_m
    std::size_t affine_singular_count = 0;
    std::vector<std::string> singular_points;  // first few, printed
    bool good = false;
};

namespace curvedetail {

/// Linear-in-x factors of R over the algebraic closure all have the shape
/// u y^j x - c u with c != 0 (the constant term of R is -1 and its leading
/// x-coefficient is y^n, so rational roots are c / y^j). R is irreducible
/// over the closure iff no such factor exists for any j in 0..n; a cubic in
/// x with unit content has no other way to split.
inline bool curve_is_integral(const normal_form_curve& c) {
    const field_ptr& ctx = c.ctx();
    const std::size_t m = c.m();
    // terms of R as (x-degree a, y-degree b, coefficient)
    struct term { int a; int b; field_element v; };
    std::vector<term> terms;
    terms.push_back({3, static_cast<int>(c.n), field_element::one(ctx)});
    for (std::size_t i = 0; i <= m; ++i) terms.push_back({2, static_cast<int>(c.n + i - m), -c.J[i]});
    for (std::size_t i = 0; i <= m; ++i) terms.push_back({1, static_cast<int>(m - i), c.I[i]});
    terms.push_back({0, 0, -field_element::one(ctx)});

    for (int j = 0; j <= static_cast<int>(c.n); ++j) {
        // y-exponent of term (a, b) after substituting x = c y^{-j} and
        // clearing y^{3j}: b + (3 - a) j. Collect a polynomial in c per
        // exponent and intersect their root sets via a running gcd.
        std::map<int, fepoly::poly> slices;
        for (const auto& t : terms) {
            if (t.v.is_zero()) continue;
            int e = t.b + (3 - t.a) * j;
            fepoly::poly& sl = slices[e];
            if (static_cast<int>(sl.size()) < t.a + 1) sl.resize(static_cast<std::size_t>(t.a) + 1, field_element::zero(ctx));
            sl[static_cast<std::size_t>(t.a)] = sl[static_cast<std::size_t>(t.a)] + t.v;
        }
        fepoly::poly g;
        bool first = true;
        for (auto& [e, sl] : slices) {
            fepoly::trim(sl);
            if (sl.empty()) continue;
            g = first ? sl : fepoly::gcd(std::move(g), sl);
            first = false;
            if (fepoly::deg(g) == 0) break;
        }
        if (first) continue;  // all slices vanished identically: cannot happen (constant term -1)
        // strip the root c = 0; only nonzero roots correspond to factors
        std::size_t k = 0;
        while (k < g.size() && g[k].is_zero()) ++k;
        g.erase(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k));
        if (fepoly::deg(g) >= 1) return false;
    }
    return true;
}

} // namespace curvedetail

/// Good-fiber test over a finite field: the four scalar nondegeneracy
/// conditions, geometric integrality, and an exhaustive search for common
/// zeros of (R, dR/dx, dR/dy) in the main affine patch.
inline good_fiber_report good_fiber_check(const normal_form_curve& c, std::uint64_t bound = 100000000ULL) {
    const field_ptr& ctx = c.ctx();
    if (!ctx->finite()) fail(errc::invalid_argument, "good-fiber check needs a finite field");
    BigInt q = ctx->size();
    BigInt q2 = q * q;
    if (q2 > bound)
        fail(errc::enumeration_too_large, "affine smoothness scan needs q^2 = " + q2.str() +
                                              " evaluations, bound " + std::to_string(bound));
    const std::size_t m = c.m();
    good_fiber_report rep;
    field_element four = field_element::from_int(ctx, 4);
    rep.im_nonzero = !c.I[m].is_zero();
    rep.jm_nonzero = !c.J[m].is_zero();
    rep.disc_o_nonzero = !(c.J[0] * c.J[0] - four * c.I[m]).is_zero();
    rep.disc_w_nonzero = !(c.I[0] * c.I[0] - four * c.J[m]).is_zero();
    rep.integral = curvedetail::curve_is_integral(c);

    bivariate_fe r = build_curve(c);
    bivariate_fe rx = r.d1(), ry = r.d2();
    const field_element zero = field_element::zero(ctx);

    // per-y coefficient vectors in x, evaluated by Horner
    auto x_slices = [&](const bivariate_fe& f, const field_element& y, int maxdeg) {
        std::vector<field_element> coef(static_cast<std::size_t>(maxdeg) + 1, zero);
        std::vector<field_element> ypow{field_element::one(ctx)};
        for (const auto& [k, v] : f.terms()) {
            while (static_cast<int>(ypow.size()) <= k.second) ypow.push_back(ypow.back() * y);
            coef[static_cast<std::size_t>(k.first)] =
                coef[static_cast<std::size_t>(k.first)] + v * ypow[static_cast<std::size_t>(k.second)];
        }
        return coef;
    };
    auto horner = [&](const std::vector<field_element>& coef, const field_element& x) {
        field_element acc = zero;
        for (std::size_t i = coef.size(); i-- > 0;) acc = acc * x + coef[i];
        return acc;
    };

    std::vector<field_element> elems = enumerate_field(ctx, bound);
    for (const auto& y : elems) {
        auto cr = x_slices(r, y, 3);
        auto crx = x_slices(rx, y, 2);
        auto cry = x_slices(ry, y, 3);
        for (const auto& x : elems) {
            if (!horner(cr, x).is_zero()) continue;
            if (!horner(crx, x).is_zero()) continue;
            if (!horner(cry, x).is_zero()) continue;
            ++rep.affine_singular_count;
            if (rep.singular_points.size() < 8)
                rep.singular_points.push_back("(" + x.to_string() + ", " + y.to_string() + ")");
        }
    }
    rep.good = rep.integral && rep.im_nonzero && rep.jm_nonzero && rep.disc_o_nonzero &&
               rep.disc_w_nonzero && rep.affine_singular_count == 0;
    return rep;
}

/// Generic genus expected for the n-th spectral curve.
inline std::size_t expected_genus(std::size_t n) { return n % 2 ? n - 1 : n - 2; }

} // namespace pgram
