#pragma once

#include <array>
#include <cstdint>
#include <thread>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "field.hpp"

namespace pgram {

namespace gf {

// Compact F_{p^r} arithmetic for the point-counting inner loops. Coefficient
// vectors over F_p with a monic modulus, Barrett reduction instead of
// hardware division, and p kept below 2^29 so row sums fit in a uint64.
// Mirrors field_element semantics exactly (cross-checked in the test suite).

constexpr std::size_t max_r = 16;

struct ctx {
    std::uint64_t p = 0;
    std::uint64_t barrett = 0;  // floor(2^64 / p)
    std::uint32_t r = 1;
    std::array<std::uint64_t, max_r + 1> mod{};      // monic, ascending
    std::array<std::uint64_t, max_r + 1> negmod{};   // p - mod[i] (mod p)
    // Frobenius a -> a^p as an r x r matrix over F_p (column j = t^{jp})
    std::array<std::array<std::uint64_t, max_r>, max_r> frob{};

    static ctx make(std::uint64_t p, std::uint32_t r) {
        if (p < 2 || p >= (1ULL << 28)) fail(errc::enumeration_too_large, "fast field arithmetic caps p below 2^28");
        if (r < 1 || r > max_r) fail(errc::invalid_argument, "fast field degree out of range");
        ctx c;
        c.p = p;
        c.barrett = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / p);
        c.r = r;
        fpdetail::Poly m = r == 1 ? fpdetail::Poly{0, 1} : fpdetail::find_irreducible(p, r);
        for (std::size_t i = 0; i < m.size(); ++i) {
            c.mod[i] = m[i];
            c.negmod[i] = m[i] ? p - m[i] : 0;
        }
        for (std::uint32_t j = 0; j < r; ++j) {
            BigInt e = BigInt(j) * BigInt(p);
            fpdetail::Poly tj = fpdetail::poly_powmod_x(e, m, p);
            for (std::uint32_t i = 0; i < r; ++i) c.frob[i][j] = i < tj.size() ? tj[i] : 0;
        }
        return c;
    }

    // reduce x < 2^59 modulo p
    std::uint64_t red(std::uint64_t x) const {
        std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * barrett) >> 64);
        std::uint64_t rem = x - q * p;
        if (rem >= p) rem -= p;
        return rem;
    }

    BigInt size() const { return boost::multiprecision::pow(BigInt(p), r); }
};

struct elem {
    std::array<std::uint64_t, max_r> c{};
};

inline bool is_zero(const ctx& k, const elem& a) {
    for (std::uint32_t i = 0; i < k.r; ++i) if (a.c[i]) return false;
    return true;
}

inline bool equal(const ctx& k, const elem& a, const elem& b) {
    for (std::uint32_t i = 0; i < k.r; ++i) if (a.c[i] != b.c[i]) return false;
    return true;
}

inline elem from_int(const ctx& k, long long v) {
    elem e;
    long long m = v % static_cast<long long>(k.p);
    if (m < 0) m += static_cast<long long>(k.p);
    e.c[0] = static_cast<std::uint64_t>(m);
    return e;
}

inline elem add(const ctx& k, const elem& a, const elem& b) {
    elem r;
    for (std::uint32_t i = 0; i < k.r; ++i) {
        std::uint64_t s = a.c[i] + b.c[i];
        r.c[i] = s >= k.p ? s - k.p : s;
    }
    return r;
}

inline elem sub(const ctx& k, const elem& a, const elem& b) {
    elem r;
    for (std::uint32_t i = 0; i < k.r; ++i) r.c[i] = a.c[i] >= b.c[i] ? a.c[i] - b.c[i] : a.c[i] + k.p - b.c[i];
    return r;
}

inline elem neg(const ctx& k, const elem& a) {
    elem r;
    for (std::uint32_t i = 0; i < k.r; ++i) r.c[i] = a.c[i] ? k.p - a.c[i] : 0;
    return r;
}

// Schoolbook product with fully delayed reduction: raw products are < 2^56
// (p < 2^28) and each accumulator takes at most r + (r-1) of them, so sums
// stay below 2^61 and a single Barrett pass per cell suffices.
inline elem mul(const ctx& k, const elem& a, const elem& b) {
    const std::uint32_t r = k.r;
    std::array<std::uint64_t, 2 * max_r - 1> t{};
    for (std::uint32_t i = 0; i < r; ++i) {
        std::uint64_t ai = a.c[i];
        if (!ai) continue;
        for (std::uint32_t j = 0; j < r; ++j) t[i + j] += ai * b.c[j];
    }
    for (std::uint32_t i = 2 * r - 2; i + 1 > r; --i) {
        std::uint64_t c = k.red(t[i]);
        if (c) {
            for (std::uint32_t j = 0; j < r; ++j) t[i - r + j] += c * k.negmod[j];
        }
        t[i] = 0;
    }
    elem out;
    for (std::uint32_t i = 0; i < r; ++i) out.c[i] = k.red(t[i]);
    return out;
}

inline elem pow(const ctx& k, elem a, BigInt e) {
    elem r = from_int(k, 1);
    while (e > 0) {
        if ((e & 1) != 0) r = mul(k, r, a);
        a = mul(k, a, a);
        e >>= 1;
    }
    return r;
}

inline elem inv(const ctx& k, const elem& a) {
    if (is_zero(k, a)) fail(errc::division_by_zero, "fast-field inverse of zero");
    return pow(k, a, k.size() - 2);
}

inline elem frobenius(const ctx& k, const elem& a) {
    elem r;
    for (std::uint32_t i = 0; i < k.r; ++i) {
        std::uint64_t acc = 0;
        for (std::uint32_t j = 0; j < k.r; ++j) acc += k.red(k.frob[i][j] * a.c[j]);
        r.c[i] = k.red(acc);
    }
    return r;
}

// Polynomials of degree <= 4 over the fast field, for cubic root counting.
struct qpoly {
    int deg = -1;  // -1 is the zero polynomial
    std::array<elem, 5> c{};
};

inline void qtrim(const ctx& k, qpoly& f) {
    while (f.deg >= 0 && is_zero(k, f.c[static_cast<std::size_t>(f.deg)])) --f.deg;
}

/// Number of distinct roots in F_{p^r} of a monic f of degree 2 or 3:
/// deg gcd(x^Q - x, f), with x^Q built by Frobenius iteration so the cost is
/// O(r) products instead of O(r log p).
inline std::size_t distinct_roots_monic(const ctx& k, const qpoly& f) {
    const int d = f.deg;

    auto rem_monic = [&](qpoly a) {
        while (a.deg >= d) {
            elem c = a.c[static_cast<std::size_t>(a.deg)];
            int shift = a.deg - d;
            if (!is_zero(k, c)) {
                for (int j = 0; j < d; ++j)
                    a.c[static_cast<std::size_t>(shift + j)] =
                        sub(k, a.c[static_cast<std::size_t>(shift + j)], mul(k, c, f.c[static_cast<std::size_t>(j)]));
            }
            a.c[static_cast<std::size_t>(a.deg)] = elem{};
            --a.deg;
            qtrim(k, a);
        }
        return a;
    };
    auto mulmod = [&](const qpoly& a, const qpoly& b) {
        qpoly t;
        if (a.deg < 0 || b.deg < 0) return t;
        t.deg = a.deg + b.deg;
        for (int i = 0; i <= a.deg; ++i) {
            if (is_zero(k, a.c[static_cast<std::size_t>(i)])) continue;
            for (int j = 0; j <= b.deg; ++j)
                t.c[static_cast<std::size_t>(i + j)] =
                    add(k, t.c[static_cast<std::size_t>(i + j)],
                        mul(k, a.c[static_cast<std::size_t>(i)], b.c[static_cast<std::size_t>(j)]));
        }
        qtrim(k, t);
        return rem_monic(t);
    };

    // sigma = x^p mod f
    qpoly x;
    x.deg = 1;
    x.c[1] = from_int(k, 1);
    x = rem_monic(x);
    qpoly sigma;
    sigma.deg = 0;
    sigma.c[0] = from_int(k, 1);
    {
        qpoly base = x;
        std::uint64_t e = k.p;
        while (e) {
            if (e & 1) sigma = mulmod(sigma, base);
            base = mulmod(base, base);
            e >>= 1;
        }
    }
    // powers sigma^0..sigma^{d-1} mod f, reused by every Frobenius step
    std::array<qpoly, 4> spow;
    spow[0].deg = 0;
    spow[0].c[0] = from_int(k, 1);
    for (int i = 1; i < d; ++i) spow[static_cast<std::size_t>(i)] = mulmod(spow[static_cast<std::size_t>(i - 1)], sigma);

    qpoly pi = sigma;  // x^{p^j} mod f
    for (std::uint32_t step = 1; step < k.r; ++step) {
        qpoly next;
        next.deg = d - 1;
        for (int i = 0; i <= pi.deg; ++i) {
            elem ci = frobenius(k, pi.c[static_cast<std::size_t>(i)]);
            if (is_zero(k, ci)) continue;
            const qpoly& sp = spow[static_cast<std::size_t>(i)];
            for (int j = 0; j <= sp.deg; ++j)
                next.c[static_cast<std::size_t>(j)] = add(k, next.c[static_cast<std::size_t>(j)],
                                                          mul(k, ci, sp.c[static_cast<std::size_t>(j)]));
        }
        qtrim(k, next);
        pi = next;
    }

    // gcd(pi - x, f); only the degree is needed, so cross-multiplied
    // reduction avoids inversions entirely.
    qpoly a = pi;
    if (a.deg < 1) { a.deg = 1; }
    a.c[1] = sub(k, a.c[1], from_int(k, 1));
    qtrim(k, a);
    if (a.deg < 0) return static_cast<std::size_t>(d);  // f | x^Q - x: splits into distinct roots
    qpoly b = f;
    if (a.deg > b.deg) std::swap(a, b);
    for (;;) {
        if (a.deg < 0) return static_cast<std::size_t>(b.deg > 0 ? b.deg : 0);
        while (b.deg >= a.deg) {
            elem lb = b.c[static_cast<std::size_t>(b.deg)];
            elem la = a.c[static_cast<std::size_t>(a.deg)];
            int shift = b.deg - a.deg;
            qpoly nb;
            nb.deg = b.deg - 1;
            for (int i = 0; i < b.deg; ++i) nb.c[static_cast<std::size_t>(i)] = mul(k, b.c[static_cast<std::size_t>(i)], la);
            for (int i = 0; i <= a.deg && i + shift < b.deg; ++i)
                nb.c[static_cast<std::size_t>(i + shift)] =
                    sub(k, nb.c[static_cast<std::size_t>(i + shift)], mul(k, a.c[static_cast<std::size_t>(i)], lb));
            qtrim(k, nb);
            b = nb;
            if (b.deg < 0) break;
        }
        std::swap(a, b);
    }
}

/// Root count for a not-necessarily-monic f of degree <= 3; `lead_inv` must
/// be the inverse of the leading coefficient when deg >= 2.
inline std::size_t distinct_roots_cubic(const ctx& k, qpoly f, const elem* lead_inv = nullptr) {
    qtrim(k, f);
    if (f.deg < 0) fail(errc::invalid_argument, "zero polynomial slice");
    if (f.deg == 0) return 0;
    if (f.deg == 1) return 1;
    elem li = lead_inv ? *lead_inv : inv(k, f.c[static_cast<std::size_t>(f.deg)]);
    for (int i = 0; i <= f.deg; ++i) f.c[static_cast<std::size_t>(i)] = mul(k, f.c[static_cast<std::size_t>(i)], li);
    return distinct_roots_monic(k, f);
}

} // namespace gf

struct count_options {
    std::uint64_t bound = 1ULL << 24;  // cap on q^r for the affine scan
    unsigned threads = 1;
};

namespace pcdetail {

/// Exhaustive affine count over the base field itself (r = 1), counting
/// distinct roots of the cubic slice per y with generic field arithmetic.
inline std::uint64_t affine_count_generic(const normal_form_curve& c, std::uint64_t cap) {
    const field_ptr& ctx = c.ctx();
    bivariate_fe r = build_curve(c);
    std::vector<field_element> elems = enumerate_field(ctx, cap);
    const field_element zero = field_element::zero(ctx);
    std::uint64_t count = 0;
    for (const auto& y : elems) {
        fepoly::poly slice(4, zero);
        std::vector<field_element> ypow{field_element::one(ctx)};
        for (const auto& [k, v] : r.terms()) {
            while (static_cast<int>(ypow.size()) <= k.second) ypow.push_back(ypow.back() * y);
            slice[static_cast<std::size_t>(k.first)] =
                slice[static_cast<std::size_t>(k.first)] + v * ypow[static_cast<std::size_t>(k.second)];
        }
        fepoly::trim(slice);
        if (slice.empty()) { count += static_cast<std::uint64_t>(elems.size()); continue; }
        count += fepoly::distinct_roots(slice, ctx);
    }
    return count;
}

inline std::uint64_t affine_count_fast(const normal_form_curve& c, std::uint32_t r, const count_options& opt) {
    const field_ptr& base = c.ctx();
    const std::uint64_t p = base->p;
    gf::ctx k = gf::ctx::make(p, r);
    const std::size_t m = c.m();
    const std::size_t n = c.n;

    std::vector<gf::elem> icoef(m + 1), jcoef(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        icoef[i] = gf::from_int(k, static_cast<long long>(c.I[i].residue()));
        jcoef[i] = gf::from_int(k, static_cast<long long>(c.J[i].residue()));
    }

    BigInt qr = k.size();
    std::uint64_t total = static_cast<std::uint64_t>(qr);
    constexpr std::size_t batch = 256;  // leading coefficients inverted per block

    auto worker = [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& out) {
        gf::elem y;
        {
            std::uint64_t v = lo;
            for (std::uint32_t d = 0; d < k.r; ++d) { y.c[d] = v % p; v /= p; }
        }
        std::vector<gf::elem> ypow(n + 1);
        std::vector<gf::qpoly> fs(batch);
        std::vector<gf::elem> leads(batch), prefix(batch);
        std::uint64_t cnt = 0;
        std::uint64_t idx = lo;
        while (idx < hi) {
            std::size_t bsz = static_cast<std::size_t>(std::min<std::uint64_t>(batch, hi - idx));
            // pass 1: build the cubic slice for each y in the block
            for (std::size_t s = 0; s < bsz; ++s) {
                ypow[0] = gf::from_int(k, 1);
                for (std::size_t e = 1; e <= n; ++e) ypow[e] = gf::mul(k, ypow[e - 1], y);
                gf::qpoly f;
                f.deg = 3;
                f.c[3] = ypow[n];
                gf::elem a2{};
                for (std::size_t i = 0; i <= m; ++i) a2 = gf::add(k, a2, gf::mul(k, jcoef[i], ypow[n + i - m]));
                f.c[2] = gf::neg(k, a2);
                gf::elem a1{};
                for (std::size_t i = 0; i <= m; ++i) a1 = gf::add(k, a1, gf::mul(k, icoef[i], ypow[m - i]));
                f.c[1] = a1;
                f.c[0] = gf::from_int(k, -1);
                fs[s] = f;
                leads[s] = gf::is_zero(k, f.c[3]) ? gf::from_int(k, 1) : f.c[3];
                for (std::uint32_t d = 0; d < k.r; ++d) {
                    if (++y.c[d] < p) break;
                    y.c[d] = 0;
                }
            }
            // batched inversion of the leading coefficients
            prefix[0] = leads[0];
            for (std::size_t s = 1; s < bsz; ++s) prefix[s] = gf::mul(k, prefix[s - 1], leads[s]);
            gf::elem run = gf::inv(k, prefix[bsz - 1]);
            for (std::size_t s = bsz; s-- > 0;) {
                gf::elem li = s == 0 ? run : gf::mul(k, run, prefix[s - 1]);
                run = gf::mul(k, run, leads[s]);
                gf::qpoly& f = fs[s];
                gf::qtrim(k, f);
                if (f.deg <= 0) { /* constant -1: no roots */ }
                else if (f.deg == 1) { cnt += 1; }
                else {
                    for (int i = 0; i <= f.deg; ++i)
                        f.c[static_cast<std::size_t>(i)] = gf::mul(k, f.c[static_cast<std::size_t>(i)], li);
                    cnt += gf::distinct_roots_monic(k, f);
                }
            }
            idx += bsz;
        }
        out = cnt;
    };

    unsigned nt = opt.threads ? opt.threads : 1;
    if (nt == 1 || total < 4096) {
        std::uint64_t out = 0;
        worker(0, total, out);
        return out;
    }
    std::vector<std::uint64_t> parts(nt, 0);
    std::vector<std::thread> threads;
    std::uint64_t chunk = (total + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(total, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back(worker, lo, hi, std::ref(parts[t]));
    }
    for (auto& th : threads) th.join();
    std::uint64_t sum = 0;
    for (auto v : parts) sum += v;
    return sum;
}

/// Points of the smooth model above the line Z = 0, counted over F_{q^r}.
/// For odd n these are O_2, W_1, W_2, all rational over the base once the
/// fiber is good. For even n, W_1 plus the roots of the two quadratics from
/// the blowup data, counted in the extension; the even branch is the
/// experimental one.
inline std::uint64_t infinity_count(const normal_form_curve& c, std::uint32_t r) {
    if (c.n % 2 == 1) return 3;
    const field_ptr& base = c.ctx();
    if (base->p == 2) fail(errc::invalid_argument, "even-n infinity counting not supported in characteristic 2");
    const std::size_t m = c.m();
    field_element four = field_element::from_int(base, 4);
    field_element disc_o = c.J[0] * c.J[0] - four * c.I[m];
    field_element disc_w = c.I[0] * c.I[0] - four * c.J[m];
    BigInt qr = boost::multiprecision::pow(base->size(), r);
    auto square_in_ext = [&](const field_element& d) {
        if (d.is_zero()) fail(errc::invalid_argument, "degenerate quadratic at infinity (not a good fiber)");
        field_element chi = d.pow((qr - 1) / 2);
        return chi.is_one();
    };
    std::uint64_t total = 1;  // W_1
    total += square_in_ext(disc_o) ? 2 : 0;
    total += square_in_ext(disc_w) ? 2 : 0;
    return total;
}

} // namespace pcdetail

/// N_r: number of F_{q^r}-points of the smooth model, i.e. affine solutions
/// of R = 0 plus the points at infinity. Precondition: the fiber is good
/// over the base field (checked by good_fiber_check).
inline std::uint64_t count_points(const normal_form_curve& c, std::uint32_t r, const count_options& opt = {}) {
    const field_ptr& base = c.ctx();
    if (!base->finite()) fail(errc::invalid_argument, "point counts need a finite base field");
    if (r < 1) fail(errc::invalid_argument, "extension degree must be >= 1");
    BigInt qr = boost::multiprecision::pow(base->size(), r);
    if (qr > opt.bound)
        fail(errc::enumeration_too_large,
             "q^r = " + qr.str() + " exceeds the scan bound " + std::to_string(opt.bound));

    std::uint64_t affine;
    if (base->kind == field_kind::prime) {
        affine = pcdetail::affine_count_fast(c, r, opt);
    } else if (r == 1) {
        affine = pcdetail::affine_count_generic(c, opt.bound);
    } else {
        fail(errc::extension_field_unavailable,
             "counting over extensions of a non-prime base field is not supported");
    }
    return affine + pcdetail::infinity_count(c, r);
}

struct genus_fit_report {
    bool ok = false;
    std::string reason;
    std::vector<BigInt> l_coeffs;    // b_0 .. b_{2 g0}
    std::vector<BigInt> predicted;   // predicted N_{g0+1} .. N_K
};

/// Verify a genus hypothesis from point counts. Builds the L-polynomial from
/// N_1..N_{g0} via Newton's identities on the Frobenius power sums plus the
/// functional-equation symmetry b_{2g-i} = q^{g-i} b_i, then predicts the
/// remaining counts and compares exactly.
inline genus_fit_report genus_fit(const std::vector<BigInt>& counts, const BigInt& q, std::size_t g0) {
    genus_fit_report rep;
    const std::size_t K = counts.size();
    if (K < g0) fail(errc::invalid_argument, "need at least g0 counts to fit");

    std::vector<BigRat> s(K + 1);  // power sums s_r = q^r + 1 - N_r
    {
        BigInt qpow_r = 1;
        for (std::size_t r = 1; r <= K; ++r) {
            qpow_r *= q;
            s[r] = BigRat(qpow_r + 1 - counts[r - 1]);
        }
    }

    // Newton: k e_k = sum_{j=1..k} (-1)^{j-1} e_{k-j} s_j
    std::vector<BigRat> e(2 * g0 + 1);
    e[0] = 1;
    for (std::size_t k = 1; k <= g0; ++k) {
        BigRat acc = 0;
        for (std::size_t j = 1; j <= k; ++j) {
            BigRat term = e[k - j] * s[j];
            if (j % 2 == 0) term = -term;
            acc += term;
        }
        e[k] = acc / BigRat(static_cast<long long>(k));
        if (denominator(e[k]) != 1) {
            rep.reason = "InconsistentFunctionalEquation: non-integral L-polynomial coefficient e_" + std::to_string(k);
            return rep;
        }
    }
    // functional equation: with b_k = (-1)^k e_k, b_{2g-i} = q^{g-i} b_i
    std::vector<BigInt> b(2 * g0 + 1);
    for (std::size_t k = 0; k <= g0; ++k) {
        BigInt bk = numerator(e[k]);
        if (k % 2 == 1) bk = -bk;
        b[k] = bk;
    }
    {
        BigInt qpow = 1;
        for (std::size_t i = g0; i-- > 0;) {
            qpow *= q;  // q^{g0-i}
            b[2 * g0 - i] = qpow * b[i];
        }
    }
    for (std::size_t k = g0 + 1; k <= 2 * g0; ++k) {
        BigRat ek = BigRat(b[k]);
        if (k % 2 == 1) ek = -ek;
        e[k] = ek;
    }
    rep.l_coeffs = b;

    // predict s_k for k > g0 from the full e-vector, then compare counts
    bool all_match = true;
    BigInt qpow_k = boost::multiprecision::pow(q, static_cast<unsigned>(g0));
    for (std::size_t k = g0 + 1; k <= K; ++k) {
        BigRat acc = 0;
        std::size_t top = std::min(k - 1, 2 * g0);
        for (std::size_t j = 1; j <= top; ++j) {
            BigRat term = e[j] * s[k - j];
            if (j % 2 == 0) term = -term;
            acc += term;
        }
        if (k <= 2 * g0) {
            BigRat term = BigRat(static_cast<long long>(k)) * e[k];
            if (k % 2 == 0) term = -term;
            acc += term;
        }
        s[k] = acc;
        qpow_k *= q;
        BigRat predicted_n = BigRat(qpow_k + 1) - acc;
        if (denominator(predicted_n) != 1) {
            rep.reason = "InconsistentFunctionalEquation: non-integral predicted count N_" + std::to_string(k);
            return rep;
        }
        rep.predicted.push_back(numerator(predicted_n));
        if (numerator(predicted_n) != counts[k - 1]) all_match = false;
    }
    if (!all_match) {
        rep.reason = "predicted counts disagree with supplied counts";
        return rep;
    }
    rep.ok = true;
    return rep;
}

/// |N_r - q^r - 1| <= 2 g sqrt(q^r), checked exactly in the squared form.
inline bool within_hasse_weil(const BigInt& n_r, const BigInt& q, std::uint32_t r, std::size_t g) {
    BigInt qr = boost::multiprecision::pow(q, r);
    BigInt diff = n_r - qr - 1;
    return diff * diff <= BigInt(4) * BigInt(g) * BigInt(g) * qr;
}

} // namespace pgram
