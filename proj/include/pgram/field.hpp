#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace pgram {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

namespace fpdetail {

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    if (s >= p || s < a) s -= p;
    return s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on signed 128-bit intermediates
    if (a % p == 0) fail(errc::division_by_zero, "inverse of 0 mod p");
    __int128 t = 0, newt = 1;
    __int128 r = static_cast<__int128>(p), newr = static_cast<__int128>(a % p);
    while (newr != 0) {
        __int128 q = r / newr;
        t -= q * newt; std::swap(t, newt);
        r -= q * newr; std::swap(r, newr);
    }
    if (t < 0) t += p;
    return static_cast<std::uint64_t>(t);
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

/// Dense polynomials over F_p, ascending coefficients, no trailing zeros.
using Poly = std::vector<std::uint64_t>;

inline void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int poly_deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = addmod(c[i + j], mulmod(a[i], b[j], p), p);
    }
    poly_trim(c);
    return c;
}

/// Remainder modulo a monic polynomial.
inline Poly poly_rem(Poly a, const Poly& mod, std::uint64_t p) {
    const int r = poly_deg(mod);
    while (poly_deg(a) >= r) {
        std::uint64_t c = a.back();
        int shift = poly_deg(a) - r;
        if (c) {
            for (int j = 0; j < r; ++j)
                a[shift + j] = submod(a[shift + j], mulmod(c, mod[j], p), p);
        }
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    poly_trim(a); poly_trim(b);
    while (!b.empty()) {
        // make b monic, then reduce
        std::uint64_t lead_inv = invmod(b.back(), p);
        Poly bm = b;
        for (auto& c : bm) c = mulmod(c, lead_inv, p);
        a = poly_rem(std::move(a), bm, p);
        std::swap(a, b);
    }
    if (!a.empty()) {
        std::uint64_t lead_inv = invmod(a.back(), p);
        for (auto& c : a) c = mulmod(c, lead_inv, p);
    }
    return a;
}

/// x^e mod `mod` (monic), with arbitrary-precision exponent.
inline Poly poly_powmod_x(BigInt e, const Poly& mod, std::uint64_t p) {
    Poly result{1};
    Poly base = poly_rem(Poly{0, 1}, mod, p);
    while (e > 0) {
        if ((e & 1) != 0) result = poly_rem(poly_mul(result, base, p), mod, p);
        base = poly_rem(poly_mul(base, base, p), mod, p);
        e >>= 1;
    }
    return result;
}

/// Rabin irreducibility test for monic f over F_p.
inline bool poly_irreducible(const Poly& f, std::uint64_t p) {
    const int r = poly_deg(f);
    if (r < 1) return false;
    if (r == 1) return true;
    BigInt pr = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(r));
    Poly xq = poly_powmod_x(pr, f, p);
    Poly x = poly_rem(Poly{0, 1}, f, p);
    if (xq != x) return false;
    // for each prime divisor l of r, gcd(x^{p^{r/l}} - x, f) must be trivial
    auto shares_factor = [&](int sub) {
        BigInt e = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(sub));
        Poly diff = poly_powmod_x(e, f, p);
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = submod(diff[1], 1, p);
        poly_trim(diff);
        Poly g = poly_gcd(diff, f, p);
        return poly_deg(g) > 0;
    };
    int rr = r;
    for (int l = 2; l * l <= rr; ++l) {
        if (rr % l) continue;
        while (rr % l == 0) rr /= l;
        if (shares_factor(r / l)) return false;
    }
    if (rr > 1 && shares_factor(r / rr)) return false;
    return true;
}

/// First monic irreducible of degree r over F_p in a fixed candidate order.
/// The low coefficients enumerate the base-p expansion of k = 1, 2, 3, ...
inline Poly find_irreducible(std::uint64_t p, std::uint32_t r) {
    for (std::uint64_t k = 1;; ++k) {
        Poly f(r + 1, 0);
        f[r] = 1;
        std::uint64_t v = k;
        for (std::uint32_t i = 0; i < r && v; ++i) {
            f[i] = v % p;
            v /= p;
        }
        if (v) fail(errc::invalid_argument, "no irreducible modulus found in search range");
        if (poly_irreducible(f, p)) return f;
    }
}

/// Inverse of a modulo a monic irreducible, by extended Euclid over F_p[t].
inline Poly poly_inv_mod(Poly a, const Poly& mod, std::uint64_t p) {
    poly_trim(a);
    if (a.empty()) fail(errc::division_by_zero, "inverse of 0 in extension field");
    Poly r0 = mod, r1 = a;
    Poly t0{}, t1{1};
    while (!r1.empty()) {
        // divide r0 by r1
        std::uint64_t lead_inv = invmod(r1.back(), p);
        Poly q(std::max<std::size_t>(r0.size(), r1.size()), 0);
        Poly rem = r0;
        while (poly_deg(rem) >= poly_deg(r1)) {
            int shift = poly_deg(rem) - poly_deg(r1);
            std::uint64_t c = mulmod(rem.back(), lead_inv, p);
            q[shift] = addmod(q[shift], c, p);
            for (std::size_t j = 0; j < r1.size(); ++j)
                rem[shift + j] = submod(rem[shift + j], mulmod(c, r1[j], p), p);
            poly_trim(rem);
        }
        poly_trim(q);
        Poly t2 = t0;
        Poly qt = poly_mul(q, t1, p);
        if (t2.size() < qt.size()) t2.resize(qt.size(), 0);
        for (std::size_t i = 0; i < qt.size(); ++i) t2[i] = submod(t2[i], qt[i], p);
        poly_trim(t2);
        r0 = std::move(r1); r1 = std::move(rem);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (poly_deg(r0) != 0) fail(errc::division_by_zero, "element not invertible");
    std::uint64_t s = invmod(r0[0], p);
    for (auto& c : t0) c = mulmod(c, s, p);
    return poly_rem(std::move(t0), mod, p);
}

} // namespace fpdetail

enum class field_kind { rationals, prime, extension };

class field_context;
using field_ptr = std::shared_ptr<const field_context>;

/// Describes one of Q, F_p, or F_{p^r}. Immutable; share freely across threads.
class field_context {
public:
    field_kind kind;
    std::uint64_t p = 0;             // characteristic (0 for Q)
    std::uint32_t degree = 1;        // extension degree r
    std::vector<std::uint64_t> modulus; // monic irreducible over F_p, ascending, size degree+1

    static field_ptr rationals() {
        auto c = std::make_shared<field_context>();
        c->kind = field_kind::rationals;
        return c;
    }

    static field_ptr prime_field(std::uint64_t p) {
        if (!fpdetail::is_prime_u64(p)) fail(errc::invalid_argument, "field characteristic must be prime: " + std::to_string(p));
        if (p >= (1ULL << 62)) fail(errc::invalid_argument, "prime too large");
        auto c = std::make_shared<field_context>();
        c->kind = field_kind::prime;
        c->p = p;
        return c;
    }

    /// Extension field with the deterministic built-in modulus for (p, r).
    static field_ptr extension_field(std::uint64_t p, std::uint32_t r) {
        if (r == 0) fail(errc::invalid_argument, "extension degree must be >= 1");
        if (r == 1) return prime_field(p);
        if (!fpdetail::is_prime_u64(p)) fail(errc::invalid_argument, "field characteristic must be prime");
        return extension_field(p, fpdetail::find_irreducible(p, r));
    }

    /// Extension field with a user-supplied monic irreducible modulus.
    static field_ptr extension_field(std::uint64_t p, std::vector<std::uint64_t> modulus) {
        if (!fpdetail::is_prime_u64(p)) fail(errc::invalid_argument, "field characteristic must be prime");
        if (modulus.size() < 3) fail(errc::invalid_argument, "extension modulus must have degree >= 2");
        for (auto& c : modulus) c %= p;
        if (modulus.back() != 1) fail(errc::invalid_argument, "extension modulus must be monic");
        if (!fpdetail::poly_irreducible(modulus, p)) fail(errc::invalid_argument, "extension modulus is reducible");
        auto c = std::make_shared<field_context>();
        c->kind = field_kind::extension;
        c->p = p;
        c->degree = static_cast<std::uint32_t>(modulus.size() - 1);
        c->modulus = std::move(modulus);
        return c;
    }

    /// Parse a field description: "Q", "p", or "p^r".
    static field_ptr parse(const std::string& desc) {
        std::string s;
        for (char ch : desc) if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
        if (s.empty()) fail(errc::parse_error, "empty field description");
        if (s == "Q" || s == "q") return rationals();
        auto caret = s.find('^');
        try {
            if (caret == std::string::npos) return prime_field(std::stoull(s));
            std::uint64_t p = std::stoull(s.substr(0, caret));
            std::uint32_t r = static_cast<std::uint32_t>(std::stoul(s.substr(caret + 1)));
            return extension_field(p, r);
        } catch (const std::invalid_argument&) {
            fail(errc::parse_error, "bad field description: " + desc);
        } catch (const std::out_of_range&) {
            fail(errc::parse_error, "bad field description: " + desc);
        }
    }

    std::string description() const {
        switch (kind) {
            case field_kind::rationals: return "Q";
            case field_kind::prime: return std::to_string(p);
            case field_kind::extension: return std::to_string(p) + "^" + std::to_string(degree);
        }
        return "?";
    }

    bool finite() const { return kind != field_kind::rationals; }

    BigInt size() const {
        if (!finite()) fail(errc::invalid_argument, "rationals have no finite size");
        return boost::multiprecision::pow(BigInt(p), degree);
    }

    std::uint64_t characteristic() const { return p; }

    bool same(const field_context& o) const {
        return kind == o.kind && p == o.p && modulus == o.modulus;
    }
};

/// One exact element of Q, F_p, or F_{p^r}.
class field_element {
public:
    field_element() = default; // empty shell; any operation on it is a bug

    static field_element zero(const field_ptr& ctx) { return from_int(ctx, 0); }
    static field_element one(const field_ptr& ctx) { return from_int(ctx, 1); }

    static field_element from_int(const field_ptr& ctx, long long v) { return from_bigint(ctx, BigInt(v)); }

    static field_element from_bigint(const field_ptr& ctx, const BigInt& v) {
        field_element e;
        e.ctx_ = ctx;
        switch (ctx->kind) {
            case field_kind::rationals:
                e.rat_ = BigRat(v);
                break;
            case field_kind::prime:
                e.res_ = reduce_int(v, ctx->p);
                break;
            case field_kind::extension:
                e.ext_.assign(ctx->degree, 0);
                e.ext_[0] = reduce_int(v, ctx->p);
                break;
        }
        return e;
    }

    /// num/den as a field element (in F_p this is num * den^{-1}).
    static field_element from_ratio(const field_ptr& ctx, long long num, long long den) {
        return from_int(ctx, num) / from_int(ctx, den);
    }

    static field_element from_rational(const field_ptr& ctx, const BigRat& q) {
        if (ctx->kind == field_kind::rationals) {
            field_element e;
            e.ctx_ = ctx;
            e.rat_ = q;
            return e;
        }
        return from_bigint(ctx, numerator(q)) / from_bigint(ctx, denominator(q));
    }

    /// Prime-field element from a residue; extension element from coefficients.
    static field_element from_residue(const field_ptr& ctx, std::uint64_t r) {
        field_element e;
        e.ctx_ = ctx;
        if (ctx->kind == field_kind::prime) {
            e.res_ = r % ctx->p;
        } else if (ctx->kind == field_kind::extension) {
            e.ext_.assign(ctx->degree, 0);
            e.ext_[0] = r % ctx->p;
        } else {
            e.rat_ = BigRat(r);
        }
        return e;
    }

    static field_element from_coeffs(const field_ptr& ctx, std::vector<std::uint64_t> coeffs) {
        if (ctx->kind != field_kind::extension) fail(errc::invalid_argument, "coefficient vector needs an extension field");
        if (coeffs.size() > ctx->degree) fail(errc::invalid_argument, "coefficient vector longer than extension degree");
        field_element e;
        e.ctx_ = ctx;
        e.ext_.assign(ctx->degree, 0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) e.ext_[i] = coeffs[i] % ctx->p;
        return e;
    }

    const field_ptr& ctx() const { return ctx_; }

    bool is_zero() const {
        switch (ctx_->kind) {
            case field_kind::rationals: return rat_ == 0;
            case field_kind::prime: return res_ == 0;
            case field_kind::extension:
                for (auto c : ext_) if (c) return false;
                return true;
        }
        return false;
    }

    bool is_one() const { return *this == one(ctx_); }

    const BigRat& rational_value() const {
        if (ctx_->kind != field_kind::rationals) fail(errc::invalid_argument, "not a rational");
        return rat_;
    }

    std::uint64_t residue() const {
        if (ctx_->kind != field_kind::prime) fail(errc::invalid_argument, "not a prime-field element");
        return res_;
    }

    const std::vector<std::uint64_t>& coeffs() const {
        if (ctx_->kind != field_kind::extension) fail(errc::invalid_argument, "not an extension element");
        return ext_;
    }

    friend field_element operator+(const field_element& a, const field_element& b) {
        check_same(a, b);
        field_element r = a;
        switch (a.ctx_->kind) {
            case field_kind::rationals: r.rat_ += b.rat_; break;
            case field_kind::prime: r.res_ = fpdetail::addmod(a.res_, b.res_, a.ctx_->p); break;
            case field_kind::extension:
                for (std::size_t i = 0; i < r.ext_.size(); ++i)
                    r.ext_[i] = fpdetail::addmod(a.ext_[i], b.ext_[i], a.ctx_->p);
                break;
        }
        return r;
    }

    friend field_element operator-(const field_element& a, const field_element& b) {
        check_same(a, b);
        field_element r = a;
        switch (a.ctx_->kind) {
            case field_kind::rationals: r.rat_ -= b.rat_; break;
            case field_kind::prime: r.res_ = fpdetail::submod(a.res_, b.res_, a.ctx_->p); break;
            case field_kind::extension:
                for (std::size_t i = 0; i < r.ext_.size(); ++i)
                    r.ext_[i] = fpdetail::submod(a.ext_[i], b.ext_[i], a.ctx_->p);
                break;
        }
        return r;
    }

    friend field_element operator*(const field_element& a, const field_element& b) {
        check_same(a, b);
        field_element r = a;
        switch (a.ctx_->kind) {
            case field_kind::rationals: r.rat_ *= b.rat_; break;
            case field_kind::prime: r.res_ = fpdetail::mulmod(a.res_, b.res_, a.ctx_->p); break;
            case field_kind::extension: r.ext_ = ext_mul(a.ext_, b.ext_, *a.ctx_); break;
        }
        return r;
    }

    friend field_element operator/(const field_element& a, const field_element& b) { return a * b.inv(); }

    field_element operator-() const {
        field_element r = *this;
        switch (ctx_->kind) {
            case field_kind::rationals: r.rat_ = -rat_; break;
            case field_kind::prime: r.res_ = res_ ? ctx_->p - res_ : 0; break;
            case field_kind::extension:
                for (auto& c : r.ext_) c = c ? ctx_->p - c : 0;
                break;
        }
        return r;
    }

    field_element inv() const {
        if (is_zero()) fail(errc::division_by_zero, "field inverse of zero");
        field_element r = *this;
        switch (ctx_->kind) {
            case field_kind::rationals: r.rat_ = 1 / rat_; break;
            case field_kind::prime: r.res_ = fpdetail::invmod(res_, ctx_->p); break;
            case field_kind::extension: {
                fpdetail::Poly a(ext_.begin(), ext_.end());
                fpdetail::Poly u = fpdetail::poly_inv_mod(std::move(a), ctx_->modulus, ctx_->p);
                r.ext_.assign(ctx_->degree, 0);
                for (std::size_t i = 0; i < u.size(); ++i) r.ext_[i] = u[i];
                break;
            }
        }
        return r;
    }

    field_element pow(long long e) const {
        field_element base = e < 0 ? inv() : *this;
        unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
        field_element r = one(ctx_);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    field_element pow(BigInt e) const {
        field_element base = e < 0 ? inv() : *this;
        if (e < 0) e = -e;
        field_element r = one(ctx_);
        while (e > 0) {
            if ((e & 1) != 0) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const field_element& a, const field_element& b) {
        check_same(a, b);
        switch (a.ctx_->kind) {
            case field_kind::rationals: return a.rat_ == b.rat_;
            case field_kind::prime: return a.res_ == b.res_;
            case field_kind::extension: return a.ext_ == b.ext_;
        }
        return false;
    }

    friend bool operator!=(const field_element& a, const field_element& b) { return !(a == b); }

    /// Total order used for deterministic tie-breaking (not a field notion).
    friend int compare(const field_element& a, const field_element& b) {
        check_same(a, b);
        switch (a.ctx_->kind) {
            case field_kind::rationals: return a.rat_ < b.rat_ ? -1 : (a.rat_ == b.rat_ ? 0 : 1);
            case field_kind::prime: return a.res_ < b.res_ ? -1 : (a.res_ == b.res_ ? 0 : 1);
            case field_kind::extension:
                for (std::size_t i = a.ext_.size(); i-- > 0;) {
                    if (a.ext_[i] != b.ext_[i]) return a.ext_[i] < b.ext_[i] ? -1 : 1;
                }
                return 0;
        }
        return 0;
    }

    /// Canonical text form; parse() round-trips it bit-exactly.
    std::string to_string() const {
        switch (ctx_->kind) {
            case field_kind::rationals: {
                BigInt num = numerator(rat_), den = denominator(rat_);
                if (den == 1) return num.str();
                return num.str() + "/" + den.str();
            }
            case field_kind::prime:
                return std::to_string(res_) + " mod " + std::to_string(ctx_->p);
            case field_kind::extension: {
                std::string s = "[";
                for (std::size_t i = 0; i < ext_.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(ext_[i]);
                }
                s += "] mod (" + std::to_string(ctx_->p) + ", [";
                for (std::size_t i = 0; i < ctx_->modulus.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(ctx_->modulus[i]);
                }
                s += "])";
                return s;
            }
        }
        return "?";
    }

    static field_element parse(const field_ptr& ctx, const std::string& text);

    /// Compact canonical key (unique per value within one context).
    void encode_into(std::string& out) const {
        switch (ctx_->kind) {
            case field_kind::rationals:
                out += numerator(rat_).str();
                out += '/';
                out += denominator(rat_).str();
                break;
            case field_kind::prime:
                out += std::to_string(res_);
                break;
            case field_kind::extension:
                for (std::size_t i = 0; i < ext_.size(); ++i) {
                    if (i) out += ',';
                    out += std::to_string(ext_[i]);
                }
                break;
        }
    }

    std::string encode() const {
        std::string s;
        encode_into(s);
        return s;
    }

    static void check_same(const field_element& a, const field_element& b) {
        if (!a.ctx_ || !b.ctx_) fail(errc::invalid_argument, "uninitialized field element");
        if (a.ctx_.get() != b.ctx_.get() && !a.ctx_->same(*b.ctx_))
            fail(errc::mixed_field_contexts, a.ctx_->description() + " vs " + b.ctx_->description());
    }

private:
    static std::uint64_t reduce_int(const BigInt& v, std::uint64_t p) {
        BigInt m = v % p;
        if (m < 0) m += p;
        return static_cast<std::uint64_t>(m);
    }

    static std::vector<std::uint64_t> ext_mul(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b,
                                              const field_context& ctx) {
        const std::size_t r = ctx.degree;
        const std::uint64_t p = ctx.p;
        std::vector<std::uint64_t> tmp(2 * r - 1, 0);
        for (std::size_t i = 0; i < r; ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < r; ++j)
                tmp[i + j] = fpdetail::addmod(tmp[i + j], fpdetail::mulmod(a[i], b[j], p), p);
        }
        for (std::size_t i = 2 * r - 2; i + 1 > r; --i) {
            std::uint64_t c = tmp[i];
            if (!c) continue;
            for (std::size_t j = 0; j < r; ++j)
                tmp[i - r + j] = fpdetail::submod(tmp[i - r + j], fpdetail::mulmod(c, ctx.modulus[j], p), p);
            tmp[i] = 0;
        }
        tmp.resize(r);
        return tmp;
    }

    field_ptr ctx_;
    BigRat rat_;
    std::uint64_t res_ = 0;
    std::vector<std::uint64_t> ext_;
};

namespace fedetail {

inline std::string strip_ws(const std::string& s) {
    std::string t;
    for (char c : s) if (!isspace(static_cast<unsigned char>(c))) t.push_back(c);
    return t;
}

inline std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
    // expects "[a,b,c]" with no whitespace
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(errc::parse_error, "expected [..] list: " + s);
    std::vector<std::uint64_t> out;
    std::string body = s.substr(1, s.size() - 2);
    if (body.empty()) return out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(std::stoull(tok));
        } catch (...) {
            fail(errc::parse_error, "bad list entry: " + tok);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace fedetail

inline field_element field_element::parse(const field_ptr& ctx, const std::string& text) {
    std::string s = fedetail::strip_ws(text);
    if (s.empty()) fail(errc::parse_error, "empty field element");
    switch (ctx->kind) {
        case field_kind::rationals: {
            auto slash = s.find('/');
            try {
                if (slash == std::string::npos) return from_bigint(ctx, BigInt(s));
                BigInt num(s.substr(0, slash));
                BigInt den(s.substr(slash + 1));
                if (den == 0) fail(errc::parse_error, "zero denominator: " + text);
                field_element e;
                e.ctx_ = ctx;
                e.rat_ = BigRat(num, den);
                return e;
            } catch (const error&) {
                throw;
            } catch (...) {
                fail(errc::parse_error, "bad rational: " + text);
            }
        }
        case field_kind::prime: {
            auto mod = s.find("mod");
            std::string val = mod == std::string::npos ? s : s.substr(0, mod);
            if (mod != std::string::npos) {
                std::uint64_t p = std::stoull(s.substr(mod + 3));
                if (p != ctx->p) fail(errc::mixed_field_contexts, "element modulus " + std::to_string(p) + " vs context " + ctx->description());
            }
            try {
                return from_bigint(ctx, BigInt(val));
            } catch (...) {
                fail(errc::parse_error, "bad residue: " + text);
            }
        }
        case field_kind::extension: {
            auto mod = s.find("mod");
            std::string val = mod == std::string::npos ? s : s.substr(0, mod);
            if (mod != std::string::npos) {
                std::string rest = s.substr(mod + 3);
                if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
                    fail(errc::parse_error, "expected (p, [modulus]): " + text);
                rest = rest.substr(1, rest.size() - 2);
                auto comma = rest.find(',');
                std::uint64_t p = std::stoull(rest.substr(0, comma));
                auto mcoef = fedetail::parse_u64_list(rest.substr(comma + 1));
                if (p != ctx->p || mcoef != ctx->modulus)
                    fail(errc::mixed_field_contexts, "element modulus differs from context " + ctx->description());
            }
            return from_coeffs(ctx, fedetail::parse_u64_list(val));
        }
    }
    fail(errc::parse_error, "unreachable");
}

/// Bounds for random rational sampling.
struct random_bounds {
    long long num_min = -9;
    long long num_max = 9;
    long long den_max = 9;
};

/// Deterministic uniform-ish element for the given context.
inline field_element random_element(const field_ptr& ctx, rng& gen, const random_bounds& rb = {}) {
    switch (ctx->kind) {
        case field_kind::rationals: {
            long long num = gen.range(rb.num_min, rb.num_max);
            long long den = gen.range(1, rb.den_max);
            field_element e = field_element::from_ratio(ctx, num, den);
            return e;
        }
        case field_kind::prime:
            return field_element::from_residue(ctx, gen.below(ctx->p));
        case field_kind::extension: {
            std::vector<std::uint64_t> c(ctx->degree);
            for (auto& v : c) v = gen.below(ctx->p);
            return field_element::from_coeffs(ctx, c);
        }
    }
    fail(errc::invalid_argument, "unreachable");
}

} // namespace pgram
