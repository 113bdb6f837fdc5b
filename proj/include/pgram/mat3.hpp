#pragma once

#include <array>

#include "bivariate.hpp"
#include "laurent.hpp"
#include "scalar.hpp"

namespace pgram {

/// 3x3 matrix over an exact ring (field elements, dual numbers, or Laurent
/// polynomials in the spectral parameter). All operations are exact.
template <class R>
class mat3 {
public:
    mat3() = default;

    explicit mat3(std::array<R, 9> entries) : e_(std::move(entries)) {}

    static mat3 identity_like(const R& proto) {
        mat3 m = filled(zero_like(proto));
        R one = one_like(proto);
        m.at(0, 0) = one;
        m.at(1, 1) = one;
        m.at(2, 2) = one;
        return m;
    }

    static mat3 filled(const R& v) {
        mat3 m;
        m.e_.fill(v);
        return m;
    }

    R& at(int r, int c) { return e_[static_cast<std::size_t>(3 * r + c)]; }
    const R& at(int r, int c) const { return e_[static_cast<std::size_t>(3 * r + c)]; }
    const std::array<R, 9>& entries() const { return e_; }

    friend mat3 operator*(const mat3& a, const mat3& b) {
        mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j) + a.at(i, 2) * b.at(2, j);
        return r;
    }

    friend mat3 operator+(const mat3& a, const mat3& b) {
        mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.e_[i] = a.e_[i] + b.e_[i];
        return r;
    }

    friend mat3 operator-(const mat3& a, const mat3& b) {
        mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.e_[i] = a.e_[i] - b.e_[i];
        return r;
    }

    mat3 scaled(const R& s) const {
        mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.e_[i] = e_[i] * s;
        return r;
    }

    std::array<R, 3> apply(const std::array<R, 3>& v) const {
        return {at(0, 0) * v[0] + at(0, 1) * v[1] + at(0, 2) * v[2],
                at(1, 0) * v[0] + at(1, 1) * v[1] + at(1, 2) * v[2],
                at(2, 0) * v[0] + at(2, 1) * v[1] + at(2, 2) * v[2]};
    }

    mat3 transposed() const {
        mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.at(i, j) = at(j, i);
        return r;
    }

    R trace() const { return at(0, 0) + at(1, 1) + at(2, 2); }

    /// Sum of principal 2x2 minors; avoids any division so it is valid in
    /// every characteristic.
    R second_invariant() const {
        return (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) +
               (at(0, 0) * at(2, 2) - at(0, 2) * at(2, 0)) +
               (at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0));
    }

    R det() const {
        return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
               at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
               at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    }

    mat3 adjugate() const {
        mat3 r;
        r.at(0, 0) = at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1);
        r.at(0, 1) = at(0, 2) * at(2, 1) - at(0, 1) * at(2, 2);
        r.at(0, 2) = at(0, 1) * at(1, 2) - at(0, 2) * at(1, 1);
        r.at(1, 0) = at(1, 2) * at(2, 0) - at(1, 0) * at(2, 2);
        r.at(1, 1) = at(0, 0) * at(2, 2) - at(0, 2) * at(2, 0);
        r.at(1, 2) = at(0, 2) * at(1, 0) - at(0, 0) * at(1, 2);
        r.at(2, 0) = at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0);
        r.at(2, 1) = at(0, 1) * at(2, 0) - at(0, 0) * at(2, 1);
        r.at(2, 2) = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        return r;
    }

    friend bool operator==(const mat3& a, const mat3& b) { return a.e_ == b.e_; }
    friend bool operator!=(const mat3& a, const mat3& b) { return !(a == b); }

private:
    std::array<R, 9> e_;
};

using mat3_fe = mat3<field_element>;

/// Inverse over a field scalar (divides the adjugate by the determinant).
inline mat3_fe inverse(const mat3_fe& m) {
    field_element d = m.det();
    if (d.is_zero()) fail(errc::invalid_argument, "matrix not invertible");
    return m.adjugate().scaled(d.inv());
}

/// Characteristic polynomial det(lambda*Id - M) of a 3x3 matrix over the
/// Laurent ring, expanded exactly as a bivariate polynomial in (lambda, zeta).
/// Assembled from trace / second invariant / determinant, so tests can check
/// it against an independent cofactor expansion.
template <class S>
bivariate<S> charpoly3(const mat3<laurent<S>>& m, const S& proto) {
    laurent<S> c1 = m.trace();
    laurent<S> c2 = m.second_invariant();
    laurent<S> c3 = m.det();
    bivariate<S> q = bivariate<S>::term(3, 0, one_like(proto));
    for (const auto& [e, v] : c1.terms()) q.accumulate(2, e, -v);
    for (const auto& [e, v] : c2.terms()) q.accumulate(1, e, v);
    for (const auto& [e, v] : c3.terms()) q.accumulate(0, e, -v);
    return q;
}

inline bivariate_fe charpoly3(const mat3<laurent_fe>& m, const field_ptr& ctx) {
    return charpoly3(m, field_element::one(ctx));
}

/// Projective equality for matrices over an integral domain: A and B are
/// proportional nonzero matrices iff all 2x2 minors of the stacked entry
/// vectors vanish. No division, so this works over Laurent rings.
template <class R>
bool proportional(const mat3<R>& a, const mat3<R>& b) {
    int pivot = -1;
    for (int i = 0; i < 9; ++i) {
        if (!a.entries()[static_cast<std::size_t>(i)].is_zero() ||
            !b.entries()[static_cast<std::size_t>(i)].is_zero()) {
            pivot = i;
            break;
        }
    }
    if (pivot < 0) return false;  // both zero: not valid projective matrices
    const R& ap = a.entries()[static_cast<std::size_t>(pivot)];
    const R& bp = b.entries()[static_cast<std::size_t>(pivot)];
    if (ap.is_zero() || bp.is_zero()) return false;
    for (int i = 0; i < 9; ++i) {
        const R& ai = a.entries()[static_cast<std::size_t>(i)];
        const R& bi = b.entries()[static_cast<std::size_t>(i)];
        if (!(ap * bi - ai * bp).is_zero()) return false;
    }
    return true;
}

} // namespace pgram
