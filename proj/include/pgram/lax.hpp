#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bivariate.hpp"
#include "dual.hpp"
#include "laurent.hpp"
#include "linalg.hpp"
#include "mat3.hpp"
#include "pentagram.hpp"
#include "polygon.hpp"
#include "scalar.hpp"

namespace pgram {

// Lax matrices with spectral parameter, generic over the scalar so that the
// same code path runs on field elements and on dual numbers (for the exact
// Jacobian of the invariants).

template <class S>
mat3<laurent<S>> lax_L_generic(std::size_t i, const std::vector<S>& x, const std::vector<S>& y) {
    const std::size_t n = x.size();
    const S& xi2 = x[(i + 2) % n];
    const S& yi2 = y[(i + 2) % n];
    S one = one_like(x[0]);
    mat3<laurent<S>> L = mat3<laurent<S>>::filled(laurent<S>{});
    S xinv = xi2.inv();
    L.at(0, 0) = laurent<S>::constant(xinv);
    L.at(0, 1) = laurent<S>::constant(-xinv);
    L.at(1, 0) = laurent<S>::term(-1, one);
    L.at(1, 2) = laurent<S>::term(-1, -one);
    L.at(2, 0) = laurent<S>::constant(yi2);
    return L;
}

template <class S>
mat3<laurent<S>> lax_P_generic(std::size_t i, const std::vector<S>& x, const std::vector<S>& y) {
    const std::size_t n = x.size();
    S one = one_like(x[0]);
    auto u = [&](std::size_t j) { return one - x[j % n] * y[j % n]; };
    S u1 = u(i + 1), u2 = u(i + 2), u3 = u(i + 3);
    // The (1,1) sign is fixed by the zero-curvature identity itself (checked
    // in the test suite against the geometric transition matrices).
    mat3<laurent<S>> P = mat3<laurent<S>>::filled(laurent<S>{});
    P.at(0, 0) = laurent<S>::constant(u2);
    P.at(0, 2) = laurent<S>::constant(-u2);
    P.at(1, 0) = laurent<S>::constant(x[(i + 1) % n] * y[(i + 1) % n] * u2);
    P.at(1, 1) = laurent<S>::constant(u1);
    P.at(1, 2) = laurent<S>::constant(-u2);
    P.at(2, 1) = laurent<S>::term(1, y[(i + 2) % n] * u3);
    if (P.det().is_zero()) fail(errc::singular_p, "P_" + std::to_string(i) + " is singular");
    return P;
}

/// Ordered product T_i = L_{n-1+i} ... L_{i+1} L_i; the default i = 0 is the
/// monodromy-like Lax function whose characteristic coefficients are the
/// pentagram invariants.
template <class S>
mat3<laurent<S>> monodromy_T_generic(const std::vector<S>& x, const std::vector<S>& y, std::size_t i = 0) {
    const std::size_t n = x.size();
    mat3<laurent<S>> t = lax_L_generic(i, x, y);
    for (std::size_t k = 1; k < n; ++k) t = lax_L_generic(i + k, x, y) * t;
    return t;
}

inline mat3<laurent_fe> lax_L(std::size_t i, const corner_coords& c) { return lax_L_generic(i, c.x, c.y); }
inline mat3<laurent_fe> lax_P(std::size_t i, const corner_coords& c) { return lax_P_generic(i, c.x, c.y); }
inline mat3<laurent_fe> monodromy_T(const corner_coords& c, std::size_t i = 0) {
    return monodromy_T_generic(c.x, c.y, i);
}

template <class S>
struct spectral_result {
    std::size_t n = 0;
    std::size_t m = 0;        // floor(n/2)
    bivariate<S> q;           // normalized spectral polynomial in (lambda, zeta)
};

/// Normalized spectral polynomial: zeta^n * det(lambda Id - T_0), rescaled by
/// the weighted scaling (l, l^2, l^3) on the three characteristic
/// coefficients so that the lambda^2 zeta^n coefficient equals -1. The
/// monomial support must land inside the fixed pattern
///   {l^3 z^n} u {l^2 z^{n+i-m}} u {l^2 z^n} u {l z^{m-i}} u {1};
/// anything else indicates an implementation bug and fails loudly.
template <class S>
spectral_result<S> spectral_poly_generic(const std::vector<S>& x, const std::vector<S>& y) {
    const std::size_t n = x.size();
    const std::size_t m = n / 2;
    const S proto = x[0];

    mat3<laurent<S>> t = monodromy_T_generic(x, y);
    bivariate<S> cp = charpoly3(t, proto).shifted(0, static_cast<int>(n));

    S anchor = cp.coeff(2, static_cast<int>(n), proto);
    if (anchor.is_zero()) fail(errc::normalization_degenerate, "lambda^2 zeta^n coefficient vanishes");
    S l = -(anchor.inv());
    S l2 = l * l;
    S l3 = l2 * l;

    bivariate<S> q;
    for (const auto& [k, v] : cp.terms()) {
        switch (k.first) {
            case 3: q.set(k.first, k.second, v); break;
            case 2: q.set(k.first, k.second, v * l); break;
            case 1: q.set(k.first, k.second, v * l2); break;
            case 0: q.set(k.first, k.second, v * l3); break;
            default: fail(errc::support_violation, "lambda-degree outside 0..3");
        }
    }

    auto allowed = [&](int dl, int dz) {
        if (dl == 3) return dz == static_cast<int>(n);
        if (dl == 2) return dz >= static_cast<int>(n - m) && dz <= static_cast<int>(n);
        if (dl == 1) return dz >= 0 && dz <= static_cast<int>(m);
        if (dl == 0) return dz == 0;
        return false;
    };
    for (const auto& [k, v] : q.terms()) {
        if (!allowed(k.first, k.second))
            fail(errc::support_violation, "unexpected monomial lambda^" + std::to_string(k.first) +
                                              " zeta^" + std::to_string(k.second));
    }
    if (!(q.coeff(3, static_cast<int>(n), proto) == one_like(proto)))
        fail(errc::support_violation, "lambda^3 zeta^n coefficient is not 1");
    if (!(q.coeff(2, static_cast<int>(n), proto) == -one_like(proto)))
        fail(errc::support_violation, "lambda^2 zeta^n coefficient is not -1");
    return {n, m, std::move(q)};
}

inline spectral_result<field_element> spectral_poly(const corner_coords& c) {
    return spectral_poly_generic(c.x, c.y);
}

/// The 2m+2 invariant coefficients H_1..H_{2m+2}; stored 0-based, so
/// h[j] == H_{j+1}. The constant term of Q is -H_{2m+2}.
struct invariant_vector {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<field_element> h;

    friend bool operator==(const invariant_vector& a, const invariant_vector& b) {
        return a.n == b.n && a.h == b.h;
    }
    friend bool operator!=(const invariant_vector& a, const invariant_vector& b) { return !(a == b); }

    std::string encode() const {
        std::string s;
        for (const auto& v : h) { v.encode_into(s); s += '|'; }
        return s;
    }
};

template <class S>
std::vector<S> invariants_H_generic(const std::vector<S>& x, const std::vector<S>& y) {
    spectral_result<S> sp = spectral_poly_generic(x, y);
    const S proto = x[0];
    const int n = static_cast<int>(sp.n), m = static_cast<int>(sp.m);
    std::vector<S> h;
    h.reserve(2 * sp.m + 2);
    for (int i = 0; i < m; ++i) h.push_back(sp.q.coeff(2, n + i - m, proto));
    for (int i = 0; i <= m; ++i) h.push_back(sp.q.coeff(1, m - i, proto));
    h.push_back(-sp.q.coeff(0, 0, proto));
    return h;
}

inline invariant_vector invariants_H(const corner_coords& c) {
    invariant_vector iv;
    iv.n = c.n;
    iv.m = c.n / 2;
    iv.h = invariants_H_generic(c.x, c.y);
    return iv;
}

/// Exact rank of the (2m+2) x 2n Jacobian of H at a rational point, computed
/// by seeding dual numbers on all 2n coordinates.
inline std::size_t jacobian_rank_H(const corner_coords& c) {
    if (c.ctx()->kind != field_kind::rationals)
        fail(errc::invalid_argument, "Jacobian rank test needs characteristic 0");
    const std::size_t n = c.n, k = 2 * n;
    std::vector<dual_number> x, y;
    x.reserve(n); y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) x.push_back(dual_number::variable(c.x[i], k, i));
    for (std::size_t i = 0; i < n; ++i) y.push_back(dual_number::variable(c.y[i], k, n + i));
    std::vector<dual_number> h = invariants_H_generic(x, y);
    fe_matrix jac;
    jac.reserve(h.size());
    for (const auto& hi : h) jac.push_back(hi.partials());
    return rank(jac);
}

/// Image point in the vertex labeling of the diagonal construction. The
/// matrices L_i, P_i are written in that labeling, which runs one cyclic
/// step behind the coordinate formulas (see vertex_route_back_shift), so the
/// time-advanced side of the Lax equations is evaluated here.
inline corner_coords lax_time_step(const corner_coords& c) {
    return map_coords(c).shifted(c.n - vertex_route_back_shift);
}

/// Zero-curvature identity: L_i(f(C)) P_i(C) is projectively equal to
/// P_{i+1}(C) L_i(C) for every i, with f taken in the vertex labeling.
inline bool zero_curvature_holds(const corner_coords& c) {
    corner_coords fc = lax_time_step(c);
    for (std::size_t i = 0; i < c.n; ++i) {
        auto lhs = lax_L(i, fc) * lax_P(i, c);
        auto rhs = lax_P(i + 1, c) * lax_L(i, c);
        if (!proportional(lhs, rhs)) return false;
    }
    return true;
}

/// Lax conjugacy: T_0(f(C)) P_0(C) is projectively equal to P_0(C) T_0(C),
/// with f taken in the vertex labeling.
inline bool lax_conjugacy_holds(const corner_coords& c) {
    corner_coords fc = lax_time_step(c);
    auto lhs = monodromy_T(fc) * lax_P(0, c);
    auto rhs = lax_P(0, c) * monodromy_T(c);
    return proportional(lhs, rhs);
}

} // namespace pgram
