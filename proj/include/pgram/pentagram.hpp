#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "polygon.hpp"

namespace pgram {

/// The pentagram map in corner coordinates (the pullback formulas
///   x_i -> x_{i+1} (1 - x_i y_i) / (1 - x_{i+2} y_{i+2}),
///   y_i -> y_{i+2} (1 - x_{i+3} y_{i+3}) / (1 - x_{i+1} y_{i+1}),
/// indices cyclic). Throws IndeterminatePoint when a factor 1 - x_j y_j
/// vanishes, LeavesModuli when an output coordinate lands in {0, 1}.
inline corner_coords map_coords(const corner_coords& c) {
    const std::size_t n = c.n;
    const field_ptr& ctx = c.ctx();
    const field_element one = field_element::one(ctx);

    std::vector<field_element> u;
    u.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        field_element f = one - c.x[j] * c.y[j];
        if (f.is_zero())
            fail(errc::indeterminate_point, "1 - x_" + std::to_string(j) + " y_" + std::to_string(j) + " = 0");
        u.push_back(std::move(f));
    }

    std::vector<field_element> xs, ys;
    xs.reserve(n); ys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs.push_back(c.xc(i + 1) * u[i] / u[(i + 2) % n]);
        ys.push_back(c.yc(i + 2) * u[(i + 3) % n] / u[(i + 1) % n]);
    }
    for (const auto* vs : {&xs, &ys}) {
        for (const auto& v : *vs) {
            if (v.is_zero() || v.is_one()) fail(errc::leaves_moduli, "image coordinate lies in {0,1}");
        }
    }
    return corner_coords(n, std::move(xs), std::move(ys));
}

/// Geometric route: w_i is the intersection of the short diagonals
/// (v_{i-1} v_{i+1}) and (v_i v_{i+2}); the monodromy class is unchanged.
inline twisted_polygon map_vertices(const twisted_polygon& p) {
    validation_report pre = validate_report(p);
    if (!pre.ok) fail(errc::invalid_argument, "input polygon invalid: " + pre.diagnostic);
    std::vector<proj_point> w;
    w.reserve(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        long long ii = static_cast<long long>(i);
        try {
            proj_line d1 = join(proj_point(p.rep(ii - 1)), proj_point(p.rep(ii + 1)));
            proj_line d2 = join(proj_point(p.rep(ii)), proj_point(p.rep(ii + 2)));
            w.push_back(meet(d1, d2));
        } catch (const error&) {
            fail(errc::degenerate_image, "diagonal intersection " + std::to_string(i) + " is undefined");
        }
    }
    twisted_polygon img(p.n, std::move(w), p.monodromy);
    validation_report rep = validate_report(img);
    if (!rep.ok) fail(errc::degenerate_image, "image polygon degenerates: " + rep.diagnostic);
    return img;
}

/// Cyclic offset between the geometric and coordinate routes:
///   corner_coords_from_vertices(map_vertices(P)) == map_coords(C).shifted(n-1),
/// i.e. the vertex-route labels run one step behind. Fixed once by a
/// calibration sweep over all n shifts (regression-tested), then frozen.
inline constexpr std::size_t vertex_route_back_shift = 1;

/// Vertex route re-labelled to match map_coords exactly.
inline corner_coords map_vertices_coords(const twisted_polygon& p) {
    return corner_coords_from_vertices(map_vertices(p)).shifted(vertex_route_back_shift);
}

/// Refactorization route. Solves the linear system expressing
/// D~+ D- = D~- D+ among third-order difference operators:
///   a~_i b_i = b~_i a_{i+1}
///   a~_i d_i + c~_i b_{i+2} = b~_i c_{i+1} + d~_i a_{i+3}
///   c~_i d_{i+2} = d~_i c_{i+3}
/// for all i, then maps a kernel vector with all entries nonzero through the
/// operator-side corner coordinates.
inline corner_coords map_refactor(const twisted_polygon& p) {
    const std::size_t n = p.n;
    const field_ptr& ctx = p.ctx();
    difference_operator dop = delta(p);

    const field_element zero = field_element::zero(ctx);
    fe_matrix sys(3 * n, std::vector<field_element>(4 * n, zero));
    for (std::size_t i = 0; i < n; ++i) {
        auto at = [&](std::size_t var_block, std::size_t comp) { return 4 * (var_block % n) + comp; };
        // a~_i b_i - b~_i a_{i+1} = 0
        sys[3 * i + 0][at(i, 0)] = dop.bc(i);
        sys[3 * i + 0][at(i, 1)] = -dop.ac(i + 1);
        // a~_i d_i + c~_i b_{i+2} - b~_i c_{i+1} - d~_i a_{i+3} = 0
        sys[3 * i + 1][at(i, 0)] = dop.dc(i);
        sys[3 * i + 1][at(i, 2)] = dop.bc(i + 2);
        sys[3 * i + 1][at(i, 1)] = -dop.cc(i + 1);
        sys[3 * i + 1][at(i, 3)] = -dop.ac(i + 3);
        // c~_i d_{i+2} - d~_i c_{i+3} = 0
        sys[3 * i + 2][at(i, 2)] = dop.dc(i + 2);
        sys[3 * i + 2][at(i, 3)] = -dop.cc(i + 3);
    }

    std::vector<std::vector<field_element>> basis = nullspace(sys, ctx);
    if (basis.empty()) fail(errc::no_nondegenerate_kernel_vector, "refactorization system has trivial kernel");

    auto all_nonzero = [](const std::vector<field_element>& v) {
        for (const auto& e : v) if (e.is_zero()) return false;
        return true;
    };

    std::vector<field_element> chosen;
    for (const auto& b : basis) {
        if (all_nonzero(b)) { chosen = b; break; }
    }
    if (chosen.empty()) {
        // Small integer combinations of basis vectors, the all-ones sum first
        // (it wins whenever the kernel splits into per-index blocks, which is
        // the generic shape of this system).
        const std::size_t k = basis.size();
        auto combine = [&](const std::vector<long long>& coef) {
            std::vector<field_element> v(4 * n, zero);
            for (std::size_t j = 0; j < k; ++j) {
                if (!coef[j]) continue;
                field_element c = field_element::from_int(ctx, coef[j]);
                for (std::size_t t = 0; t < 4 * n; ++t) v[t] = v[t] + c * basis[j][t];
            }
            return v;
        };
        std::vector<long long> ones(k, 1);
        std::vector<field_element> v = combine(ones);
        if (all_nonzero(v)) {
            chosen = std::move(v);
        } else {
            for (long long bound = 1; bound <= 3 && chosen.empty(); ++bound) {
                std::vector<long long> coef(k, 0);
                for (;;) {
                    std::size_t pos = 0;
                    while (pos < k && coef[pos] == bound) coef[pos++] = 0;
                    if (pos == k) break;
                    ++coef[pos];
                    std::vector<field_element> cand = combine(coef);
                    if (all_nonzero(cand)) { chosen = std::move(cand); break; }
                }
            }
        }
    }
    if (chosen.empty())
        fail(errc::no_nondegenerate_kernel_vector, "no kernel vector with all 4n entries nonzero");

    std::vector<field_element> ta, tb, tc, td;
    ta.reserve(n); tb.reserve(n); tc.reserve(n); td.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ta.push_back(chosen[4 * i + 0]);
        tb.push_back(chosen[4 * i + 1]);
        tc.push_back(chosen[4 * i + 2]);
        td.push_back(chosen[4 * i + 3]);
    }
    try {
        difference_operator refac(n, std::move(ta), std::move(tb), std::move(tc), std::move(td));
        return corner_coords_from_operator(refac);
    } catch (const error& e) {
        if (e.code() == errc::coordinate_degenerate)
            fail(errc::indeterminate_point, "refactored image leaves the moduli space");
        throw;
    }
}

/// The scaling action t . (x, y) = (x / t, t y), which commutes with the map.
inline corner_coords scaling_act(const corner_coords& c, const field_element& t) {
    if (t.is_zero()) fail(errc::invalid_argument, "scaling by zero");
    field_element tinv = t.inv();
    std::vector<field_element> xs, ys;
    xs.reserve(c.n); ys.reserve(c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        xs.push_back(c.x[i] * tinv);
        ys.push_back(c.y[i] * t);
    }
    for (const auto* vs : {&xs, &ys}) {
        for (const auto& v : *vs) {
            if (v.is_zero() || v.is_one()) fail(errc::leaves_moduli, "scaled point leaves the moduli space");
        }
    }
    return corner_coords(c.n, std::move(xs), std::move(ys));
}

enum class orbit_status { periodic, degenerate, undecided };

inline const char* orbit_status_name(orbit_status s) {
    switch (s) {
        case orbit_status::periodic: return "Periodic";
        case orbit_status::degenerate: return "Degenerate";
        case orbit_status::undecided: return "Undecided";
    }
    return "?";
}

struct orbit_record {
    corner_coords start;
    orbit_status status = orbit_status::undecided;
    std::size_t preperiod = 0;
    std::size_t period = 0;          // 0 unless periodic
    std::size_t degenerate_step = 0; // meaningful only when degenerate
    std::size_t steps_taken = 0;
};

/// Iterate map_coords with the inductive orbit semantics: stop at the first
/// revisited point (Periodic), the first undefined step (Degenerate), or
/// after max_steps applications (Undecided).
inline orbit_record orbit(const corner_coords& start, std::size_t max_steps) {
    orbit_record rec{start};
    std::unordered_map<std::string, std::size_t> seen;
    corner_coords cur = start;
    for (std::size_t step = 0;; ++step) {
        auto [it, fresh] = seen.emplace(cur.encode(), step);
        if (!fresh) {
            rec.status = orbit_status::periodic;
            rec.preperiod = it->second;
            rec.period = step - it->second;
            rec.steps_taken = step;
            return rec;
        }
        if (step == max_steps) {
            rec.status = orbit_status::undecided;
            rec.steps_taken = step;
            return rec;
        }
        try {
            cur = map_coords(cur);
        } catch (const error& e) {
            if (e.code() == errc::indeterminate_point || e.code() == errc::leaves_moduli) {
                rec.status = orbit_status::degenerate;
                rec.degenerate_step = step;
                rec.steps_taken = step;
                return rec;
            }
            throw;
        }
    }
}

} // namespace pgram
