#pragma once

#include <array>
#include <string>

#include "errors.hpp"
#include "field.hpp"
#include "mat3.hpp"

namespace pgram {

using vec3 = std::array<field_element, 3>;

inline vec3 cross(const vec3& a, const vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline field_element dot(const vec3& a, const vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline bool all_zero(const vec3& v) { return v[0].is_zero() && v[1].is_zero() && v[2].is_zero(); }

/// Equality up to scale, decided by vanishing of all 2x2 minors. No division
/// and no normalization of representatives, so it works in any characteristic.
inline bool proj_equal(const vec3& a, const vec3& b) {
    return (a[0] * b[1] - a[1] * b[0]).is_zero() &&
           (a[0] * b[2] - a[2] * b[0]).is_zero() &&
           (a[1] * b[2] - a[2] * b[1]).is_zero();
}

/// A point of P^2, stored as an unnormalized homogeneous representative.
struct proj_point {
    vec3 h;

    proj_point() = default;
    explicit proj_point(vec3 coords) : h(std::move(coords)) {
        if (all_zero(h)) fail(errc::invalid_argument, "projective point must have a nonzero coordinate");
    }
    static proj_point from_ints(const field_ptr& ctx, long long a, long long b, long long c) {
        return proj_point({field_element::from_int(ctx, a), field_element::from_int(ctx, b),
                           field_element::from_int(ctx, c)});
    }

    bool same_as(const proj_point& o) const { return proj_equal(h, o.h); }
    std::string to_string() const {
        return "[" + h[0].to_string() + ":" + h[1].to_string() + ":" + h[2].to_string() + "]";
    }
};

/// A line of P^2 as homogeneous coefficients; incidence is dot(point, line)=0.
struct proj_line {
    vec3 h;

    proj_line() = default;
    explicit proj_line(vec3 coeffs) : h(std::move(coeffs)) {
        if (all_zero(h)) fail(errc::invalid_argument, "projective line must have a nonzero coefficient");
    }

    bool same_as(const proj_line& o) const { return proj_equal(h, o.h); }
    bool contains(const proj_point& p) const { return dot(p.h, h).is_zero(); }
    std::string to_string() const {
        return "[" + h[0].to_string() + ":" + h[1].to_string() + ":" + h[2].to_string() + "]";
    }
};

inline proj_line join(const proj_point& p, const proj_point& q) {
    vec3 l = cross(p.h, q.h);
    if (all_zero(l)) fail(errc::coincident_points, "join of coincident points " + p.to_string());
    return proj_line(std::move(l));
}

inline proj_point meet(const proj_line& l, const proj_line& m) {
    vec3 p = cross(l.h, m.h);
    if (all_zero(p)) fail(errc::coincident_lines, "meet of coincident lines " + l.to_string());
    return proj_point(std::move(p));
}

inline field_element det3(const vec3& a, const vec3& b, const vec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

inline bool collinear(const proj_point& p, const proj_point& q, const proj_point& r) {
    return det3(p.h, q.h, r.h).is_zero();
}

namespace projdetail {

/// Two independent points spanning a line, chosen deterministically from the
/// line coefficients (a kernel basis of the 1x3 system l . v = 0).
inline std::pair<vec3, vec3> span_of_line(const proj_line& l, const field_ptr& ctx) {
    const field_element zero = field_element::zero(ctx);
    const field_element one = field_element::one(ctx);
    const vec3& c = l.h;
    int piv = !c[0].is_zero() ? 0 : (!c[1].is_zero() ? 1 : 2);
    int f1 = piv == 0 ? 1 : 0;
    int f2 = piv == 2 ? 1 : 2;
    vec3 u{zero, zero, zero}, w{zero, zero, zero};
    u[static_cast<std::size_t>(f1)] = one;
    u[static_cast<std::size_t>(piv)] = -c[static_cast<std::size_t>(f1)] / c[static_cast<std::size_t>(piv)];
    w[static_cast<std::size_t>(f2)] = one;
    w[static_cast<std::size_t>(piv)] = -c[static_cast<std::size_t>(f2)] / c[static_cast<std::size_t>(piv)];
    return {u, w};
}

/// Coordinates (alpha, beta) of p in the basis (u, w) of a line's span.
inline std::pair<field_element, field_element> line_coords(const vec3& p, const vec3& u, const vec3& w) {
    // pick two coordinate rows where [u w] has an invertible 2x2 block
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            auto a = u[static_cast<std::size_t>(i)], b = w[static_cast<std::size_t>(i)];
            auto c = u[static_cast<std::size_t>(j)], d = w[static_cast<std::size_t>(j)];
            field_element det = a * d - b * c;
            if (det.is_zero()) continue;
            field_element inv = det.inv();
            field_element alpha = (p[static_cast<std::size_t>(i)] * d - b * p[static_cast<std::size_t>(j)]) * inv;
            field_element beta = (a * p[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(i)] * c) * inv;
            return {alpha, beta};
        }
    }
    fail(errc::invalid_argument, "degenerate line basis");
}

} // namespace projdetail

/// Cross-ratio of four points on a line, via the convention
/// [v1,v2,v3,v4] = (v1-v2)(v3-v4) / ((v1-v3)(v2-v4)).
/// Each point is written as alpha*u + beta*w for a basis pair (u, w) on the
/// line; the value is independent of that choice, which is a tested property
/// rather than an assumption.
inline field_element cross_ratio4(const proj_point& p1, const proj_point& p2, const proj_point& p3,
                                  const proj_point& p4, const proj_line& on) {
    for (const proj_point* p : {&p1, &p2, &p3, &p4}) {
        if (!on.contains(*p)) fail(errc::not_on_line, "cross-ratio point off the line: " + p->to_string());
    }
    if (proj_equal(p1.h, p3.h) || proj_equal(p2.h, p4.h))
        fail(errc::degenerate_cross_ratio, "cross-ratio requires p1 != p3 and p2 != p4");

    const field_ptr& ctx = p1.h[0].ctx();
    auto [u, w] = projdetail::span_of_line(on, ctx);
    auto [a1, b1] = projdetail::line_coords(p1.h, u, w);
    auto [a2, b2] = projdetail::line_coords(p2.h, u, w);
    auto [a3, b3] = projdetail::line_coords(p3.h, u, w);
    auto [a4, b4] = projdetail::line_coords(p4.h, u, w);

    field_element num = (a1 * b2 - a2 * b1) * (a3 * b4 - a4 * b3);
    field_element den = (a1 * b3 - a3 * b1) * (a2 * b4 - a4 * b2);
    if (den.is_zero()) fail(errc::degenerate_cross_ratio, "vanishing cross-ratio denominator");
    return num / den;
}

/// Parse "[a:b:c]" where each component uses the field-element syntax.
/// Splitting happens on ':' at bracket depth 1, since extension-field
/// components contain brackets and commas of their own.
inline vec3 parse_homogeneous_triple(const field_ptr& ctx, const std::string& text) {
    std::string s;
    for (char c : text) if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(errc::parse_error, "expected [a:b:c]: " + text);
    std::string body = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : body) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ':' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) fail(errc::parse_error, "expected 3 components: " + text);
    return {field_element::parse(ctx, parts[0]), field_element::parse(ctx, parts[1]),
            field_element::parse(ctx, parts[2])};
}

} // namespace pgram
