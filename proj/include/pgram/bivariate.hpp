#pragma once

#include <map>
#include <string>
#include <utility>

#include "errors.hpp"
#include "scalar.hpp"

namespace pgram {

/// Bivariate polynomial (exponents may be negative, i.e. Laurent in both
/// variables) with exact coefficients and canonical sparse storage.
template <class S>
class bivariate {
public:
    using key = std::pair<int, int>;  // (exponent of first var, exponent of second var)
    using term_map = std::map<key, S>;

    bivariate() = default;

    static bivariate term(int e1, int e2, S coeff) {
        bivariate r;
        if (!coeff.is_zero()) r.terms_.emplace(key{e1, e2}, std::move(coeff));
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    const term_map& terms() const { return terms_; }

    const S* find(int e1, int e2) const {
        auto it = terms_.find({e1, e2});
        return it == terms_.end() ? nullptr : &it->second;
    }

    S coeff(int e1, int e2, const S& proto) const {
        const S* c = find(e1, e2);
        return c ? *c : zero_like(proto);
    }

    void set(int e1, int e2, S v) {
        if (v.is_zero()) terms_.erase({e1, e2});
        else terms_[{e1, e2}] = std::move(v);
    }

    void accumulate(int e1, int e2, S v) {
        auto it = terms_.find({e1, e2});
        if (it == terms_.end()) {
            if (!v.is_zero()) terms_.emplace(key{e1, e2}, std::move(v));
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend bivariate operator+(const bivariate& a, const bivariate& b) {
        bivariate r = a;
        for (const auto& [k, v] : b.terms_) r.accumulate(k.first, k.second, v);
        return r;
    }

    friend bivariate operator-(const bivariate& a, const bivariate& b) {
        bivariate r = a;
        for (const auto& [k, v] : b.terms_) r.accumulate(k.first, k.second, -v);
        return r;
    }

    bivariate operator-() const {
        bivariate r;
        for (const auto& [k, v] : terms_) r.terms_.emplace(k, -v);
        return r;
    }

    friend bivariate operator*(const bivariate& a, const bivariate& b) {
        bivariate r;
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_)
                r.accumulate(ka.first + kb.first, ka.second + kb.second, va * vb);
        return r;
    }

    bivariate scaled(const S& s) const {
        bivariate r;
        for (const auto& [k, v] : terms_) {
            S sv = v * s;
            if (!sv.is_zero()) r.terms_.emplace(k, std::move(sv));
        }
        return r;
    }

    /// Multiply by var1^d1 * var2^d2.
    bivariate shifted(int d1, int d2) const {
        bivariate r;
        for (const auto& [k, v] : terms_) r.terms_.emplace(key{k.first + d1, k.second + d2}, v);
        return r;
    }

    /// Exact formal partial derivative in the first variable.
    bivariate d1() const {
        bivariate r;
        for (const auto& [k, v] : terms_) {
            if (k.first == 0) continue;
            S c = v * scalar_from_int(v, k.first);
            if (!c.is_zero()) r.terms_.emplace(key{k.first - 1, k.second}, std::move(c));
        }
        return r;
    }

    /// Exact formal partial derivative in the second variable.
    bivariate d2() const {
        bivariate r;
        for (const auto& [k, v] : terms_) {
            if (k.second == 0) continue;
            S c = v * scalar_from_int(v, k.second);
            if (!c.is_zero()) r.terms_.emplace(key{k.first, k.second - 1}, std::move(c));
        }
        return r;
    }

    S evaluate(const S& x, const S& y) const {
        S acc = zero_like(x);
        for (const auto& [k, v] : terms_) acc = acc + v * int_pow(x, k.first) * int_pow(y, k.second);
        return acc;
    }

    friend bool operator==(const bivariate& a, const bivariate& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const bivariate& a, const bivariate& b) { return !(a == b); }

    std::string to_string(const std::string& v1, const std::string& v2) const;

private:
    static S int_pow(const S& x, int e) {
        S p = one_like(x);
        S base = e < 0 ? x.inv() : x;
        int k = e < 0 ? -e : e;
        for (int i = 0; i < k; ++i) p = p * base;
        return p;
    }

    term_map terms_;
};

template <>
inline std::string bivariate<field_element>::to_string(const std::string& v1, const std::string& v2) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + v.to_string() + ")";
        if (k.first) s += "*" + v1 + "^" + std::to_string(k.first);
        if (k.second) s += "*" + v2 + "^" + std::to_string(k.second);
    }
    return s;
}

using bivariate_fe = bivariate<field_element>;

} // namespace pgram
