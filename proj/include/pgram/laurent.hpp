#pragma once

#include <map>
#include <string>

#include "errors.hpp"
#include "scalar.hpp"

namespace pgram {

/// Laurent polynomial in one variable (the spectral parameter) with exact
/// scalar coefficients. Canonical form: zero coefficients are never stored,
/// so the zero polynomial is the empty map and equality is map equality.
template <class S>
class laurent {
public:
    using term_map = std::map<int, S>;

    laurent() = default;

    static laurent term(int exponent, S coeff) {
        laurent r;
        if (!coeff.is_zero()) r.terms_.emplace(exponent, std::move(coeff));
        return r;
    }

    static laurent constant(S coeff) { return term(0, std::move(coeff)); }

    bool is_zero() const { return terms_.empty(); }

    const term_map& terms() const { return terms_; }

    int valuation() const {
        if (is_zero()) fail(errc::invalid_argument, "valuation of zero Laurent polynomial");
        return terms_.begin()->first;
    }

    int degree() const {
        if (is_zero()) fail(errc::invalid_argument, "degree of zero Laurent polynomial");
        return terms_.rbegin()->first;
    }

    const S* find(int e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? nullptr : &it->second;
    }

    S coeff(int e, const S& proto) const {
        const S* c = find(e);
        return c ? *c : zero_like(proto);
    }

    void set(int e, S v) {
        if (v.is_zero()) terms_.erase(e);
        else terms_[e] = std::move(v);
    }

    friend laurent operator+(const laurent& a, const laurent& b) {
        laurent r = a;
        for (const auto& [e, v] : b.terms_) r.accumulate(e, v);
        return r;
    }

    friend laurent operator-(const laurent& a, const laurent& b) {
        laurent r = a;
        for (const auto& [e, v] : b.terms_) r.accumulate(e, -v);
        return r;
    }

    laurent operator-() const {
        laurent r;
        for (const auto& [e, v] : terms_) r.terms_.emplace(e, -v);
        return r;
    }

    friend laurent operator*(const laurent& a, const laurent& b) {
        laurent r;
        for (const auto& [ea, va] : a.terms_)
            for (const auto& [eb, vb] : b.terms_) r.accumulate(ea + eb, va * vb);
        return r;
    }

    laurent scaled(const S& s) const {
        laurent r;
        for (const auto& [e, v] : terms_) {
            S sv = v * s;
            if (!sv.is_zero()) r.terms_.emplace(e, std::move(sv));
        }
        return r;
    }

    /// Multiply by the unit s * zeta^k (exact division via scaled(s.inv())).
    laurent shifted(int k) const {
        laurent r;
        for (const auto& [e, v] : terms_) r.terms_.emplace(e + k, v);
        return r;
    }

    friend bool operator==(const laurent& a, const laurent& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const laurent& a, const laurent& b) { return !(a == b); }

    S evaluate(const S& x) const {
        S acc = zero_like(x);
        for (const auto& [e, v] : terms_) {
            S p = one_like(x);
            int k = e < 0 ? -e : e;
            S base = e < 0 ? x.inv() : x;
            for (int i = 0; i < k; ++i) p = p * base;
            acc = acc + v * p;
        }
        return acc;
    }

    std::string to_string(const std::string& var = "z") const;

private:
    void accumulate(int e, S v) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!v.is_zero()) terms_.emplace(e, std::move(v));
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    term_map terms_;
};

template <>
inline std::string laurent<field_element>::to_string(const std::string& var) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, v] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + v.to_string() + ")";
        if (e != 0) s += "*" + var + "^" + std::to_string(e);
    }
    return s;
}

using laurent_fe = laurent<field_element>;

} // namespace pgram
