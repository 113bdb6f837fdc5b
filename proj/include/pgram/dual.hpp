#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace pgram {

/// First-order dual number over an exact field: value plus one exact partial
/// derivative per designated independent variable. Arithmetic propagates
/// d(uv) = u dv + v du and d(1/u) = -du/u^2 with no rounding anywhere.
class dual_number {
public:
    dual_number() = default;

    dual_number(field_element value, std::vector<field_element> partials)
        : value_(std::move(value)), partials_(std::move(partials)) {}

    /// Constant: all partials zero.
    static dual_number constant(const field_element& v, std::size_t nvars) {
        return dual_number(v, std::vector<field_element>(nvars, field_element::zero(v.ctx())));
    }

    /// Independent variable number `index` seeded with value v.
    static dual_number variable(const field_element& v, std::size_t nvars, std::size_t index) {
        std::vector<field_element> d(nvars, field_element::zero(v.ctx()));
        d.at(index) = field_element::one(v.ctx());
        return dual_number(v, std::move(d));
    }

    const field_element& value() const { return value_; }
    const std::vector<field_element>& partials() const { return partials_; }
    std::size_t nvars() const { return partials_.size(); }

    bool is_zero() const {
        if (!value_.is_zero()) return false;
        for (const auto& d : partials_) if (!d.is_zero()) return false;
        return true;
    }

    friend dual_number operator+(const dual_number& a, const dual_number& b) {
        check_shape(a, b);
        dual_number r = a;
        r.value_ = a.value_ + b.value_;
        for (std::size_t i = 0; i < r.partials_.size(); ++i) r.partials_[i] = a.partials_[i] + b.partials_[i];
        return r;
    }

    friend dual_number operator-(const dual_number& a, const dual_number& b) {
        check_shape(a, b);
        dual_number r = a;
        r.value_ = a.value_ - b.value_;
        for (std::size_t i = 0; i < r.partials_.size(); ++i) r.partials_[i] = a.partials_[i] - b.partials_[i];
        return r;
    }

    friend dual_number operator*(const dual_number& a, const dual_number& b) {
        check_shape(a, b);
        dual_number r = a;
        r.value_ = a.value_ * b.value_;
        for (std::size_t i = 0; i < r.partials_.size(); ++i)
            r.partials_[i] = a.value_ * b.partials_[i] + b.value_ * a.partials_[i];
        return r;
    }

    dual_number operator-() const {
        dual_number r = *this;
        r.value_ = -value_;
        for (auto& d : r.partials_) d = -d;
        return r;
    }

    dual_number inv() const {
        if (value_.is_zero()) fail(errc::division_by_zero, "dual inverse at value 0");
        dual_number r = *this;
        field_element iv = value_.inv();
        field_element neg_iv2 = -(iv * iv);
        r.value_ = iv;
        for (auto& d : r.partials_) d = d * neg_iv2;
        return r;
    }

    friend dual_number operator/(const dual_number& a, const dual_number& b) { return a * b.inv(); }

    friend bool operator==(const dual_number& a, const dual_number& b) {
        check_shape(a, b);
        return a.value_ == b.value_ && a.partials_ == b.partials_;
    }
    friend bool operator!=(const dual_number& a, const dual_number& b) { return !(a == b); }

private:
    static void check_shape(const dual_number& a, const dual_number& b) {
        if (a.partials_.size() != b.partials_.size())
            fail(errc::invalid_argument, "dual numbers with different variable counts");
    }

    field_element value_;
    std::vector<field_element> partials_;
};

/// Minimal arithmetic-circuit IR for evaluate_with_partials and its tests.
struct circuit {
    enum class op { input, constant, add, sub, mul, div, neg };

    struct node {
        op kind;
        std::size_t a = 0, b = 0;     // operand node indices
        std::size_t input_index = 0;  // for op::input
        field_element cval;           // for op::constant
    };

    std::size_t num_inputs = 0;
    std::vector<node> nodes;  // evaluated in order; last node is the output

    std::size_t add_input(std::size_t index) {
        nodes.push_back({op::input, 0, 0, index, {}});
        return nodes.size() - 1;
    }
    std::size_t add_const(field_element v) {
        nodes.push_back({op::constant, 0, 0, 0, std::move(v)});
        return nodes.size() - 1;
    }
    std::size_t add_node(op kind, std::size_t a, std::size_t b = 0) {
        nodes.push_back({kind, a, b, 0, {}});
        return nodes.size() - 1;
    }
};

struct eval_result {
    field_element value;
    std::vector<field_element> gradient;
};

/// Evaluate a circuit at `point` with dual numbers seeded on each input; the
/// gradient equals the formal partial derivatives evaluated at the point.
inline eval_result evaluate_with_partials(const circuit& c, const std::vector<field_element>& point) {
    if (point.size() != c.num_inputs) fail(errc::invalid_argument, "point size != circuit inputs");
    if (c.nodes.empty()) fail(errc::invalid_argument, "empty circuit");
    const std::size_t k = c.num_inputs;
    std::vector<dual_number> vals;
    vals.reserve(c.nodes.size());
    for (const auto& nd : c.nodes) {
        switch (nd.kind) {
            case circuit::op::input:
                vals.push_back(dual_number::variable(point.at(nd.input_index), k, nd.input_index));
                break;
            case circuit::op::constant:
                vals.push_back(dual_number::constant(nd.cval, k));
                break;
            case circuit::op::add: vals.push_back(vals.at(nd.a) + vals.at(nd.b)); break;
            case circuit::op::sub: vals.push_back(vals.at(nd.a) - vals.at(nd.b)); break;
            case circuit::op::mul: vals.push_back(vals.at(nd.a) * vals.at(nd.b)); break;
            case circuit::op::div: vals.push_back(vals.at(nd.a) / vals.at(nd.b)); break;
            case circuit::op::neg: vals.push_back(-vals.at(nd.a)); break;
        }
    }
    return {vals.back().value(), vals.back().partials()};
}

} // namespace pgram
