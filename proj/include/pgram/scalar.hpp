#pragma once

#include "dual.hpp"
#include "field.hpp"

namespace pgram {

/// Uniform way for generic ring code (Laurent/bivariate/matrix templates) to
/// mint 0 and 1 in the same context as an existing scalar.
template <class S>
struct scalar_ops;

template <>
struct scalar_ops<field_element> {
    static field_element zero_like(const field_element& proto) { return field_element::zero(proto.ctx()); }
    static field_element one_like(const field_element& proto) { return field_element::one(proto.ctx()); }
    static field_element from_int(const field_element& proto, long long v) {
        return field_element::from_int(proto.ctx(), v);
    }
};

template <>
struct scalar_ops<dual_number> {
    static dual_number zero_like(const dual_number& proto) {
        return dual_number::constant(field_element::zero(proto.value().ctx()), proto.nvars());
    }
    static dual_number one_like(const dual_number& proto) {
        return dual_number::constant(field_element::one(proto.value().ctx()), proto.nvars());
    }
    static dual_number from_int(const dual_number& proto, long long v) {
        return dual_number::constant(field_element::from_int(proto.value().ctx(), v), proto.nvars());
    }
};

template <class S>
S zero_like(const S& proto) { return scalar_ops<S>::zero_like(proto); }

template <class S>
S one_like(const S& proto) { return scalar_ops<S>::one_like(proto); }

template <class S>
S scalar_from_int(const S& proto, long long v) { return scalar_ops<S>::from_int(proto, v); }

} // namespace pgram
