#pragma once

#include <stdexcept>
#include <string>

namespace pgram {

enum class errc {
    division_by_zero,
    mixed_field_contexts,
    field_too_small,
    parse_error,
    invalid_argument,
    coincident_points,
    coincident_lines,
    not_on_line,
    degenerate_cross_ratio,
    degenerate_polygon,
    coordinate_degenerate,
    reconstruction_degenerate,
    indeterminate_point,
    leaves_moduli,
    degenerate_image,
    no_nondegenerate_kernel_vector,
    singular_p,
    normalization_degenerate,
    support_violation,
    enumeration_too_large,
    extension_field_unavailable,
    population_too_large,
    orbit_degenerated,
    inconsistent_functional_equation,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::division_by_zero: return "DivisionByZero";
        case errc::mixed_field_contexts: return "MixedFieldContexts";
        case errc::field_too_small: return "FieldTooSmall";
        case errc::parse_error: return "ParseError";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::coincident_points: return "CoincidentPoints";
        case errc::coincident_lines: return "CoincidentLines";
        case errc::not_on_line: return "NotOnLine";
        case errc::degenerate_cross_ratio: return "DegenerateCrossRatio";
        case errc::degenerate_polygon: return "DegeneratePolygon";
        case errc::coordinate_degenerate: return "CoordinateDegenerate";
        case errc::reconstruction_degenerate: return "ReconstructionDegenerate";
        case errc::indeterminate_point: return "IndeterminatePoint";
        case errc::leaves_moduli: return "LeavesModuli";
        case errc::degenerate_image: return "DegenerateImage";
        case errc::no_nondegenerate_kernel_vector: return "NoNondegenerateKernelVector";
        case errc::singular_p: return "SingularP";
        case errc::normalization_degenerate: return "NormalizationDegenerate";
        case errc::support_violation: return "SupportViolation";
        case errc::enumeration_too_large: return "EnumerationTooLarge";
        case errc::extension_field_unavailable: return "ExtensionFieldUnavailable";
        case errc::population_too_large: return "PopulationTooLarge";
        case errc::orbit_degenerated: return "OrbitDegenerated";
        case errc::inconsistent_functional_equation: return "InconsistentFunctionalEquation";
    }
    return "UnknownError";
}

/// Exception carrying a machine-checkable error code alongside the message.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace pgram
