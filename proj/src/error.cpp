#include "modulecad/error.hpp"

namespace modulecad {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_params: return "invalid_params";
        case ErrorCode::unknown_kind: return "unknown_kind";
        case ErrorCode::wrong_kind: return "wrong_kind";
        case ErrorCode::unknown_module: return "unknown_module";
        case ErrorCode::unknown_element: return "unknown_element";
        case ErrorCode::unknown_layer: return "unknown_layer";
        case ErrorCode::unknown_prototype: return "unknown_prototype";
        case ErrorCode::zero_length_segment: return "zero_length_segment";
        case ErrorCode::miter_limit_exceeded: return "miter_limit_exceeded";
        case ErrorCode::non_positive_distance: return "non_positive_distance";
        case ErrorCode::non_uniform_scale_of_round: return "non_uniform_scale_of_round";
        case ErrorCode::non_positive_scale: return "non_positive_scale";
        case ErrorCode::invalid_transform: return "invalid_transform";
        case ErrorCode::invalid_geometry: return "invalid_geometry";
        case ErrorCode::height_out_of_range: return "height_out_of_range";
        case ErrorCode::rods_too_far: return "rods_too_far";
        case ErrorCode::unsorted_rods: return "unsorted_rods";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::unknown_unit: return "unknown_unit";
        case ErrorCode::duplicate_name: return "duplicate_name";
        case ErrorCode::file_format: return "file_format";
        case ErrorCode::version: return "version";
        case ErrorCode::consistency: return "consistency";
        case ErrorCode::io: return "io_error";
        case ErrorCode::usage: return "usage";
    }
    return "internal";
}

}  // namespace modulecad
