#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modulecad {

/// Closed set of failure kinds. Every exception thrown by the library is an
/// Error carrying one of these codes; the CLI and HTTP layers map them to
/// exit codes and status codes.
enum class ErrorCode {
    invalid_params,
    unknown_kind,
    wrong_kind,
    unknown_module,
    unknown_element,
    unknown_layer,
    unknown_prototype,
    zero_length_segment,
    miter_limit_exceeded,
    non_positive_distance,
    non_uniform_scale_of_round,
    non_positive_scale,
    invalid_transform,
    invalid_geometry,
    height_out_of_range,
    rods_too_far,
    unsorted_rods,
    dimension_mismatch,
    unknown_unit,
    duplicate_name,
    file_format,
    version,
    consistency,
    io,
    usage,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace modulecad
