#pragma once

#include <stdexcept>
#include <string>

namespace pc {

enum class ErrorCode {
    InvalidShape,
    InvalidCone,
    NegativeRadius,
    SingularKernel,
    EmptyRegion,
    AlphaOutOfRange,
    BoundaryPoint,
    NonpositiveHeight,
    NonpositiveTime,
    NonUnitDirection,
    UnsupportedDimension,
    InvalidRange,
    HypothesisViolated,
    BracketingFailed,
    EmptyAdmissibleRegion,
    NonDecreasingParameters,
    EmptySet,
    PreconditionFailed,
    NoSamplePoints,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code);

/// Numerical failures map to CLI exit status 3, everything else to 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    bool numerical() const noexcept { return is_numerical(code_); }

private:
    ErrorCode code_;
};

}  // namespace pc
