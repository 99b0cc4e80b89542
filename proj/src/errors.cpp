#include "pc/errors.hpp"

namespace pc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidShape: return "InvalidShape";
        case ErrorCode::InvalidCone: return "InvalidCone";
        case ErrorCode::NegativeRadius: return "NegativeRadius";
        case ErrorCode::SingularKernel: return "SingularKernel";
        case ErrorCode::EmptyRegion: return "EmptyRegion";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::BoundaryPoint: return "BoundaryPoint";
        case ErrorCode::NonpositiveHeight: return "NonpositiveHeight";
        case ErrorCode::NonpositiveTime: return "NonpositiveTime";
        case ErrorCode::NonUnitDirection: return "NonUnitDirection";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::BracketingFailed: return "BracketingFailed";
        case ErrorCode::EmptyAdmissibleRegion: return "EmptyAdmissibleRegion";
        case ErrorCode::NonDecreasingParameters: return "NonDecreasingParameters";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::NoSamplePoints: return "NoSamplePoints";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

bool is_numerical(ErrorCode code) {
    switch (code) {
        case ErrorCode::BracketingFailed:
        case ErrorCode::EmptyRegion:
        case ErrorCode::EmptyAdmissibleRegion:
        case ErrorCode::NoSamplePoints:
            return true;
        default:
            return false;
    }
}

}  // namespace pc
