#include "urlab/errors.hpp"

namespace urlab {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotNearlyHermitian: return "NotNearlyHermitian";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimTooSmall: return "DimTooSmall";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonHermitianExpectation: return "NonHermitianExpectation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DirectionIsEigenvector: return "DirectionIsEigenvector";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::TooFewDefinedSamples: return "TooFewDefinedSamples";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorCode::ScheduleTooShort: return "ScheduleTooShort";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::ConfigValidate: return "ConfigValidate";
    case ErrorCode::AssertionFailure: return "AssertionFailure";
    }
    return "UnknownError";
}

} // namespace urlab
