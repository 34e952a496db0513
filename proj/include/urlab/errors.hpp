// errors.hpp
// Error codes and the exception type shared by all ur-lab modules.

#pragma once

#include <stdexcept>
#include <string>

namespace urlab {

enum class ErrorCode {
    NonSquare,
    NotNearlyHermitian,
    NonFiniteEntry,
    IndexOutOfRange,
    DimTooSmall,
    DimMismatch,
    NonHermitianExpectation,
    NoConvergence,
    DirectionIsEigenvector,
    EmptyGrid,
    TooFewDefinedSamples,
    InvalidSchedule,
    InvalidParam,
    QuadratureNoConvergence,
    ScheduleTooShort,
    ConfigParse,
    ConfigValidate,
    AssertionFailure,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace urlab
