#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace credalmc {

enum class ErrorCode {
    DimensionMismatch,
    InvalidMass,
    InvalidGamble,
    UnknownState,
    EmptyCredalSet,
    NonReachableBounds,
    MassSumViolation,
    EpsilonOutOfRange,
    InvalidModel,
    IndexOutOfRange,
    HorizonMismatch,
    MeasurabilityViolation,
    NotRegular,
    NonConvergence,
    NoCycleFound,
    SizeGuardExceeded,
    IncompleteAssignment,
    ParseError,
    SchemaError,
    InvalidArgument,
};

/// Stable snake_case identifier, used in CLI diagnostics.
std::string_view code_name(ErrorCode code) noexcept;

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

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace credalmc
