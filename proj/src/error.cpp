#include "credalmc/error.hpp"

namespace credalmc {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidMass: return "invalid_mass";
    case ErrorCode::InvalidGamble: return "invalid_gamble";
    case ErrorCode::UnknownState: return "unknown_state";
    case ErrorCode::EmptyCredalSet: return "empty_credal_set";
    case ErrorCode::NonReachableBounds: return "non_reachable_bounds";
    case ErrorCode::MassSumViolation: return "mass_sum_violation";
    case ErrorCode::EpsilonOutOfRange: return "epsilon_out_of_range";
    case ErrorCode::InvalidModel: return "invalid_model";
    case ErrorCode::IndexOutOfRange: return "index_out_of_range";
    case ErrorCode::HorizonMismatch: return "horizon_mismatch";
    case ErrorCode::MeasurabilityViolation: return "measurability_violation";
    case ErrorCode::NotRegular: return "not_regular";
    case ErrorCode::NonConvergence: return "non_convergence";
    case ErrorCode::NoCycleFound: return "no_cycle_found";
    case ErrorCode::SizeGuardExceeded: return "size_guard_exceeded";
    case ErrorCode::IncompleteAssignment: return "incomplete_assignment";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::SchemaError: return "schema_error";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    }
    return "unknown";
}

} // namespace credalmc
