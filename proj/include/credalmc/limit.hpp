#pragma once

// Long-run behaviour of stationary upper transition operators.

#include "credalmc/transition.hpp"

#include <cstddef>
#include <optional>

namespace credalmc {

inline constexpr double kDefaultLimitTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxIterations = 1'000'000;

struct LimitReport {
    /// max of the last iterate; the limit lies in [value - residual, value].
    double value = 0.0;
    std::size_t iterations = 0;
    /// max(h_k) - min(h_k) at the stopping iterate.
    double residual = 0.0;
};

/// Iterates h <- apply(op, h) until the iterate is constant to within tol.
/// Throws ErrorCode::NonConvergence when max_iter is exhausted; a periodic
/// operator is better examined with detect_cycle.
LimitReport limit_upper(const UpperTransitionOperator& op, const Gamble& h, double tol = kDefaultLimitTolerance,
                        std::size_t max_iter = kDefaultMaxIterations);

/// epsilon * sum_k (1 - epsilon)^k max T^k h for a precise operator T, with
/// the series cut once its tail is provably below tol.
double contamination_limit(const UpperTransitionOperator& precise_op, double epsilon, const Gamble& h,
                           double tol = kDefaultLimitTolerance);

/// Upper expectation of h(X(n + 1)) for the epsilon-contaminated chain around
/// the precise operator, started from `initial`, via the closed form
/// (1 - eps)^n upper(initial, T^n h) + eps * sum_{k<n} (1 - eps)^k max T^k h.
double contamination_evolve(const CredalModel& initial, const UpperTransitionOperator& precise_op, double epsilon,
                            const Gamble& h, std::size_t n);

/// Stationary mass function of a regular precise operator by power iteration
/// from the uniform mass. Throws ErrorCode::NotRegular.
MassFunction precise_stationary(const UpperTransitionOperator& precise_op, double tol = kDefaultLimitTolerance,
                                std::size_t max_iter = kDefaultMaxIterations);

struct CycleReport {
    std::size_t period = 0;
    Gamble representative;
    /// Index k of the representative iterate op^k h.
    std::size_t iteration = 0;
    double residual = 0.0;
};

/// 2 |X|^2
std::size_t default_cycle_window(const StateSpace& space);

/// Finds the smallest p <= max_period and the earliest k with
/// ||h_{j+p} - h_j|| <= tol for all j in [k, k + p]. Throws
/// ErrorCode::NoCycleFound when none appears within max_iter iterations.
CycleReport detect_cycle(const UpperTransitionOperator& op, const Gamble& h, double tol = kDefaultLimitTolerance,
                         std::size_t max_iter = kDefaultMaxIterations,
                         std::optional<std::size_t> max_period = std::nullopt);

} // namespace credalmc
