#pragma once

// Backwards recursion for imprecise Markov chains: marginal, conditional and
// joint upper/lower expectations, plus path mass bounds. Time indices are
// 1-based; X(1) is the initial state.

#include "credalmc/transition.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace credalmc {

class ImpreciseMarkovChain {
public:
    /// Stationary chain: the same operator at every step.
    ImpreciseMarkovChain(CredalModel initial, UpperTransitionOperator transition, std::size_t horizon);
    /// Non-stationary chain with horizon steps.size() + 1.
    ImpreciseMarkovChain(CredalModel initial, std::vector<UpperTransitionOperator> steps);

    const StateSpace& space() const noexcept { return initial_.space(); }
    const CredalModel& initial() const noexcept { return initial_; }
    std::size_t horizon() const noexcept { return horizon_; }
    bool is_stationary() const noexcept { return stationary_; }

    /// The operator used between times k and k + 1, for 1 <= k < horizon.
    const UpperTransitionOperator& transition(std::size_t k) const;
    /// Distinct operators as stored: one for a stationary chain.
    const std::vector<UpperTransitionOperator>& operators() const noexcept { return steps_; }

    ImpreciseMarkovChain with_initial(CredalModel initial) const;
    /// Stationary chains only.
    ImpreciseMarkovChain with_horizon(std::size_t horizon) const;

private:
    CredalModel initial_;
    std::vector<UpperTransitionOperator> steps_;
    std::size_t horizon_;
    bool stationary_;
};

/// A real-valued function of the trajectory x_{1:N}, stored densely with x_1
/// as the most significant digit.
class PathGamble {
public:
    /// When depends_on is given, measurability with respect to it is checked
    /// exhaustively (ErrorCode::MeasurabilityViolation).
    PathGamble(StateSpace space, std::size_t horizon, std::vector<double> values,
               std::optional<std::set<std::size_t>> depends_on = std::nullopt);

    static PathGamble from_function(const StateSpace& space, std::size_t horizon,
                                    const std::function<double(std::span<const std::size_t>)>& f,
                                    std::optional<std::set<std::size_t>> depends_on = std::nullopt);
    /// Indicator of the cylinder {X(1..m) = path}, m = path.size() <= horizon.
    static PathGamble path_indicator(const StateSpace& space, std::size_t horizon, std::span<const std::size_t> path);
    /// h(X(n)), tagged {n}-measurable.
    static PathGamble at_time(std::size_t horizon, std::size_t n, const Gamble& h);

    const StateSpace& space() const noexcept { return space_; }
    std::size_t horizon() const noexcept { return horizon_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::optional<std::set<std::size_t>>& depends_on() const noexcept { return depends_on_; }

    double operator()(std::span<const std::size_t> path) const;
    /// Exhaustive check that the value only depends on X(k) for k in times.
    bool is_measurable(const std::set<std::size_t>& times) const;

    PathGamble operator-() const;

private:
    StateSpace space_;
    std::size_t horizon_;
    std::vector<double> values_;
    std::optional<std::set<std::size_t>> depends_on_;
};

/// Largest dense path table PathGamble accepts.
inline constexpr std::size_t kMaxPathTable = std::size_t{1} << 26;

/// |X|^k, guarded by kMaxPathTable.
std::size_t path_count(const StateSpace& space, std::size_t length);
/// Decodes a path index (x_1 most significant) of the given length.
std::vector<std::size_t> decode_path(std::size_t index, std::size_t states, std::size_t length);
std::size_t encode_path(std::span<const std::size_t> path, std::size_t states);

/// upper(initial, T_1 T_2 ... T_{n-1} h). Cost is linear in n.
double marginal_upper(const ImpreciseMarkovChain& chain, std::size_t n, const Gamble& h);
double marginal_lower(const ImpreciseMarkovChain& chain, std::size_t n, const Gamble& h);

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Marginal bounds of h(X(n)) for n = 1..horizon, entry n-1 for time n.
std::vector<Bounds> marginal_trace(const ImpreciseMarkovChain& chain, const Gamble& h);

/// Upper expectation of h(X(n)) given X(from) = state: T_from ... T_{n-1} h (state).
double conditional_upper(const ImpreciseMarkovChain& chain, std::size_t from, std::size_t state, std::size_t n,
                         const Gamble& h);
double conditional_lower(const ImpreciseMarkovChain& chain, std::size_t from, std::size_t state, std::size_t n,
                         const Gamble& h);

/// Joint upper expectation of a path gamble by folding the time axes from N
/// down to 1 and closing with the initial model.
double joint_upper(const ImpreciseMarkovChain& chain, const PathGamble& f);
double joint_lower(const ImpreciseMarkovChain& chain, const PathGamble& f);

/// Conditional joint upper expectation given the history x_{1:n}, 1 <= n <= N.
double joint_upper_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history, const PathGamble& f);
double joint_lower_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history, const PathGamble& f);

/// Largest difference between conditional upper expectations of f that share
/// X(n) but differ in their history x_{1:n-1}. f must be {n..N}-measurable.
double markov_invariance_gap(const ImpreciseMarkovChain& chain, std::size_t n, const PathGamble& f);

/// Bounds on the probability of the cylinder {X(1..m) = path}.
Bounds path_mass_bounds(const ImpreciseMarkovChain& chain, std::span<const std::size_t> path);
/// Bounds on the probability of X(n+1..m) = path[1..] given X(n) = path[0].
Bounds path_mass_bounds_given(const ImpreciseMarkovChain& chain, std::size_t n, std::span<const std::size_t> path);

} // namespace credalmc
