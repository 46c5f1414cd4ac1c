#pragma once

#include "credalmc/credal.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace credalmc {

inline constexpr double kPositivityThreshold = 1e-12;

using Matrix = std::vector<std::vector<double>>;

/// One credal model per source state; maps a gamble h to the gamble of
/// conditional upper expectations x -> upper(row(x), h).
class UpperTransitionOperator {
public:
    UpperTransitionOperator(StateSpace space, std::vector<CredalModel> rows);

    /// Precise operator from a row-stochastic matrix (row x is q(.|x)).
    static UpperTransitionOperator precise(const StateSpace& space, const Matrix& matrix);
    /// Rows (1 - epsilon) q(.|x) + epsilon * vacuous.
    static UpperTransitionOperator contaminated(const StateSpace& space, const Matrix& matrix, double epsilon);
    /// Rows given by lower/upper Markov matrices.
    static UpperTransitionOperator interval(const StateSpace& space, const Matrix& lower, const Matrix& upper);

    const StateSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return rows_.size(); }
    const CredalModel& row(std::size_t x) const { return rows_.at(x); }
    const std::vector<CredalModel>& rows() const noexcept { return rows_; }

    bool is_precise() const noexcept;
    /// Transition matrix of a precise operator; throws InvalidModel otherwise.
    Matrix matrix() const;

private:
    StateSpace space_;
    std::vector<CredalModel> rows_;
};

Gamble apply(const UpperTransitionOperator& op, const Gamble& h);
Gamble apply_lower(const UpperTransitionOperator& op, const Gamble& h);
/// n-fold application; power(op, h, 0) == h.
Gamble power(const UpperTransitionOperator& op, const Gamble& h, std::size_t n);

struct RegularityVerdict {
    bool found = false;
    /// The smallest witness when found, otherwise the search bound.
    std::size_t n = 0;
};

/// (|X| - 1)^2 + 1
std::size_t default_regularity_bound(const StateSpace& space);

/// Smallest n <= n_max with min power(op, I_{y}, n) > kPositivityThreshold for
/// every state y. A negative verdict only means none was found up to n_max.
RegularityVerdict is_regular(const UpperTransitionOperator& op, std::optional<std::size_t> n_max = std::nullopt);

} // namespace credalmc
