#include "credalmc/transition.hpp"

#include <algorithm>

namespace credalmc {

namespace {

void require_square(const StateSpace& space, const Matrix& m, const char* what) {
    require(m.size() == space.size(), ErrorCode::DimensionMismatch, std::string(what) + " needs one row per state");
    for (const auto& row : m) {
        require(row.size() == space.size(), ErrorCode::DimensionMismatch,
                std::string(what) + " needs one column per state");
    }
}

} // namespace

UpperTransitionOperator::UpperTransitionOperator(StateSpace space, std::vector<CredalModel> rows)
    : space_(std::move(space)), rows_(std::move(rows)) {
    require(rows_.size() == space_.size(), ErrorCode::DimensionMismatch,
            "transition operator has " + std::to_string(rows_.size()) + " rows for " +
                std::to_string(space_.size()) + " states");
    for (const auto& r : rows_) require_same_space(space_, r.space(), "transition row");
}

UpperTransitionOperator UpperTransitionOperator::precise(const StateSpace& space, const Matrix& matrix) {
    require_square(space, matrix, "transition matrix");
    std::vector<CredalModel> rows;
    rows.reserve(space.size());
    for (const auto& r : matrix) rows.push_back(CredalModel::linear(MassFunction(space, r)));
    return UpperTransitionOperator(space, std::move(rows));
}

UpperTransitionOperator UpperTransitionOperator::contaminated(const StateSpace& space, const Matrix& matrix,
                                                              double epsilon) {
    require_square(space, matrix, "transition matrix");
    std::vector<CredalModel> rows;
    rows.reserve(space.size());
    for (const auto& r : matrix) rows.push_back(CredalModel::contamination(MassFunction(space, r), epsilon));
    return UpperTransitionOperator(space, std::move(rows));
}

UpperTransitionOperator UpperTransitionOperator::interval(const StateSpace& space, const Matrix& lower,
                                                          const Matrix& upper) {
    require_square(space, lower, "lower transition matrix");
    require_square(space, upper, "upper transition matrix");
    std::vector<CredalModel> rows;
    rows.reserve(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) rows.push_back(CredalModel::interval(space, lower[x], upper[x]));
    return UpperTransitionOperator(space, std::move(rows));
}

bool UpperTransitionOperator::is_precise() const noexcept {
    return std::all_of(rows_.begin(), rows_.end(), [](const CredalModel& r) { return r.is_linear(); });
}

Matrix UpperTransitionOperator::matrix() const {
    require(is_precise(), ErrorCode::InvalidModel, "operator is not precise");
    Matrix m;
    m.reserve(rows_.size());
    for (const auto& r : rows_) {
        const auto& w = std::get<Linear>(r.spec()).mass.weights();
        m.emplace_back(w.begin(), w.end());
    }
    return m;
}

Gamble apply(const UpperTransitionOperator& op, const Gamble& h) {
    require_same_space(op.space(), h.space(), "apply");
    std::vector<double> v(op.size());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = upper(op.row(x), h);
    return Gamble(op.space(), std::move(v));
}

Gamble apply_lower(const UpperTransitionOperator& op, const Gamble& h) { return -apply(op, -h); }

Gamble power(const UpperTransitionOperator& op, const Gamble& h, std::size_t n) {
    Gamble g = h;
    for (std::size_t k = 0; k < n; ++k) g = apply(op, g);
    return g;
}

std::size_t default_regularity_bound(const StateSpace& space) {
    const std::size_t m = space.size() - 1;
    return m * m + 1;
}

RegularityVerdict is_regular(const UpperTransitionOperator& op, std::optional<std::size_t> n_max) {
    const std::size_t bound = n_max.value_or(default_regularity_bound(op.space()));
    require(bound >= 1, ErrorCode::InvalidArgument, "regularity search bound must be at least 1");
    std::vector<Gamble> iterates;
    for (std::size_t y = 0; y < op.size(); ++y) iterates.push_back(Gamble::indicator(op.space(), y));
    for (std::size_t n = 1; n <= bound; ++n) {
        bool positive = true;
        for (auto& g : iterates) {
            g = apply(op, g);
            positive = positive && g.min() > kPositivityThreshold;
        }
        if (positive) return {true, n};
    }
    return {false, bound};
}

} // namespace credalmc
