#include "credalmc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace credalmc {

// ---------------------------------------------------------------------------
// ImpreciseMarkovChain

ImpreciseMarkovChain::ImpreciseMarkovChain(CredalModel initial, UpperTransitionOperator transition,
                                           std::size_t horizon)
    : initial_(std::move(initial)), horizon_(horizon), stationary_(true) {
    require(horizon_ >= 1, ErrorCode::InvalidArgument, "horizon must be at least 1");
    require_same_space(initial_.space(), transition.space(), "chain");
    steps_.push_back(std::move(transition));
}

ImpreciseMarkovChain::ImpreciseMarkovChain(CredalModel initial, std::vector<UpperTransitionOperator> steps)
    : initial_(std::move(initial)), steps_(std::move(steps)), horizon_(steps_.size() + 1), stationary_(false) {
    for (const auto& t : steps_) require_same_space(initial_.space(), t.space(), "chain");
}

const UpperTransitionOperator& ImpreciseMarkovChain::transition(std::size_t k) const {
    require(k >= 1 && k < horizon_, ErrorCode::IndexOutOfRange,
            "transition index " + std::to_string(k) + " outside [1, " + std::to_string(horizon_) + ")");
    return stationary_ ? steps_.front() : steps_[k - 1];
}

ImpreciseMarkovChain ImpreciseMarkovChain::with_initial(CredalModel initial) const {
    ImpreciseMarkovChain copy = *this;
    require_same_space(space(), initial.space(), "with_initial");
    copy.initial_ = std::move(initial);
    return copy;
}

ImpreciseMarkovChain ImpreciseMarkovChain::with_horizon(std::size_t horizon) const {
    require(stationary_, ErrorCode::InvalidArgument, "only stationary chains can change horizon");
    return ImpreciseMarkovChain(initial_, steps_.front(), horizon);
}

// ---------------------------------------------------------------------------
// Path indexing

std::size_t path_count(const StateSpace& space, std::size_t length) {
    std::size_t count = 1;
    for (std::size_t k = 0; k < length; ++k) {
        require(count <= kMaxPathTable / space.size(), ErrorCode::SizeGuardExceeded,
                "path table of length " + std::to_string(length) + " exceeds the size guard");
        count *= space.size();
    }
    return count;
}

std::vector<std::size_t> decode_path(std::size_t index, std::size_t states, std::size_t length) {
    std::vector<std::size_t> path(length);
    for (std::size_t k = length; k-- > 0;) {
        path[k] = index % states;
        index /= states;
    }
    return path;
}

std::size_t encode_path(std::span<const std::size_t> path, std::size_t states) {
    std::size_t index = 0;
    for (auto x : path) {
        require(x < states, ErrorCode::IndexOutOfRange, "path state index out of range");
        index = index * states + x;
    }
    return index;
}

// ---------------------------------------------------------------------------
// PathGamble

PathGamble::PathGamble(StateSpace space, std::size_t horizon, std::vector<double> values,
                       std::optional<std::set<std::size_t>> depends_on)
    : space_(std::move(space)), horizon_(horizon), values_(std::move(values)), depends_on_(std::move(depends_on)) {
    require(horizon_ >= 1, ErrorCode::InvalidArgument, "path gamble horizon must be at least 1");
    require(values_.size() == path_count(space_, horizon_), ErrorCode::DimensionMismatch,
            "path gamble table has the wrong size");
    for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidGamble, "path gamble values must be finite");
    if (depends_on_) {
        for (auto t : *depends_on_) {
            require(t >= 1 && t <= horizon_, ErrorCode::IndexOutOfRange, "depends_on time outside [1, horizon]");
        }
        require(is_measurable(*depends_on_), ErrorCode::MeasurabilityViolation,
                "path gamble depends on times outside its depends_on set");
    }
}

PathGamble PathGamble::from_function(const StateSpace& space, std::size_t horizon,
                                     const std::function<double(std::span<const std::size_t>)>& f,
                                     std::optional<std::set<std::size_t>> depends_on) {
    const std::size_t count = path_count(space, horizon);
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = f(decode_path(i, space.size(), horizon));
    return PathGamble(space, horizon, std::move(values), std::move(depends_on));
}

PathGamble PathGamble::path_indicator(const StateSpace& space, std::size_t horizon,
                                      std::span<const std::size_t> path) {
    require(!path.empty() && path.size() <= horizon, ErrorCode::IndexOutOfRange,
            "path indicator length must lie in [1, horizon]");
    std::set<std::size_t> times;
    for (std::size_t k = 1; k <= path.size(); ++k) times.insert(k);
    std::vector<std::size_t> prefix(path.begin(), path.end());
    return from_function(
        space, horizon,
        [&](std::span<const std::size_t> p) { return std::equal(prefix.begin(), prefix.end(), p.begin()) ? 1.0 : 0.0; },
        std::move(times));
}

PathGamble PathGamble::at_time(std::size_t horizon, std::size_t n, const Gamble& h) {
    require(n >= 1 && n <= horizon, ErrorCode::IndexOutOfRange, "time index outside [1, horizon]");
    return from_function(
        h.space(), horizon, [&](std::span<const std::size_t> p) { return h[p[n - 1]]; }, std::set<std::size_t>{n});
}

double PathGamble::operator()(std::span<const std::size_t> path) const {
    require(path.size() == horizon_, ErrorCode::HorizonMismatch, "path length differs from the gamble's horizon");
    return values_[encode_path(path, space_.size())];
}

bool PathGamble::is_measurable(const std::set<std::size_t>& times) const {
    const std::size_t states = space_.size();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        auto path = decode_path(i, states, horizon_);
        for (std::size_t k = 1; k <= horizon_; ++k) {
            if (!times.contains(k)) path[k - 1] = 0;
        }
        if (values_[encode_path(path, states)] != values_[i]) return false;
    }
    return true;
}

PathGamble PathGamble::operator-() const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return -x; });
    return PathGamble(space_, horizon_, std::move(v), depends_on_);
}

// ---------------------------------------------------------------------------
// Recursion

namespace {

void require_time(const ImpreciseMarkovChain& chain, std::size_t n, const char* what) {
    require(n >= 1 && n <= chain.horizon(), ErrorCode::IndexOutOfRange,
            std::string(what) + " time " + std::to_string(n) + " outside [1, " + std::to_string(chain.horizon()) + "]");
}

// Applies the lifted operators for k = N-1 down to `level`, turning a table
// over X^N into one over X^level. Each history slice is handled by the row
// model of its last state.
std::vector<double> fold_to(const ImpreciseMarkovChain& chain, const PathGamble& f, std::size_t level) {
    require(f.horizon() == chain.horizon(), ErrorCode::HorizonMismatch,
            "path gamble horizon " + std::to_string(f.horizon()) + " differs from chain horizon " +
                std::to_string(chain.horizon()));
    require_same_space(chain.space(), f.space(), "joint expectation");
    const std::size_t states = chain.space().size();
    std::vector<double> table(f.values().begin(), f.values().end());
    std::vector<double> slice(states);
    for (std::size_t k = chain.horizon() - 1; k >= level && k >= 1; --k) {
        const auto& op = chain.transition(k);
        std::vector<double> next(table.size() / states);
        for (std::size_t p = 0; p < next.size(); ++p) {
            std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(p * states), states, slice.begin());
            next[p] = upper(op.row(p % states), Gamble(chain.space(), slice));
        }
        table = std::move(next);
    }
    return table;
}

} // namespace

double marginal_upper(const ImpreciseMarkovChain& chain, std::size_t n, const Gamble& h) {
    require_time(chain, n, "marginal");
    Gamble g = h;
    for (std::size_t k = n - 1; k >= 1; --k) g = apply(chain.transition(k), g);
    return upper(chain.initial(), g);
}

double marginal_lower(const ImpreciseMarkovChain& chain, std::size_t n, const Gamble& h) {
    return -marginal_upper(chain, n, -h);
}

std::vector<Bounds> marginal_trace(const ImpreciseMarkovChain& chain, const Gamble& h) {
    std::vector<Bounds> trace;
    trace.reserve(chain.horizon());
    if (chain.is_stationary()) {
        const auto& op = chain.operators().front();
        Gamble up = h;
        Gamble down = -h;
        for (std::size_t n = 1; n <= chain.horizon(); ++n) {
            if (n > 1) {
                up = apply(op, up);
                down = apply(op, down);
            }
            trace.push_back({-upper(chain.initial(), down), upper(chain.initial(), up)});
        }
        return trace;
    }
    for (std::size_t n = 1; n <= chain.horizon(); ++n) {
        trace.push_back({marginal_lower(chain, n, h), marginal_upper(chain, n, h)});
    }
    return trace;
}

double conditional_upper(const ImpreciseMarkovChain& chain, std::size_t from, std::size_t state, std::size_t n,
                         const Gamble& h) {
    require_time(chain, n, "conditional target");
    require(from >= 1 && from < n, ErrorCode::IndexOutOfRange, "conditioning time must satisfy 1 <= from < n");
    require(state < chain.space().size(), ErrorCode::IndexOutOfRange, "conditioning state out of range");
    Gamble g = h;
    for (std::size_t k = n - 1; k >= from; --k) g = apply(chain.transition(k), g);
    return g[state];
}

double conditional_lower(const ImpreciseMarkovChain& chain, std::size_t from, std::size_t state, std::size_t n,
                         const Gamble& h) {
    return -conditional_upper(chain, from, state, n, -h);
}

double joint_upper(const ImpreciseMarkovChain& chain, const PathGamble& f) {
    auto table = fold_to(chain, f, 1);
    return upper(chain.initial(), Gamble(chain.space(), std::move(table)));
}

double joint_lower(const ImpreciseMarkovChain& chain, const PathGamble& f) { return -joint_upper(chain, -f); }

double joint_upper_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                         const PathGamble& f) {
    require(!history.empty() && history.size() <= chain.horizon(), ErrorCode::IndexOutOfRange,
            "history length must lie in [1, horizon]");
    auto table = fold_to(chain, f, history.size());
    return table[encode_path(history, chain.space().size())];
}

double joint_lower_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                         const PathGamble& f) {
    return -joint_upper_given(chain, history, -f);
}

double markov_invariance_gap(const ImpreciseMarkovChain& chain, std::size_t n, const PathGamble& f) {
    require_time(chain, n, "markov gap");
    std::set<std::size_t> tail;
    for (std::size_t k = n; k <= chain.horizon(); ++k) tail.insert(k);
    require(f.horizon() == chain.horizon(), ErrorCode::HorizonMismatch, "path gamble horizon differs from chain");
    require(f.is_measurable(tail), ErrorCode::MeasurabilityViolation,
            "markov gap needs a gamble depending only on times " + std::to_string(n) + ".." +
                std::to_string(chain.horizon()));
    const std::size_t states = chain.space().size();
    auto table = fold_to(chain, f, n);
    std::vector<double> lo(states, std::numeric_limits<double>::infinity());
    std::vector<double> hi(states, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < table.size(); ++p) {
        lo[p % states] = std::min(lo[p % states], table[p]);
        hi[p % states] = std::max(hi[p % states], table[p]);
    }
    double gap = 0.0;
    for (std::size_t x = 0; x < states; ++x) gap = std::max(gap, hi[x] - lo[x]);
    return gap;
}

Bounds path_mass_bounds(const ImpreciseMarkovChain& chain, std::span<const std::size_t> path) {
    require(!path.empty() && path.size() <= chain.horizon(), ErrorCode::IndexOutOfRange,
            "path length must lie in [1, horizon]");
    const auto& space = chain.space();
    require(path[0] < space.size(), ErrorCode::IndexOutOfRange, "path state index out of range");
    const Gamble first = Gamble::indicator(space, path[0]);
    Bounds b{lower(chain.initial(), first), upper(chain.initial(), first)};
    const auto rest = path_mass_bounds_given(chain, 1, path);
    b.lower *= rest.lower;
    b.upper *= rest.upper;
    return b;
}

Bounds path_mass_bounds_given(const ImpreciseMarkovChain& chain, std::size_t n, std::span<const std::size_t> path) {
    require(!path.empty(), ErrorCode::IndexOutOfRange, "conditional path needs at least the conditioning state");
    require(n >= 1 && n + path.size() - 1 <= chain.horizon(), ErrorCode::IndexOutOfRange,
            "conditional path runs past the horizon");
    const auto& space = chain.space();
    Bounds b{1.0, 1.0};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        require(path[i] < space.size() && path[i + 1] < space.size(), ErrorCode::IndexOutOfRange,
                "path state index out of range");
        const auto& row = chain.transition(n + i).row(path[i]);
        const Gamble next = Gamble::indicator(space, path[i + 1]);
        b.lower *= lower(row, next);
        b.upper *= upper(row, next);
    }
    return b;
}

} // namespace credalmc
