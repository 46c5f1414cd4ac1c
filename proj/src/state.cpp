#include "credalmc/state.hpp"

#include "credalmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace credalmc {

StateSpace::StateSpace(std::vector<std::string> labels) {
    require(!labels.empty(), ErrorCode::InvalidArgument, "state space must contain at least one state");
    std::set<std::string_view> seen;
    for (const auto& label : labels) {
        require(!label.empty(), ErrorCode::InvalidArgument, "state labels must be nonempty");
        require(seen.insert(label).second, ErrorCode::InvalidArgument, "duplicate state label '" + label + "'");
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

std::optional<std::size_t> StateSpace::find(std::string_view label) const noexcept {
    const auto& l = *labels_;
    auto it = std::find(l.begin(), l.end(), label);
    if (it == l.end()) return std::nullopt;
    return static_cast<std::size_t>(it - l.begin());
}

std::size_t StateSpace::index_of(std::string_view label) const {
    auto i = find(label);
    if (!i) fail(ErrorCode::UnknownState, "unknown state '" + std::string(label) + "'");
    return *i;
}

bool operator==(const StateSpace& a, const StateSpace& b) noexcept {
    return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
}

void require_same_space(const StateSpace& a, const StateSpace& b, std::string_view context) {
    if (!(a == b)) {
        fail(ErrorCode::DimensionMismatch,
             std::string(context) + ": operands live on different state spaces (" + std::to_string(a.size()) +
                 " vs " + std::to_string(b.size()) + " states)");
    }
}

// ---------------------------------------------------------------------------
// Event

Event::Event(StateSpace space, std::vector<bool> members) : space_(std::move(space)), members_(std::move(members)) {
    require(members_.size() == space_.size(), ErrorCode::DimensionMismatch, "event membership has wrong length");
}

Event Event::of(const StateSpace& space, std::initializer_list<std::string_view> labels) {
    std::vector<bool> members(space.size(), false);
    for (auto label : labels) members[space.index_of(label)] = true;
    return Event(space, std::move(members));
}

Event Event::of_indices(const StateSpace& space, std::span<const std::size_t> indices) {
    std::vector<bool> members(space.size(), false);
    for (auto i : indices) {
        require(i < space.size(), ErrorCode::IndexOutOfRange, "event member index out of range");
        members[i] = true;
    }
    return Event(space, std::move(members));
}

Event Event::singleton(const StateSpace& space, std::size_t state) {
    std::size_t idx[] = {state};
    return of_indices(space, idx);
}

Event Event::empty(const StateSpace& space) { return Event(space, std::vector<bool>(space.size(), false)); }
Event Event::full(const StateSpace& space) { return Event(space, std::vector<bool>(space.size(), true)); }

std::size_t Event::count() const noexcept {
    return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

Event Event::complement() const {
    std::vector<bool> members(members_.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = !members_[i];
    return Event(space_, std::move(members));
}

Event operator|(const Event& a, const Event& b) {
    require_same_space(a.space_, b.space_, "event union");
    std::vector<bool> members(a.members_.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = a.members_[i] || b.members_[i];
    return Event(a.space_, std::move(members));
}

Event operator&(const Event& a, const Event& b) {
    require_same_space(a.space_, b.space_, "event intersection");
    std::vector<bool> members(a.members_.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = a.members_[i] && b.members_[i];
    return Event(a.space_, std::move(members));
}

bool operator==(const Event& a, const Event& b) { return a.space_ == b.space_ && a.members_ == b.members_; }

// ---------------------------------------------------------------------------
// Gamble

Gamble::Gamble(StateSpace space, std::vector<double> values) : space_(std::move(space)), values_(std::move(values)) {
    require(values_.size() == space_.size(), ErrorCode::DimensionMismatch,
            "gamble has " + std::to_string(values_.size()) + " values for " + std::to_string(space_.size()) +
                " states");
    for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidGamble, "gamble values must be finite");
}

Gamble Gamble::constant(const StateSpace& space, double value) {
    return Gamble(space, std::vector<double>(space.size(), value));
}

Gamble Gamble::indicator(const Event& event) {
    const auto& space = event.space();
    std::vector<double> v(space.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = event.contains(i) ? 1.0 : 0.0;
    return Gamble(space, std::move(v));
}

Gamble Gamble::indicator(const StateSpace& space, std::size_t state) {
    require(state < space.size(), ErrorCode::IndexOutOfRange, "indicator state index out of range");
    std::vector<double> v(space.size(), 0.0);
    v[state] = 1.0;
    return Gamble(space, std::move(v));
}

double Gamble::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Gamble::min() const { return *std::min_element(values_.begin(), values_.end()); }

Gamble Gamble::operator-() const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return -x; });
    return Gamble(space_, std::move(v));
}

namespace {

template <class Op>
Gamble zip(const Gamble& g, const Gamble& h, std::string_view context, Op op) {
    require_same_space(g.space(), h.space(), context);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(g[i], h[i]);
    return Gamble(g.space(), std::move(v));
}

} // namespace

Gamble operator+(const Gamble& g, const Gamble& h) {
    return zip(g, h, "gamble addition", [](double a, double b) { return a + b; });
}

Gamble operator-(const Gamble& g, const Gamble& h) {
    return zip(g, h, "gamble subtraction", [](double a, double b) { return a - b; });
}

Gamble operator*(double scalar, const Gamble& h) {
    std::vector<double> v(h.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scalar * h[i];
    return Gamble(h.space(), std::move(v));
}

Gamble operator+(const Gamble& h, double shift) {
    std::vector<double> v(h.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = h[i] + shift;
    return Gamble(h.space(), std::move(v));
}

Gamble pointwise_max(const Gamble& g, const Gamble& h) {
    return zip(g, h, "pointwise max", [](double a, double b) { return std::max(a, b); });
}

Gamble pointwise_min(const Gamble& g, const Gamble& h) {
    return zip(g, h, "pointwise min", [](double a, double b) { return std::min(a, b); });
}

double sup_norm(const Gamble& h) {
    double r = 0.0;
    for (double v : h.values()) r = std::max(r, std::abs(v));
    return r;
}

double sup_distance(const Gamble& g, const Gamble& h) {
    require_same_space(g.space(), h.space(), "sup distance");
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r = std::max(r, std::abs(g[i] - h[i]));
    return r;
}

// ---------------------------------------------------------------------------
// MassFunction

MassFunction::MassFunction(StateSpace space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    require(weights_.size() == space_.size(), ErrorCode::DimensionMismatch,
            "mass function has " + std::to_string(weights_.size()) + " weights for " +
                std::to_string(space_.size()) + " states");
    double total = 0.0;
    for (double& w : weights_) {
        require(std::isfinite(w), ErrorCode::InvalidMass, "mass function weights must be finite");
        require(w >= -kMassTolerance && w <= 1.0 + kMassTolerance, ErrorCode::InvalidMass,
                "mass function weight " + std::to_string(w) + " outside [0, 1]");
        w = std::clamp(w, 0.0, 1.0);
        total += w;
    }
    require(std::abs(total - 1.0) <= kMassTolerance, ErrorCode::InvalidMass,
            "mass function weights sum to " + std::to_string(total) + ", not 1");
    if (total != 1.0) {
        for (double& w : weights_) w /= total;
    }
}

MassFunction MassFunction::degenerate(const StateSpace& space, std::size_t state) {
    require(state < space.size(), ErrorCode::IndexOutOfRange, "degenerate mass state index out of range");
    std::vector<double> w(space.size(), 0.0);
    w[state] = 1.0;
    return MassFunction(space, std::move(w));
}

MassFunction MassFunction::uniform(const StateSpace& space) {
    return MassFunction(space, std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size())));
}

double expectation(const MassFunction& m, const Gamble& h) {
    require_same_space(m.space(), h.space(), "expectation");
    double r = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) r += h[i] * m[i];
    return r;
}

} // namespace credalmc
