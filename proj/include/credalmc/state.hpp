#pragma once

// Finite state spaces and the objects that live on them: gambles (real-valued
// maps), events, and probability mass functions. Everything is positional in
// the declaration order of the state labels.

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace credalmc {

/// Tolerance on nonnegativity and normalization of mass functions.
inline constexpr double kMassTolerance = 1e-9;

class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels);
    StateSpace(std::initializer_list<std::string> labels)
        : StateSpace(std::vector<std::string>(labels)) {}

    std::size_t size() const noexcept { return labels_->size(); }
    const std::string& label(std::size_t i) const { return labels_->at(i); }
    std::span<const std::string> labels() const noexcept { return *labels_; }

    std::optional<std::size_t> find(std::string_view label) const noexcept;
    /// Throws ErrorCode::UnknownState.
    std::size_t index_of(std::string_view label) const;

    friend bool operator==(const StateSpace& a, const StateSpace& b) noexcept;

private:
    std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Throws ErrorCode::DimensionMismatch unless the two spaces coincide.
void require_same_space(const StateSpace& a, const StateSpace& b, std::string_view context);

class Event {
public:
    Event(StateSpace space, std::vector<bool> members);

    static Event of(const StateSpace& space, std::initializer_list<std::string_view> labels);
    static Event of_indices(const StateSpace& space, std::span<const std::size_t> indices);
    static Event singleton(const StateSpace& space, std::size_t state);
    static Event empty(const StateSpace& space);
    static Event full(const StateSpace& space);

    const StateSpace& space() const noexcept { return space_; }
    bool contains(std::size_t state) const { return members_.at(state); }
    std::size_t count() const noexcept;
    bool is_empty() const noexcept { return count() == 0; }
    Event complement() const;

    friend Event operator|(const Event& a, const Event& b);
    friend Event operator&(const Event& a, const Event& b);
    friend bool operator==(const Event& a, const Event& b);

private:
    StateSpace space_;
    std::vector<bool> members_;
};

class Gamble {
public:
    /// Throws ErrorCode::DimensionMismatch on a size mismatch and
    /// ErrorCode::InvalidGamble on non-finite entries.
    Gamble(StateSpace space, std::vector<double> values);

    static Gamble constant(const StateSpace& space, double value);
    static Gamble indicator(const Event& event);
    static Gamble indicator(const StateSpace& space, std::size_t state);

    const StateSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    double max() const;
    double min() const;

    Gamble operator-() const;
    friend Gamble operator+(const Gamble& g, const Gamble& h);
    friend Gamble operator-(const Gamble& g, const Gamble& h);
    friend Gamble operator*(double scalar, const Gamble& h);
    friend Gamble operator+(const Gamble& h, double shift);

private:
    StateSpace space_;
    std::vector<double> values_;
};

Gamble pointwise_max(const Gamble& g, const Gamble& h);
Gamble pointwise_min(const Gamble& g, const Gamble& h);

/// max |h(x)|
double sup_norm(const Gamble& h);
/// max |g(x) - h(x)|
double sup_distance(const Gamble& g, const Gamble& h);

class MassFunction {
public:
    /// Accepts weights that are nonnegative and sum to one within
    /// kMassTolerance, then clamps and renormalizes them once. Anything
    /// further off throws ErrorCode::InvalidMass.
    MassFunction(StateSpace space, std::vector<double> weights);

    static MassFunction degenerate(const StateSpace& space, std::size_t state);
    static MassFunction uniform(const StateSpace& space);

    const StateSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    StateSpace space_;
    std::vector<double> weights_;
};

/// Sum over x of h(x) m(x).
double expectation(const MassFunction& m, const Gamble& h);

} // namespace credalmc
