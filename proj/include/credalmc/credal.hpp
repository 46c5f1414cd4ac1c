#pragma once

// Credal sets (closed convex sets of mass functions) in six concrete
// representations, all evaluated through their upper expectation functional.

#include "credalmc/error.hpp"
#include "credalmc/state.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace credalmc {

/// A single mass function: the precise special case.
struct Linear {
    MassFunction mass;
};

/// The full simplex.
struct Vacuous {};

/// Convex hull of finitely many mass functions.
struct VertexSet {
    std::vector<MassFunction> vertices;
};

/// Linear-vacuous mixture (1 - epsilon) * base + epsilon * simplex.
struct Contamination {
    MassFunction base;
    double epsilon;
};

struct FocalElement {
    Event set;
    double mass;
};

/// Dempster-Shafer model: a mixture of vacuous models on the focal sets.
struct BeliefFunction {
    std::vector<FocalElement> focal;
};

/// Mass functions m with lower[x] <= m(x) <= upper[x] for every state x.
struct ProbInterval {
    std::vector<double> lower;
    std::vector<double> upper;
};

using CredalSpec = std::variant<Linear, Vacuous, VertexSet, Contamination, BeliefFunction, ProbInterval>;

struct ValidationIssue {
    ErrorCode code;
    std::string message;
};

/// Checks the representation invariants without constructing a model. For
/// probability intervals both non-emptiness (sum of lower bounds <= 1 <= sum
/// of upper bounds) and reachability of every bound are enforced.
std::optional<ValidationIssue> validate(const StateSpace& space, const CredalSpec& spec);

class CredalModel {
public:
    /// Validates eagerly; throws Error with the code from validate().
    CredalModel(StateSpace space, CredalSpec spec);

    static CredalModel linear(MassFunction mass);
    static CredalModel vacuous(const StateSpace& space);
    static CredalModel vertex_set(const StateSpace& space, std::vector<MassFunction> vertices);
    static CredalModel contamination(MassFunction base, double epsilon);
    static CredalModel belief(const StateSpace& space, std::vector<FocalElement> focal);
    static CredalModel interval(const StateSpace& space, std::vector<double> lower, std::vector<double> upper);

    const StateSpace& space() const noexcept { return space_; }
    const CredalSpec& spec() const noexcept { return spec_; }
    bool is_linear() const noexcept { return std::holds_alternative<Linear>(spec_); }
    /// "linear", "vacuous", "vertices", "contamination", "belief" or "interval".
    std::string_view kind() const noexcept;

private:
    StateSpace space_;
    CredalSpec spec_;
};

/// Upper expectation: max of expectation(m, h) over the credal set.
double upper(const CredalModel& model, const Gamble& h);
/// Lower expectation, by conjugacy: -upper(model, -h).
double lower(const CredalModel& model, const Gamble& h);

/// A normalized monotone set function on the events of a state space.
class Capacity {
public:
    Capacity(StateSpace space, std::function<double(const Event&)> set_function)
        : space_(std::move(space)), set_function_(std::move(set_function)) {}

    /// The event upper probability of a probability-interval model.
    static Capacity of(const CredalModel& interval_model);

    const StateSpace& space() const noexcept { return space_; }
    double operator()(const Event& event) const;

private:
    StateSpace space_;
    std::function<double(const Event&)> set_function_;
};

/// min{ sum_{z in A} upper(z), 1 - sum_{z not in A} lower(z) }.
double event_upper(const ProbInterval& bounds, const Event& event);
/// Throws ErrorCode::InvalidModel unless the model is a probability interval.
double event_upper(const CredalModel& model, const Event& event);

/// Exact Choquet integral over the finitely many level sets of h.
double choquet(const Capacity& capacity, const Gamble& h);

/// A finite spanning set of the credal set (its extreme points, plus possibly
/// some non-extreme selections for belief functions), duplicates removed.
std::vector<MassFunction> vertices(const CredalModel& model);

/// Largest number of vertices vertices() is willing to produce.
inline constexpr std::size_t kMaxVertices = std::size_t{1} << 20;

} // namespace credalmc
