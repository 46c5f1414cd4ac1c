#include "credalmc/credal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace credalmc {

namespace {

constexpr double kDuplicateTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::optional<ValidationIssue> issue(ErrorCode code, std::string message) {
    return ValidationIssue{code, std::move(message)};
}

std::optional<ValidationIssue> check_space(const StateSpace& expected, const StateSpace& actual, const char* what) {
    if (expected == actual) return std::nullopt;
    return issue(ErrorCode::DimensionMismatch, std::string(what) + " is defined on a different state space");
}

std::optional<ValidationIssue> validate_interval(const StateSpace& space, const ProbInterval& b) {
    const std::size_t n = space.size();
    if (b.lower.size() != n || b.upper.size() != n) {
        return issue(ErrorCode::DimensionMismatch, "interval bounds need one entry per state");
    }
    double sum_lower = 0.0, sum_upper = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        const double lo = b.lower[x], up = b.upper[x];
        if (!std::isfinite(lo) || !std::isfinite(up)) return issue(ErrorCode::InvalidModel, "interval bounds must be finite");
        if (lo < -kMassTolerance || up > 1.0 + kMassTolerance) {
            return issue(ErrorCode::InvalidModel, "interval bounds for state '" + space.label(x) + "' leave [0, 1]");
        }
        if (lo > up + kMassTolerance) {
            return issue(ErrorCode::EmptyCredalSet,
                         "lower bound exceeds upper bound for state '" + space.label(x) + "'");
        }
        sum_lower += lo;
        sum_upper += up;
    }
    if (sum_lower > 1.0 + kMassTolerance) {
        return issue(ErrorCode::EmptyCredalSet, "lower bounds sum to " + std::to_string(sum_lower) + " > 1");
    }
    if (sum_upper < 1.0 - kMassTolerance) {
        return issue(ErrorCode::EmptyCredalSet, "upper bounds sum to " + std::to_string(sum_upper) + " < 1");
    }
    for (std::size_t x = 0; x < n; ++x) {
        const double others_upper = sum_upper - b.upper[x];
        const double others_lower = sum_lower - b.lower[x];
        if (b.lower[x] + others_upper < 1.0 - kMassTolerance) {
            return issue(ErrorCode::NonReachableBounds, "lower bound of state '" + space.label(x) + "' is not reachable");
        }
        if (b.upper[x] + others_lower > 1.0 + kMassTolerance) {
            return issue(ErrorCode::NonReachableBounds, "upper bound of state '" + space.label(x) + "' is not reachable");
        }
    }
    return std::nullopt;
}

std::optional<ValidationIssue> validate_belief(const StateSpace& space, const BeliefFunction& bf) {
    if (bf.focal.empty()) return issue(ErrorCode::InvalidModel, "belief function needs at least one focal element");
    double total = 0.0;
    for (const auto& f : bf.focal) {
        if (auto e = check_space(space, f.set.space(), "focal element")) return e;
        if (f.set.is_empty()) return issue(ErrorCode::InvalidModel, "focal elements must be nonempty");
        if (!std::isfinite(f.mass) || f.mass < 0.0) {
            return issue(ErrorCode::InvalidModel, "focal masses must be finite and nonnegative");
        }
        total += f.mass;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
        return issue(ErrorCode::MassSumViolation, "focal masses sum to " + std::to_string(total) + ", not 1");
    }
    return std::nullopt;
}

void push_unique(std::vector<MassFunction>& out, MassFunction m) {
    for (const auto& v : out) {
        bool same = true;
        for (std::size_t i = 0; i < m.size() && same; ++i) same = std::abs(v[i] - m[i]) <= kDuplicateTolerance;
        if (same) return;
    }
    out.push_back(std::move(m));
}

std::vector<MassFunction> interval_vertices(const StateSpace& space, const ProbInterval& b) {
    const std::size_t n = space.size();
    require(n <= 20, ErrorCode::SizeGuardExceeded, "interval vertex enumeration limited to 20 states");
    std::vector<MassFunction> out;
    std::vector<double> point(n);
    // Every vertex has all coordinates but at most one at a bound; the free
    // coordinate is fixed by normalization.
    for (std::size_t free = 0; free < n; ++free) {
        const std::size_t patterns = std::size_t{1} << (n - 1);
        for (std::size_t mask = 0; mask < patterns; ++mask) {
            double rest = 0.0;
            std::size_t bit = 0;
            for (std::size_t x = 0; x < n; ++x) {
                if (x == free) continue;
                point[x] = (mask >> bit++) & 1U ? b.upper[x] : b.lower[x];
                rest += point[x];
            }
            const double forced = 1.0 - rest;
            if (forced < b.lower[free] - kDuplicateTolerance || forced > b.upper[free] + kDuplicateTolerance) continue;
            point[free] = std::clamp(forced, std::max(0.0, b.lower[free]), std::min(1.0, b.upper[free]));
            push_unique(out, MassFunction(space, point));
        }
    }
    return out;
}

std::vector<MassFunction> belief_selections(const StateSpace& space, const BeliefFunction& bf) {
    std::vector<std::vector<std::size_t>> members;
    std::size_t total = 1;
    for (const auto& f : bf.focal) {
        auto& m = members.emplace_back();
        for (std::size_t x = 0; x < space.size(); ++x) {
            if (f.set.contains(x)) m.push_back(x);
        }
        require(total <= kMaxVertices / m.size(), ErrorCode::SizeGuardExceeded, "too many belief-function selections");
        total *= m.size();
    }
    std::vector<MassFunction> out;
    std::vector<std::size_t> pick(members.size(), 0);
    for (std::size_t count = 0; count < total; ++count) {
        std::vector<double> w(space.size(), 0.0);
        for (std::size_t j = 0; j < members.size(); ++j) w[members[j][pick[j]]] += bf.focal[j].mass;
        push_unique(out, MassFunction(space, std::move(w)));
        for (std::size_t j = members.size(); j-- > 0;) {
            if (++pick[j] < members[j].size()) break;
            pick[j] = 0;
        }
    }
    return out;
}

template <class CapacityFn>
double choquet_levels(const Gamble& h, CapacityFn&& capacity) {
    const std::size_t n = h.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });

    std::vector<bool> level(n, true);
    double result = h[order[0]];
    std::size_t pos = 0;
    while (pos < n) {
        const double alpha = h[order[pos]];
        while (pos < n && h[order[pos]] == alpha) level[order[pos++]] = false;
        if (pos < n) result += (h[order[pos]] - alpha) * capacity(Event(h.space(), level));
    }
    return result;
}

} // namespace

std::optional<ValidationIssue> validate(const StateSpace& space, const CredalSpec& spec) {
    return std::visit(
        overloaded{
            [&](const Linear& l) { return check_space(space, l.mass.space(), "linear mass function"); },
            [&](const Vacuous&) -> std::optional<ValidationIssue> { return std::nullopt; },
            [&](const VertexSet& vs) -> std::optional<ValidationIssue> {
                if (vs.vertices.empty()) return issue(ErrorCode::EmptyCredalSet, "vertex set is empty");
                for (const auto& v : vs.vertices) {
                    if (auto e = check_space(space, v.space(), "vertex")) return e;
                }
                return std::nullopt;
            },
            [&](const Contamination& c) -> std::optional<ValidationIssue> {
                if (auto e = check_space(space, c.base.space(), "contamination base")) return e;
                if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) {
                    return issue(ErrorCode::EpsilonOutOfRange,
                                 "contamination epsilon " + std::to_string(c.epsilon) + " not in (0, 1)");
                }
                return std::nullopt;
            },
            [&](const BeliefFunction& bf) { return validate_belief(space, bf); },
            [&](const ProbInterval& pi) { return validate_interval(space, pi); },
        },
        spec);
}

CredalModel::CredalModel(StateSpace space, CredalSpec spec) : space_(std::move(space)), spec_(std::move(spec)) {
    if (auto e = validate(space_, spec_)) throw Error(e->code, e->message);
    if (auto* bf = std::get_if<BeliefFunction>(&spec_)) {
        double total = 0.0;
        for (const auto& f : bf->focal) total += f.mass;
        for (auto& f : bf->focal) f.mass /= total;
    }
}

CredalModel CredalModel::linear(MassFunction mass) {
    auto space = mass.space();
    return CredalModel(std::move(space), Linear{std::move(mass)});
}

CredalModel CredalModel::vacuous(const StateSpace& space) { return CredalModel(space, Vacuous{}); }

CredalModel CredalModel::vertex_set(const StateSpace& space, std::vector<MassFunction> vertices) {
    return CredalModel(space, VertexSet{std::move(vertices)});
}

CredalModel CredalModel::contamination(MassFunction base, double epsilon) {
    auto space = base.space();
    return CredalModel(std::move(space), Contamination{std::move(base), epsilon});
}

CredalModel CredalModel::belief(const StateSpace& space, std::vector<FocalElement> focal) {
    return CredalModel(space, BeliefFunction{std::move(focal)});
}

CredalModel CredalModel::interval(const StateSpace& space, std::vector<double> lower, std::vector<double> upper) {
    return CredalModel(space, ProbInterval{std::move(lower), std::move(upper)});
}

std::string_view CredalModel::kind() const noexcept {
    static constexpr std::string_view names[] = {"linear", "vacuous", "vertices", "contamination", "belief", "interval"};
    return names[spec_.index()];
}

double upper(const CredalModel& model, const Gamble& h) {
    require_same_space(model.space(), h.space(), "upper expectation");
    return std::visit(
        overloaded{
            [&](const Linear& l) { return expectation(l.mass, h); },
            [&](const Vacuous&) { return h.max(); },
            [&](const VertexSet& vs) {
                double best = expectation(vs.vertices.front(), h);
                for (const auto& v : vs.vertices) best = std::max(best, expectation(v, h));
                return best;
            },
            [&](const Contamination& c) { return (1.0 - c.epsilon) * expectation(c.base, h) + c.epsilon * h.max(); },
            [&](const BeliefFunction& bf) {
                double total = 0.0;
                for (const auto& f : bf.focal) {
                    double best = -std::numeric_limits<double>::infinity();
                    for (std::size_t x = 0; x < h.size(); ++x) {
                        if (f.set.contains(x)) best = std::max(best, h[x]);
                    }
                    total += f.mass * best;
                }
                return total;
            },
            [&](const ProbInterval&) { return choquet(Capacity::of(model), h); },
        },
        model.spec());
}

double lower(const CredalModel& model, const Gamble& h) { return -upper(model, -h); }

Capacity Capacity::of(const CredalModel& interval_model) {
    const auto* bounds = std::get_if<ProbInterval>(&interval_model.spec());
    require(bounds != nullptr, ErrorCode::InvalidModel, "event capacity requires a probability-interval model");
    return Capacity(interval_model.space(), [b = *bounds](const Event& a) { return event_upper(b, a); });
}

double Capacity::operator()(const Event& event) const {
    require_same_space(space_, event.space(), "capacity");
    return set_function_(event);
}

double event_upper(const ProbInterval& bounds, const Event& event) {
    const std::size_t n = event.space().size();
    require(bounds.upper.size() == n && bounds.lower.size() == n, ErrorCode::DimensionMismatch,
            "interval bounds do not match the event's state space");
    std::size_t members = 0;
    double inside_upper = 0.0, outside_lower = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        if (event.contains(x)) {
            inside_upper += bounds.upper[x];
            ++members;
        } else {
            outside_lower += bounds.lower[x];
        }
    }
    if (members == 0) return 0.0;
    if (members == n) return 1.0;
    return std::clamp(std::min(inside_upper, 1.0 - outside_lower), 0.0, 1.0);
}

double event_upper(const CredalModel& model, const Event& event) {
    const auto* bounds = std::get_if<ProbInterval>(&model.spec());
    require(bounds != nullptr, ErrorCode::InvalidModel, "event_upper requires a probability-interval model");
    require_same_space(model.space(), event.space(), "event_upper");
    return event_upper(*bounds, event);
}

double choquet(const Capacity& capacity, const Gamble& h) {
    require_same_space(capacity.space(), h.space(), "choquet");
    return choquet_levels(h, capacity);
}

std::vector<MassFunction> vertices(const CredalModel& model) {
    const auto& space = model.space();
    return std::visit(
        overloaded{
            [&](const Linear& l) { return std::vector<MassFunction>{l.mass}; },
            [&](const Vacuous&) {
                std::vector<MassFunction> out;
                for (std::size_t x = 0; x < space.size(); ++x) out.push_back(MassFunction::degenerate(space, x));
                return out;
            },
            [&](const VertexSet& vs) { return vs.vertices; },
            [&](const Contamination& c) {
                std::vector<MassFunction> out;
                for (std::size_t x = 0; x < space.size(); ++x) {
                    std::vector<double> w(space.size());
                    for (std::size_t z = 0; z < space.size(); ++z) w[z] = (1.0 - c.epsilon) * c.base[z];
                    w[x] += c.epsilon;
                    push_unique(out, MassFunction(space, std::move(w)));
                }
                return out;
            },
            [&](const BeliefFunction& bf) { return belief_selections(space, bf); },
            [&](const ProbInterval& pi) { return interval_vertices(space, pi); },
        },
        model.spec());
}

} // namespace credalmc
