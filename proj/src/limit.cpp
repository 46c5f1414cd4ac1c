#include "credalmc/limit.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace credalmc {

namespace {

void require_precise(const UpperTransitionOperator& op, const char* what) {
    require(op.is_precise(), ErrorCode::InvalidModel, std::string(what) + " requires a precise transition operator");
}

void require_epsilon(double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::EpsilonOutOfRange, "contamination epsilon must lie in (0, 1)");
}

void require_tolerance(double tol) {
    require(tol > 0.0 && std::isfinite(tol), ErrorCode::InvalidArgument, "tolerance must be positive");
}

} // namespace

LimitReport limit_upper(const UpperTransitionOperator& op, const Gamble& h, double tol, std::size_t max_iter) {
    require_tolerance(tol);
    require_same_space(op.space(), h.space(), "limit_upper");
    Gamble g = h;
    for (std::size_t k = 0;; ++k) {
        const double residual = g.max() - g.min();
        if (residual <= tol) return {g.max(), k, residual};
        if (k == max_iter) {
            fail(ErrorCode::NonConvergence, "iterates still oscillate by " + std::to_string(residual) + " after " +
                                                std::to_string(max_iter) +
                                                " iterations; the operator may be periodic (try detect_cycle)");
        }
        g = apply(op, g);
    }
}

double contamination_limit(const UpperTransitionOperator& precise_op, double epsilon, const Gamble& h, double tol) {
    require_precise(precise_op, "contamination_limit");
    require_epsilon(epsilon);
    require_tolerance(tol);
    const double bound = sup_norm(h);
    Gamble g = h;
    double weight = 1.0; // (1 - eps)^k
    double total = 0.0;
    for (std::size_t k = 0;; ++k) {
        total += epsilon * weight * g.max();
        weight *= 1.0 - epsilon;
        // eps * sum_{j>k} (1 - eps)^j * max|h| = (1 - eps)^{k+1} * max|h|
        if (weight * bound <= tol) break;
        g = apply(precise_op, g);
    }
    return total;
}

double contamination_evolve(const CredalModel& initial, const UpperTransitionOperator& precise_op, double epsilon,
                            const Gamble& h, std::size_t n) {
    require_precise(precise_op, "contamination_evolve");
    require_epsilon(epsilon);
    Gamble g = h;
    double weight = 1.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        tail += epsilon * weight * g.max();
        weight *= 1.0 - epsilon;
        g = apply(precise_op, g);
    }
    return weight * upper(initial, g) + tail;
}

MassFunction precise_stationary(const UpperTransitionOperator& precise_op, double tol, std::size_t max_iter) {
    require_precise(precise_op, "precise_stationary");
    require_tolerance(tol);
    const auto verdict = is_regular(precise_op);
    require(verdict.found, ErrorCode::NotRegular,
            "transition matrix is not regular within " + std::to_string(verdict.n) + " steps");
    const auto q = precise_op.matrix();
    const std::size_t n = q.size();
    std::vector<double> m(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (std::size_t k = 0; k < max_iter; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) next[y] += m[x] * q[x][y];
        }
        double change = 0.0;
        for (std::size_t y = 0; y < n; ++y) change = std::max(change, std::abs(next[y] - m[y]));
        m.swap(next);
        if (change <= tol) return MassFunction(precise_op.space(), m);
    }
    fail(ErrorCode::NonConvergence, "stationary distribution did not settle within " + std::to_string(max_iter) +
                                        " iterations");
}

std::size_t default_cycle_window(const StateSpace& space) { return 2 * space.size() * space.size(); }

CycleReport detect_cycle(const UpperTransitionOperator& op, const Gamble& h, double tol, std::size_t max_iter,
                         std::optional<std::size_t> max_period) {
    require_tolerance(tol);
    require_same_space(op.space(), h.space(), "detect_cycle");
    const std::size_t window = max_period.value_or(default_cycle_window(op.space()));
    require(window >= 1, ErrorCode::InvalidArgument, "cycle window must be at least 1");

    // history[j - first] holds h_j for the most recent iterates.
    std::deque<Gamble> history{h};
    std::size_t first = 0;
    auto at = [&](std::size_t j) -> const Gamble& { return history[j - first]; };
    auto lag = [&](std::size_t j, std::size_t p) { return sup_distance(at(j + p), at(j)); };

    // Worst lag-p distance over j in [k, k + p], or +inf when history is short.
    auto window_residual = [&](std::size_t last, std::size_t p) {
        if (last < 2 * p || last - 2 * p < first) return std::numeric_limits<double>::infinity();
        double worst = 0.0;
        for (std::size_t j = last - 2 * p; j <= last - p; ++j) worst = std::max(worst, lag(j, p));
        return worst;
    };
    auto report = [&](std::size_t last, std::size_t p) {
        const std::size_t k = last - 2 * p;
        return CycleReport{p, at(k), k, window_residual(last, p)};
    };

    std::size_t candidate = 0;
    for (std::size_t last = 0; last <= max_iter; ++last) {
        if (last > 0) {
            history.push_back(apply(op, history.back()));
            if (history.size() > 2 * window + 2) {
                history.pop_front();
                ++first;
            }
        }
        if (candidate == 0) {
            for (std::size_t p = 1; p <= window; ++p) {
                if (window_residual(last, p) <= tol) {
                    candidate = p;
                    break;
                }
            }
            if (candidate == 1) return report(last, 1);
            if (candidate == 0) continue;
        }
        // A lag that divides the candidate may still be contracting towards
        // zero; keep iterating until it either settles below tol or stops
        // shrinking over a full candidate period.
        bool shrinking = false;
        for (std::size_t q = 1; q < candidate; ++q) {
            if (candidate % q != 0) continue;
            if (window_residual(last, q) <= tol) return report(last, q);
            if (last < q + candidate || last - q - candidate < first) {
                shrinking = true;
                continue;
            }
            const double now = lag(last - q, q);
            const double before = lag(last - q - candidate, q);
            if (now < before * (1.0 - 1e-6)) shrinking = true;
        }
        if (!shrinking) return report(last, candidate);
    }
    fail(ErrorCode::NoCycleFound, "no cycle with period <= " + std::to_string(window) + " within " +
                                      std::to_string(max_iter) + " iterations (inconclusive)");
}

} // namespace credalmc
