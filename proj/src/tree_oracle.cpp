#include "credalmc/tree_oracle.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace credalmc {

namespace {

// Vertex list flattened row-major: count() mass functions of `states` weights.
struct VertexList {
    std::vector<double> flat;
    std::size_t states = 0;

    std::size_t count() const { return flat.size() / states; }
    const double* vertex(std::size_t i) const { return flat.data() + i * states; }
};

VertexList flatten(const CredalModel& model) {
    VertexList list;
    list.states = model.space().size();
    for (const auto& v : vertices(model)) list.flat.insert(list.flat.end(), v.weights().begin(), v.weights().end());
    return list;
}

// Caches vertex lists per local model: level 0 is the initial model, level
// d >= 1 with state x is row x of the operator between times d and d + 1.
class VertexCache {
public:
    explicit VertexCache(const ImpreciseMarkovChain& chain) : chain_(chain), initial_(flatten(chain.initial())) {
        for (const auto& op : chain.operators()) {
            auto& rows = rows_.emplace_back();
            for (const auto& r : op.rows()) rows.push_back(flatten(r));
        }
    }

    const VertexList& at(std::size_t level, std::size_t state) const {
        if (level == 0) return initial_;
        return rows_[chain_.is_stationary() ? 0 : level - 1][state];
    }

private:
    const ImpreciseMarkovChain& chain_;
    VertexList initial_;
    std::vector<std::vector<VertexList>> rows_;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    require(b == 0 || a <= kMaxAssignments / b, ErrorCode::SizeGuardExceeded,
            "more than 2^40 tree assignments to enumerate");
    const std::uint64_t r = a * b;
    require(r <= kMaxAssignments, ErrorCode::SizeGuardExceeded, "more than 2^40 tree assignments to enumerate");
    return r;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

// The decision structure for one enumeration: situations below a history of
// length `depth` (0 = the root), each mapped to a digit of the odometer.
struct Plan {
    std::size_t states = 0;
    std::size_t horizon = 0;
    std::size_t depth = 0;
    std::vector<std::size_t> history;

    // Per level d in [depth, horizon): first situation index.
    std::vector<std::size_t> level_offset;
    // Per situation: which odometer digit selects its vertex.
    std::vector<std::size_t> digit_of;
    // Per situation: its vertex list.
    std::vector<const VertexList*> list_of;
    // Per digit: radix and level.
    std::vector<std::size_t> radix;
    std::vector<std::size_t> digit_level;
    std::uint64_t count = 1;

    std::size_t situations_at(std::size_t d) const { return ipow(states, d - depth); }
};

enum class Tying { PerSituation, PerTimeAndState };

Plan make_plan(const ImpreciseMarkovChain& chain, const VertexCache& cache, std::span<const std::size_t> history,
               Tying tying) {
    Plan plan;
    plan.states = chain.space().size();
    plan.horizon = chain.horizon();
    plan.depth = history.size();
    plan.history.assign(history.begin(), history.end());
    require(plan.depth <= plan.horizon, ErrorCode::IndexOutOfRange, "history longer than the horizon");
    path_count(chain.space(), plan.horizon); // table-size guard

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared_digit;
    std::size_t situation = 0;
    for (std::size_t d = plan.depth; d < plan.horizon; ++d) {
        plan.level_offset.push_back(situation);
        const std::size_t count = plan.situations_at(d);
        for (std::size_t j = 0; j < count; ++j, ++situation) {
            // Last state of the situation x_{1:d}.
            std::size_t last = 0;
            if (d > 0) last = d > plan.depth ? j % plan.states : plan.history.back();
            const VertexList& list = cache.at(d, last);
            plan.list_of.push_back(&list);
            std::size_t digit;
            auto key = std::make_pair(d, tying == Tying::PerSituation ? situation : last);
            auto it = shared_digit.find(key);
            if (it != shared_digit.end()) {
                digit = it->second;
            } else {
                digit = plan.radix.size();
                shared_digit.emplace(key, digit);
                plan.radix.push_back(list.count());
                plan.digit_level.push_back(d);
                plan.count = checked_mul(plan.count, list.count());
            }
            plan.digit_of.push_back(digit);
        }
    }
    return plan;
}

// Walks assignments [begin, end) in index order, maintaining the weights of
// every partial path below the history. weights[d - depth] covers paths of
// length d extending the history (weights[0] == {1}).
template <class Visit>
void enumerate(const Plan& plan, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
    const std::size_t levels = plan.horizon - plan.depth;
    std::vector<std::vector<double>> weights(levels + 1);
    for (std::size_t l = 0; l <= levels; ++l) weights[l].assign(ipow(plan.states, l), 0.0);
    weights[0][0] = 1.0;

    std::vector<std::size_t> digits(plan.radix.size(), 0);
    {
        std::uint64_t rest = begin;
        for (std::size_t i = digits.size(); i-- > 0;) {
            digits[i] = static_cast<std::size_t>(rest % plan.radix[i]);
            rest /= plan.radix[i];
        }
    }

    auto recompute_from = [&](std::size_t level) {
        for (std::size_t d = level; d < plan.horizon; ++d) {
            const std::size_t l = d - plan.depth;
            const auto& parent = weights[l];
            auto& child = weights[l + 1];
            const std::size_t first = plan.level_offset[l];
            for (std::size_t j = 0; j < parent.size(); ++j) {
                const std::size_t s = first + j;
                const double* q = plan.list_of[s]->vertex(digits[plan.digit_of[s]]);
                const double w = parent[j];
                double* out = child.data() + j * plan.states;
                for (std::size_t x = 0; x < plan.states; ++x) out[x] = w * q[x];
            }
        }
    };

    recompute_from(plan.depth);
    for (std::uint64_t index = begin; index < end; ++index) {
        visit(index, weights);
        if (index + 1 == end) break;
        std::size_t i = digits.size();
        while (i-- > 0) {
            if (++digits[i] < plan.radix[i]) break;
            digits[i] = 0;
        }
        recompute_from(plan.digit_level[i]);
    }
}

// Splits the index range over hardware threads; accumulators are merged in
// chunk order so the result does not depend on the partition.
template <class Acc>
Acc run(const Plan& plan, const Acc& prototype) {
    const std::uint64_t total = plan.count;
    std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
    if (total < (std::uint64_t{1} << 14)) workers = 1;
    workers = static_cast<std::size_t>(std::min<std::uint64_t>(workers, total));

    std::vector<Acc> parts(workers, prototype);
    auto work = [&](std::size_t w) {
        const std::uint64_t begin = total * w / workers;
        const std::uint64_t end = total * (w + 1) / workers;
        enumerate(plan, begin, end, [&](std::uint64_t index, const auto& weights) { parts[w].visit(index, weights); });
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (std::size_t w = 1; w < workers; ++w) parts[0].merge(parts[w]);
    return parts[0];
}

void update(Envelope& e, double value, std::uint64_t index) {
    e.lower = std::min(e.lower, value);
    if (value > e.upper) {
        e.upper = value;
        e.argmax = index;
    }
}

void merge_into(Envelope& e, const Envelope& other) {
    e.lower = std::min(e.lower, other.lower);
    if (other.upper > e.upper) {
        e.upper = other.upper;
        e.argmax = other.argmax;
    }
}

Envelope empty_envelope() {
    return {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
}

struct GambleAccumulator {
    // Values of each gamble on the continuations of the history.
    std::vector<std::span<const double>> slices;
    std::vector<Envelope> result;

    void visit(std::uint64_t index, const std::vector<std::vector<double>>& weights) {
        const auto& w = weights.back();
        for (std::size_t g = 0; g < slices.size(); ++g) {
            double e = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) e += slices[g][i] * w[i];
            update(result[g], e, index);
        }
    }

    void merge(const GambleAccumulator& other) {
        for (std::size_t g = 0; g < result.size(); ++g) merge_into(result[g], other.result[g]);
    }
};

struct CylinderAccumulator {
    std::vector<std::vector<Envelope>> result;

    void visit(std::uint64_t index, const std::vector<std::vector<double>>& weights) {
        for (std::size_t m = 1; m < weights.size(); ++m) {
            for (std::size_t i = 0; i < weights[m].size(); ++i) update(result[m - 1][i], weights[m][i], index);
        }
    }

    void merge(const CylinderAccumulator& other) {
        for (std::size_t m = 0; m < result.size(); ++m) {
            for (std::size_t i = 0; i < result[m].size(); ++i) merge_into(result[m][i], other.result[m][i]);
        }
    }
};

std::vector<Envelope> gamble_envelopes(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                                       std::span<const PathGamble> fs, Tying tying) {
    VertexCache cache(chain);
    const Plan plan = make_plan(chain, cache, history, tying);
    const std::size_t continuations = ipow(plan.states, plan.horizon - plan.depth);
    const std::size_t offset = encode_path(history, plan.states) * continuations;

    GambleAccumulator acc;
    for (const auto& f : fs) {
        require(f.horizon() == chain.horizon(), ErrorCode::HorizonMismatch, "path gamble horizon differs from chain");
        require_same_space(chain.space(), f.space(), "envelope");
        acc.slices.push_back(f.values().subspan(offset, continuations));
    }
    acc.result.assign(fs.size(), empty_envelope());
    return run(plan, acc).result;
}

double conditional_sum(const TreeAssignment& a, std::vector<std::size_t>& prefix, const PathGamble& f) {
    if (prefix.size() == f.horizon()) return f(prefix);
    auto it = a.situation_choices.find(prefix);
    if (it == a.situation_choices.end()) {
        fail(ErrorCode::IncompleteAssignment,
             "assignment has no local mass function for a situation of length " + std::to_string(prefix.size()));
    }
    const MassFunction& q = it->second;
    require_same_space(q.space(), f.space(), "tree expectation");
    double total = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) {
        if (q[x] == 0.0) continue;
        prefix.push_back(x);
        total += q[x] * conditional_sum(a, prefix, f);
        prefix.pop_back();
    }
    return total;
}

} // namespace

std::uint64_t count_assignments(const ImpreciseMarkovChain& chain, std::size_t horizon) {
    require(horizon >= 1 && horizon <= chain.horizon(), ErrorCode::IndexOutOfRange,
            "assignment horizon must lie in [1, chain horizon]");
    const std::size_t states = chain.space().size();
    std::uint64_t total = vertices(chain.initial()).size();
    require(total <= kMaxAssignments, ErrorCode::SizeGuardExceeded, "more than 2^40 tree assignments to enumerate");
    // Level k holds |X|^{k-1} situations per last state.
    std::uint64_t per_state = 1;
    for (std::size_t k = 1; k < horizon; ++k) {
        const auto& op = chain.transition(k);
        for (std::size_t x = 0; x < states; ++x) {
            const std::uint64_t c = vertices(op.row(x)).size();
            if (c == 1) continue;
            for (std::uint64_t i = 0; i < per_state; ++i) total = checked_mul(total, c);
        }
        per_state = std::min<std::uint64_t>(per_state * states, kMaxAssignments);
    }
    return total;
}

TreeAssignment assignment_at(const ImpreciseMarkovChain& chain, std::uint64_t index) {
    VertexCache cache(chain);
    const Plan plan = make_plan(chain, cache, {}, Tying::PerSituation);
    require(index < plan.count, ErrorCode::IndexOutOfRange, "assignment index out of range");
    std::vector<std::size_t> digits(plan.radix.size());
    for (std::size_t i = digits.size(); i-- > 0;) {
        digits[i] = static_cast<std::size_t>(index % plan.radix[i]);
        index /= plan.radix[i];
    }
    auto choice = [&](std::size_t s) {
        const VertexList& list = *plan.list_of[s];
        const double* v = list.vertex(digits[plan.digit_of[s]]);
        return MassFunction(chain.space(), std::vector<double>(v, v + list.states));
    };
    TreeAssignment a{choice(0), {}};
    for (std::size_t d = 1; d < plan.horizon; ++d) {
        for (std::size_t j = 0; j < plan.situations_at(d); ++j) {
            a.situation_choices.emplace(decode_path(j, plan.states, d), choice(plan.level_offset[d] + j));
        }
    }
    return a;
}

double tree_expectation(const TreeAssignment& assignment, const PathGamble& f) {
    const auto& m = assignment.initial_choice;
    require_same_space(m.space(), f.space(), "tree expectation");
    std::vector<std::size_t> prefix;
    double total = 0.0;
    for (std::size_t x = 0; x < m.size(); ++x) {
        if (m[x] == 0.0) continue;
        prefix.assign(1, x);
        total += m[x] * conditional_sum(assignment, prefix, f);
    }
    return total;
}

double tree_expectation_given(const TreeAssignment& assignment, std::span<const std::size_t> history,
                              const PathGamble& f) {
    require(!history.empty() && history.size() <= f.horizon(), ErrorCode::IndexOutOfRange,
            "history length must lie in [1, horizon]");
    std::vector<std::size_t> prefix(history.begin(), history.end());
    return conditional_sum(assignment, prefix, f);
}

Envelope envelope(const ImpreciseMarkovChain& chain, const PathGamble& f) {
    return envelope(chain, std::span<const PathGamble>(&f, 1)).front();
}

std::vector<Envelope> envelope(const ImpreciseMarkovChain& chain, std::span<const PathGamble> fs) {
    return gamble_envelopes(chain, {}, fs, Tying::PerSituation);
}

Envelope envelope_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                        const PathGamble& f) {
    return envelope_given(chain, history, std::span<const PathGamble>(&f, 1)).front();
}

std::vector<Envelope> envelope_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                                     std::span<const PathGamble> fs) {
    require(!history.empty(), ErrorCode::IndexOutOfRange, "conditional envelope needs a nonempty history");
    return gamble_envelopes(chain, history, fs, Tying::PerSituation);
}

std::vector<std::vector<Envelope>> path_envelopes(const ImpreciseMarkovChain& chain) {
    VertexCache cache(chain);
    const Plan plan = make_plan(chain, cache, {}, Tying::PerSituation);
    CylinderAccumulator acc;
    for (std::size_t m = 1; m <= plan.horizon; ++m) acc.result.emplace_back(ipow(plan.states, m), empty_envelope());
    return run(plan, acc).result;
}

std::vector<Envelope> markov_envelope(const ImpreciseMarkovChain& chain, std::span<const PathGamble> fs) {
    return gamble_envelopes(chain, {}, fs, Tying::PerTimeAndState);
}

} // namespace credalmc
