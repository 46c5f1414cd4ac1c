#pragma once

// Brute-force ground truth for the chain engine: enumerate every compatible
// probability tree whose local mass functions are drawn from the vertex
// lists of the local credal models, and take envelopes of the resulting
// precise expectations.
//
// Situations x_{1:k} are ordered by length, then lexicographically; an
// assignment index is a mixed-radix number over that ordering with the root
// (initial model) as its most significant digit.

#include "credalmc/chain.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace credalmc {

inline constexpr std::uint64_t kMaxAssignments = std::uint64_t{1} << 40;

struct TreeAssignment {
    MassFunction initial_choice;
    /// Local mass function for each non-terminal situation x_{1:k}, k >= 1.
    std::map<std::vector<std::size_t>, MassFunction> situation_choices;
};

/// Product of vertex counts over the non-terminal situations of a tree with
/// the given horizon. Throws ErrorCode::SizeGuardExceeded above kMaxAssignments.
std::uint64_t count_assignments(const ImpreciseMarkovChain& chain, std::size_t horizon);

/// Builds the assignment with the given index for the chain's full horizon.
TreeAssignment assignment_at(const ImpreciseMarkovChain& chain, std::uint64_t index);

/// sum_{x_{1:N}} f(x_{1:N}) m_1(x_1) prod_k q(x_{k+1} | x_{1:k}).
double tree_expectation(const TreeAssignment& assignment, const PathGamble& f);
/// Conditional form given the history x_{1:n}.
double tree_expectation_given(const TreeAssignment& assignment, std::span<const std::size_t> history,
                              const PathGamble& f);

struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
    /// Index of the first assignment attaining the upper value.
    std::uint64_t argmax = 0;
};

Envelope envelope(const ImpreciseMarkovChain& chain, const PathGamble& f);
std::vector<Envelope> envelope(const ImpreciseMarkovChain& chain, std::span<const PathGamble> fs);

/// Envelope of the conditional expectations given x_{1:n}; only the
/// situations below the history are enumerated.
Envelope envelope_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                        const PathGamble& f);
std::vector<Envelope> envelope_given(const ImpreciseMarkovChain& chain, std::span<const std::size_t> history,
                                     std::span<const PathGamble> fs);

/// Envelopes of all cylinder probabilities P(X(1..m) = x_{1:m}), in one pass.
/// Result[m - 1][encode_path(x_{1:m})].
std::vector<std::vector<Envelope>> path_envelopes(const ImpreciseMarkovChain& chain);

/// Envelope restricted to Markov trees, where the local choice depends only
/// on the time and the current state rather than the whole history.
std::vector<Envelope> markov_envelope(const ImpreciseMarkovChain& chain, std::span<const PathGamble> fs);

} // namespace credalmc
