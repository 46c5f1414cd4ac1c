#pragma once

// Command layer behind the credalmc executable. Each command writes CSV with
// a header row to the given stream.

#include "credalmc/scenario.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace credalmc {

struct CommandOptions {
    std::optional<std::string> event;  // "a,b"
    std::optional<std::string> gamble; // "a:1,b:0.5"
    std::optional<std::string> path;   // "a,a"
    std::optional<std::size_t> length;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::size_t> n_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"evolve", "limit", "regularity", "joint", "credal-approx", "verify"};
    return names;
}

/// Parses "label:value,..." with unspecified labels set to 0.
Gamble parse_gamble(const StateSpace& space, std::string_view text);
/// Parses "label,label,...".
Event parse_event(const StateSpace& space, std::string_view text);
std::vector<std::size_t> parse_path(const StateSpace& space, std::string_view text);

/// %.12g
std::string format_number(double x);

/// Flags left unset are filled from the scenario's first query for the same
/// command. Returns the process exit status (0, or 1 when verify finds a gap
/// above tolerance). Errors propagate as credalmc::Error.
int run_command(const std::string& command, const Scenario& scenario, CommandOptions options, std::ostream& out);

/// 2 for input problems, 3 numerical, 4 size guard, 5 anything else.
int exit_code_for(ErrorCode code);

} // namespace credalmc
