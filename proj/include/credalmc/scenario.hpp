#pragma once

// JSON scenario files: state labels, initial model, transition model(s),
// horizon and optional canned queries. The format is described in README.md.

#include "credalmc/chain.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace credalmc {

struct Query {
    std::string command;
    nlohmann::json params;
};

struct Scenario {
    StateSpace space;
    CredalModel initial;
    /// One operator for a stationary scenario, otherwise horizon - 1.
    std::vector<UpperTransitionOperator> transitions;
    bool stationary = true;
    std::size_t horizon = 1;
    std::vector<Query> queries;

    ImpreciseMarkovChain chain() const;
    /// First query with the given command, if any.
    const Query* find_query(std::string_view command) const;
};

/// Throws ErrorCode::ParseError, ErrorCode::SchemaError, or the credal
/// validation code; messages name the offending JSON pointer.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const CredalModel& model);
nlohmann::json to_json(const UpperTransitionOperator& op);
nlohmann::json to_json(const Scenario& scenario);

CredalModel parse_model(const StateSpace& space, const nlohmann::json& node, const std::string& where);

} // namespace credalmc
