// credalmc: run a query against a scenario file and print CSV.
//
//   credalmc evolve scenarios/example_5_3.json --event a
//   credalmc limit scenarios/example_5_3.json --gamble a:1,b:0

#include "credalmc/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"Lower and upper expectations for imprecise Markov chains"};
    app.require_subcommand(1);

    credalmc::CommandOptions options;
    std::string scenario_path;
    std::string chosen;

    const std::map<std::string, std::string> help{
        {"evolve", "Marginal bounds of an event or gamble for n = 1..horizon"},
        {"limit", "Invariant upper expectation of a gamble (stationary scenarios)"},
        {"regularity", "Smallest n with every upper n-step probability positive"},
        {"joint", "Lower and upper probabilities of state paths"},
        {"credal-approx", "Singleton bounds per time step (outer approximation of the marginal sets)"},
        {"verify", "Compare the recursion against brute-force tree enumeration"},
    };
    for (const auto& name : credalmc::command_names()) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        if (name == "evolve" || name == "limit") {
            sub->add_option("--event", options.event, "Comma separated state labels");
            sub->add_option("--gamble", options.gamble, "label:value pairs, missing labels are 0");
        }
        if (name == "limit" || name == "verify") sub->add_option("--tol", options.tol, "Tolerance");
        if (name == "limit") sub->add_option("--max-iter", options.max_iter, "Iteration cap");
        if (name == "regularity") sub->add_option("--n-max", options.n_max, "Search bound, default (|X|-1)^2+1");
        if (name == "joint") {
            sub->add_option("--path", options.path, "Comma separated labels x1,x2,...");
            sub->add_option("--length", options.length, "Emit every path of this length (default horizon)");
        }
        if (name == "verify") {
            sub->add_option("--seed", options.seed, "RNG seed for the sampled gambles");
            sub->add_option("--samples", options.samples, "Number of random path gambles");
        }
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto scenario = credalmc::load_scenario(scenario_path);
        return credalmc::run_command(chosen, scenario, options, std::cout);
    } catch (const credalmc::Error& e) {
        std::cerr << "error: " << credalmc::code_name(e.code()) << ": " << e.what() << '\n';
        return credalmc::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 5;
    }
}
