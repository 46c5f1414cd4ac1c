#include "credalmc/commands.hpp"
#include "credalmc/scenario.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <sstream>

using namespace credalmc;
using nlohmann::json;
using doctest::Approx;

#ifndef CREDALMC_SCENARIO_DIR
#error "CREDALMC_SCENARIO_DIR must point at the bundled scenarios"
#endif

namespace {

std::string bundled(const char* name) { return std::string(CREDALMC_SCENARIO_DIR) + "/" + name; }

json minimal() {
    return json::parse(R"({
        "states": ["a", "b"],
        "horizon": 3,
        "initial": {"type": "vacuous"},
        "transition": {"type": "precise", "matrix": [[0.5, 0.5], [0.2, 0.8]]}
    })");
}

Error error_of(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an error");
    return Error(ErrorCode::InvalidArgument, "");
}

std::string run(const std::string& command, const Scenario& s, CommandOptions o = {}) {
    std::ostringstream out;
    run_command(command, s, o, out);
    return out.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("bundled example 5.3") {
    const auto s = load_scenario(bundled("example_5_3.json"));
    const auto& b = std::get<ProbInterval>(s.initial.spec());
    CHECK(b.lower == std::vector<double>{0.6, 0.1});
    CHECK(b.upper == std::vector<double>{0.9, 0.4});
    CHECK(s.stationary);
    CHECK(s.transitions.front().row(0).kind() == "contamination");
    CHECK(s.transitions.front().row(1).kind() == "contamination");
    CHECK(upper(s.transitions.front().row(0), Gamble::indicator(s.space, 0)) == Approx(0.235).epsilon(1e-15));
}

TEST_CASE("bundled example 5.4 matches the two matrices") {
    const auto s = load_scenario(bundled("example_5_4.json"));
    const double lo[3][3] = {{9, 9, 162}, {144, 18, 18}, {9, 162, 9}};
    const double up[3][3] = {{19, 19, 172}, {154, 28, 28}, {19, 172, 19}};
    for (std::size_t x = 0; x < 3; ++x) {
        const auto& r = std::get<ProbInterval>(s.transitions.front().row(x).spec());
        for (std::size_t y = 0; y < 3; ++y) {
            CHECK(r.lower[y] == Approx(lo[x][y] / 200).epsilon(1e-15));
            CHECK(r.upper[y] == Approx(up[x][y] / 200).epsilon(1e-15));
        }
    }
}

TEST_CASE("all bundled scenarios load") {
    for (const char* name : {"example_5_1.json", "example_5_2.json", "example_5_3.json", "example_5_3_n2.json",
                             "example_5_4.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_scenario(bundled(name)));
    }
}

TEST_CASE("schema errors name the offending path") {
    auto doc = minimal();
    doc["initial"]["type"] = "frobnitz";
    auto e = error_of(doc);
    CHECK(e.code() == ErrorCode::SchemaError);
    CHECK(std::string(e.what()).find("/initial/type") != std::string::npos);

    doc = minimal();
    doc["transition"]["matrix"][1] = json::array({0.2});
    e = error_of(doc);
    CHECK(e.code() == ErrorCode::SchemaError);
    CHECK(std::string(e.what()).find("/transition/matrix/1") != std::string::npos);

    doc = minimal();
    doc["initial"] = json::parse(R"({"type": "interval", "lower": [0.6, 0.6], "upper": [0.9, 0.9]})");
    e = error_of(doc);
    CHECK(e.code() == ErrorCode::EmptyCredalSet);
    CHECK(std::string(e.what()).find("/initial") != std::string::npos);

    doc = minimal();
    doc["initial"] = json::parse(R"({"type": "belief", "focal": [{"states": ["a", "z"], "mass": 1}]})");
    e = error_of(doc);
    CHECK(e.code() == ErrorCode::UnknownState);
    CHECK(std::string(e.what()).find("/initial/focal/0/states/1") != std::string::npos);

    doc = minimal();
    doc.erase("horizon");
    CHECK(error_of(doc).code() == ErrorCode::SchemaError);

    doc = minimal();
    doc["transitions"] = json::array();
    CHECK(error_of(doc).code() == ErrorCode::SchemaError);

    doc = minimal();
    doc["transition"] = json::parse(R"({"type": "contamination", "matrix": [[1,0],[0,1]], "epsilon": 2})");
    CHECK(error_of(doc).code() == ErrorCode::EpsilonOutOfRange);

    CHECK_THROWS_AS(load_scenario(bundled("does_not_exist.json")), Error);
}

TEST_CASE("per-step transitions") {
    auto doc = minimal();
    doc.erase("transition");
    doc["transitions"] = json::parse(R"([
        {"type": "precise", "matrix": [[0, 1], [1, 0]]},
        {"rows": [{"type": "vacuous"}, {"type": "linear", "mass": [1, 0]}]}
    ])");
    const auto s = parse_scenario(doc);
    CHECK_FALSE(s.stationary);
    const auto c = s.chain();
    CHECK(c.horizon() == 3);
    CHECK(c.transition(2).row(1).is_linear());
    doc["horizon"] = 4;
    CHECK(error_of(doc).code() == ErrorCode::SchemaError);
}

TEST_CASE("property: serialization round trip") {
    gen::Rng rng(41);
    for (int i = 0; i < 200; ++i) {
        const auto c = gen::chain(rng, {4, 4, 0});
        Scenario s{c.space(), c.initial(), c.operators(), c.is_stationary(), c.horizon(), {}};
        const auto text = to_json(s).dump();
        const auto back = parse_scenario(json::parse(text)).chain();
        for (int k = 0; k < 5; ++k) {
            const auto h = gen::gamble(rng, c.space());
            const std::size_t n = 1 + gen::pick(rng, c.horizon());
            CHECK(std::abs(marginal_upper(c, n, h) - marginal_upper(back, n, h)) <= 1e-12);
        }
    }
}

TEST_CASE("flag parsing") {
    const StateSpace abc{"a", "b", "c"};
    const auto g = parse_gamble(abc, "a:1, c:-0.5");
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == -0.5);
    CHECK_THROWS_AS(parse_gamble(abc, "a:1,a:2"), Error);
    CHECK_THROWS_AS(parse_gamble(abc, "a=1"), Error);
    CHECK_THROWS_AS(parse_gamble(abc, "a:x"), Error);
    CHECK_THROWS_AS(parse_gamble(abc, "q:1"), Error);
    CHECK(parse_event(abc, "a,c").count() == 2);
    CHECK(parse_path(abc, "c,a") == std::vector<std::size_t>{2, 0});
    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 3) == "0.333333333333");
}

TEST_CASE("command outputs") {
    const auto s = load_scenario(bundled("example_5_3.json"));
    CommandOptions ev;
    ev.event = "a";
    auto out = lines(run("evolve", s, ev));
    REQUIRE(out.size() == 41);
    CHECK(out[0] == "n,lower,upper");
    CHECK(out[1] == "1,0.6,0.9");
    CHECK(out[2] == "2,0.198,0.487");

    CommandOptions lim;
    lim.gamble = "a:1,b:0";
    out = lines(run("limit", s, lim));
    CHECK(out[0] == "value,iterations,residual");
    CHECK(std::abs(std::stod(out[1].substr(0, out[1].find(','))) - 0.635135135) <= 1e-6);

    // Defaults come from the scenario's own queries.
    CHECK(run("limit", s) == run("limit", s, lim));
    CHECK(run("evolve", s) == run("evolve", s, ev));

    CommandOptions path;
    path.path = "a,a";
    out = lines(run("joint", load_scenario(bundled("example_5_3_n2.json")), path));
    CHECK(out[1] == "a>a,0.081,0.2115");

    out = lines(run("regularity", load_scenario(bundled("example_5_1.json"))));
    CHECK(out[1] == "found,1");

    const auto s4 = load_scenario(bundled("example_5_4.json"));
    out = lines(run("credal-approx", s4));
    CHECK(out.size() == 1 + 3 * 60);
    CHECK(out[0] == "n,state,lower,upper");
    CHECK(out[1] == "1,a,0.4,0.7");

    const auto n2 = load_scenario(bundled("example_5_3_n2.json"));
    std::ostringstream vout;
    CHECK(run_command("verify", n2, {}, vout) == 0);
    const auto v = lines(vout.str());
    CHECK(v.back().rfind("max_gap,,,", 0) == 0);
    CHECK(std::stod(v.back().substr(10)) <= 1e-10);

    CHECK(run("credal-approx", s4) == run("credal-approx", s4));
    CHECK_THROWS_AS(run("frobnicate", s), Error);
    CHECK_THROWS_AS(run("verify", s), Error);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorCode::SchemaError) == 2);
    CHECK(exit_code_for(ErrorCode::NonConvergence) == 3);
    CHECK(exit_code_for(ErrorCode::SizeGuardExceeded) == 4);
}
