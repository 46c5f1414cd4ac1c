#include "credalmc/commands.hpp"

#include "credalmc/limit.hpp"
#include "credalmc/tree_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace credalmc {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view text) {
    const std::string s(trim(text));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == s.size() && !s.empty(), ErrorCode::InvalidArgument, "not a number: '" + s + "'");
    return v;
}

// Scenario queries store flags either as strings or as JSON arrays/objects.
std::string flag_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            out += v[i].is_string() ? v[i].get<std::string>() : v[i].dump();
        }
        return out;
    }
    if (v.is_object()) {
        std::string out;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!out.empty()) out += ',';
            out += it.key() + ":" + it.value().dump();
        }
        return out;
    }
    fail(ErrorCode::SchemaError, "unsupported query parameter " + v.dump());
}

template <class T>
void fill_number(std::optional<T>& slot, const json& params, const char* key) {
    if (slot || !params.contains(key)) return;
    const auto& v = params[key];
    require(v.is_number(), ErrorCode::SchemaError, std::string("query parameter '") + key + "' must be a number");
    slot = v.get<T>();
}

void fill_text(std::optional<std::string>& slot, const json& params, const char* key) {
    if (slot || !params.contains(key)) return;
    slot = flag_text(params[key]);
}

void fill_from_query(CommandOptions& o, const Scenario& scenario, const std::string& command) {
    const Query* q = scenario.find_query(command);
    if (q == nullptr) return;
    const auto& p = q->params;
    fill_text(o.event, p, "event");
    fill_text(o.gamble, p, "gamble");
    fill_text(o.path, p, "path");
    fill_number(o.length, p, "length");
    fill_number(o.tol, p, "tol");
    fill_number(o.max_iter, p, "max_iter");
    fill_number(o.n_max, p, "n_max");
    fill_number(o.seed, p, "seed");
    fill_number(o.samples, p, "samples");
}

const UpperTransitionOperator& stationary_operator(const Scenario& s, const char* command) {
    require(s.stationary, ErrorCode::InvalidArgument,
            std::string(command) + " needs a stationary scenario (a single 'transition')");
    return s.transitions.front();
}

std::string path_label(const StateSpace& space, std::span<const std::size_t> path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += '>';
        out += space.label(path[i]);
    }
    return out;
}

void row(std::ostream& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out << ',';
        out << c;
        first = false;
    }
    out << '\n';
}

void evolve(const Scenario& s, const CommandOptions& o, std::ostream& out) {
    const auto chain = s.chain();
    require(o.event || o.gamble, ErrorCode::InvalidArgument, "evolve needs --event or --gamble");
    const Gamble h = o.event ? Gamble::indicator(parse_event(s.space, *o.event)) : parse_gamble(s.space, *o.gamble);
    const auto trace = marginal_trace(chain, h);
    row(out, {"n", "lower", "upper"});
    for (std::size_t n = 1; n <= trace.size(); ++n) {
        row(out, {std::to_string(n), format_number(trace[n - 1].lower), format_number(trace[n - 1].upper)});
    }
}

void limit(const Scenario& s, const CommandOptions& o, std::ostream& out) {
    const auto& op = stationary_operator(s, "limit");
    require(o.gamble || o.event, ErrorCode::InvalidArgument, "limit needs --gamble or --event");
    const Gamble h = o.gamble ? parse_gamble(s.space, *o.gamble) : Gamble::indicator(parse_event(s.space, *o.event));
    const auto r = limit_upper(op, h, o.tol.value_or(kDefaultLimitTolerance), o.max_iter.value_or(kDefaultMaxIterations));
    row(out, {"value", "iterations", "residual"});
    row(out, {format_number(r.value), std::to_string(r.iterations), format_number(r.residual)});
}

void regularity(const Scenario& s, const CommandOptions& o, std::ostream& out) {
    const auto& op = stationary_operator(s, "regularity");
    const auto v = is_regular(op, o.n_max);
    row(out, {"status", "n"});
    row(out, {v.found ? "found" : "not_found", std::to_string(v.n)});
}

void joint(const Scenario& s, const CommandOptions& o, std::ostream& out) {
    const auto chain = s.chain();
    row(out, {"path", "lower", "upper"});
    auto emit = [&](std::span<const std::size_t> path) {
        const auto b = path_mass_bounds(chain, path);
        row(out, {path_label(s.space, path), format_number(b.lower), format_number(b.upper)});
    };
    if (o.path) {
        emit(parse_path(s.space, *o.path));
        return;
    }
    const std::size_t m = o.length.value_or(chain.horizon());
    require(m >= 1 && m <= chain.horizon(), ErrorCode::InvalidArgument,
            "--length must lie in [1, horizon = " + std::to_string(chain.horizon()) + "]");
    const std::size_t count = path_count(s.space, m);
    for (std::size_t i = 0; i < count; ++i) emit(decode_path(i, s.space.size(), m));
}

void credal_approx(const Scenario& s, const CommandOptions&, std::ostream& out) {
    const auto chain = s.chain();
    std::vector<std::vector<Bounds>> traces;
    for (std::size_t x = 0; x < s.space.size(); ++x) traces.push_back(marginal_trace(chain, Gamble::indicator(s.space, x)));
    row(out, {"n", "state", "lower", "upper"});
    for (std::size_t n = 1; n <= chain.horizon(); ++n) {
        for (std::size_t x = 0; x < s.space.size(); ++x) {
            const auto& b = traces[x][n - 1];
            row(out, {std::to_string(n), s.space.label(x), format_number(b.lower), format_number(b.upper)});
        }
    }
}

int verify(const Scenario& s, const CommandOptions& o, std::ostream& out) {
    const auto chain = s.chain();
    const std::size_t N = chain.horizon();
    const double tol = o.tol.value_or(1e-10);
    // Refuse before building any tables when the enumeration is out of reach.
    count_assignments(chain, N);

    std::vector<PathGamble> fs;
    std::vector<std::string> names;
    for (std::size_t m = 1; m <= N; ++m) {
        const std::size_t count = path_count(s.space, m);
        for (std::size_t i = 0; i < count; ++i) {
            const auto path = decode_path(i, s.space.size(), m);
            fs.push_back(PathGamble::path_indicator(s.space, N, path));
            names.push_back("I[" + path_label(s.space, path) + "]");
        }
    }
    std::mt19937_64 rng(o.seed.value_or(1));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t samples = o.samples.value_or(20);
    const std::size_t table = path_count(s.space, N);
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<double> values(table);
        for (auto& v : values) v = unit(rng);
        fs.emplace_back(s.space, N, std::move(values));
        names.push_back("f" + std::to_string(k + 1));
    }

    double worst = 0.0;
    row(out, {"query", "engine", "oracle", "gap"});
    auto compare = [&](const std::string& name, double engine, double oracle) {
        const double gap = std::abs(engine - oracle);
        worst = std::max(worst, gap);
        row(out, {name, format_number(engine), format_number(oracle), format_number(gap)});
    };

    const auto env = envelope(chain, fs);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        compare("upper " + names[i], joint_upper(chain, fs[i]), env[i].upper);
        compare("lower " + names[i], joint_lower(chain, fs[i]), env[i].lower);
    }
    if (N >= 2) {
        // Conditional envelopes given each initial state, random gambles only.
        const std::span<const PathGamble> sampled(fs.data() + (fs.size() - samples), samples);
        for (std::size_t x = 0; x < s.space.size(); ++x) {
            const std::vector<std::size_t> history{x};
            const auto given = envelope_given(chain, history, sampled);
            for (std::size_t k = 0; k < samples; ++k) {
                const auto& name = names[fs.size() - samples + k];
                compare("upper " + name + "|" + s.space.label(x), joint_upper_given(chain, history, sampled[k]),
                        given[k].upper);
                compare("lower " + name + "|" + s.space.label(x), joint_lower_given(chain, history, sampled[k]),
                        given[k].lower);
            }
        }
    }
    row(out, {"max_gap", "", "", format_number(worst)});
    return worst <= tol ? 0 : 1;
}

} // namespace

Gamble parse_gamble(const StateSpace& space, std::string_view text) {
    std::vector<double> values(space.size(), 0.0);
    std::vector<bool> seen(space.size(), false);
    for (auto part : split(text, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        const auto colon = part.rfind(':');
        require(colon != std::string_view::npos, ErrorCode::InvalidArgument,
                "gamble entries are label:value, got '" + std::string(part) + "'");
        const auto x = space.index_of(trim(part.substr(0, colon)));
        require(!seen[x], ErrorCode::InvalidArgument, "state '" + space.label(x) + "' given twice");
        seen[x] = true;
        values[x] = parse_double(part.substr(colon + 1));
    }
    return Gamble(space, std::move(values));
}

Event parse_event(const StateSpace& space, std::string_view text) {
    std::vector<bool> members(space.size(), false);
    for (auto part : split(text, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        members[space.index_of(part)] = true;
    }
    return Event(space, std::move(members));
}

std::vector<std::size_t> parse_path(const StateSpace& space, std::string_view text) {
    std::vector<std::size_t> path;
    for (auto part : split(text, ',')) path.push_back(space.index_of(trim(part)));
    return path;
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0; // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

int run_command(const std::string& command, const Scenario& scenario, CommandOptions options, std::ostream& out) {
    fill_from_query(options, scenario, command);
    if (command == "evolve") {
        evolve(scenario, options, out);
    } else if (command == "limit") {
        limit(scenario, options, out);
    } else if (command == "regularity") {
        regularity(scenario, options, out);
    } else if (command == "joint") {
        joint(scenario, options, out);
    } else if (command == "credal-approx") {
        credal_approx(scenario, options, out);
    } else if (command == "verify") {
        return verify(scenario, options, out);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
    }
    return 0;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotRegular:
    case ErrorCode::NonConvergence:
    case ErrorCode::NoCycleFound:
        return 3;
    case ErrorCode::SizeGuardExceeded:
        return 4;
    case ErrorCode::IncompleteAssignment:
        return 5;
    default:
        return 2;
    }
}

} // namespace credalmc
