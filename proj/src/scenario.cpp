#include "credalmc/scenario.hpp"

#include <fstream>
#include <sstream>

namespace credalmc {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
    fail(ErrorCode::SchemaError, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& member(const json& node, const std::string& where, const char* key) {
    if (!node.is_object()) schema(where, "expected an object");
    auto it = node.find(key);
    if (it == node.end()) schema(where + "/" + key, "missing required field");
    return *it;
}

double number(const json& node, const std::string& where) {
    if (!node.is_number()) schema(where, "expected a number");
    return node.get<double>();
}

std::vector<double> numbers(const json& node, const std::string& where, double scale) {
    if (!node.is_array()) schema(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], where + "/" + std::to_string(i)) / scale);
    return out;
}

std::vector<double> vector_of(const StateSpace& space, const json& node, const std::string& where, double scale) {
    auto v = numbers(node, where, scale);
    if (v.size() != space.size()) {
        schema(where, "expected " + std::to_string(space.size()) + " entries, got " + std::to_string(v.size()));
    }
    return v;
}

Matrix matrix_of(const StateSpace& space, const json& node, const std::string& where, double scale) {
    if (!node.is_array() || node.size() != space.size()) {
        schema(where, "expected a " + std::to_string(space.size()) + "x" + std::to_string(space.size()) + " matrix");
    }
    Matrix m;
    for (std::size_t i = 0; i < node.size(); ++i) m.push_back(vector_of(space, node[i], where + "/" + std::to_string(i), scale));
    return m;
}

double denominator(const json& node, const std::string& where) {
    auto it = node.find("denominator");
    if (it == node.end()) return 1.0;
    const double d = number(*it, where + "/denominator");
    if (!(d > 0.0)) schema(where + "/denominator", "must be positive");
    return d;
}

std::string type_of(const json& node, const std::string& where) {
    const auto& t = member(node, where, "type");
    if (!t.is_string()) schema(where + "/type", "expected a string");
    return t.get<std::string>();
}

// Re-throws construction failures with the JSON location attached.
template <class F>
auto located(const std::string& where, F&& make) -> decltype(make()) {
    try {
        return make();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError) throw;
        throw Error(e.code(), (where.empty() ? std::string("/") : where) + ": " + e.what());
    }
}

MassFunction mass_of(const StateSpace& space, const json& node, const std::string& where, double scale) {
    auto w = vector_of(space, node, where, scale);
    return located(where, [&] { return MassFunction(space, std::move(w)); });
}

UpperTransitionOperator parse_transition(const StateSpace& space, const json& node, const std::string& where) {
    if (!node.is_object()) schema(where, "expected an object");
    if (node.contains("rows")) {
        const auto& rows = node["rows"];
        if (!rows.is_array() || rows.size() != space.size()) {
            schema(where + "/rows", "expected one model per state (" + std::to_string(space.size()) + ")");
        }
        std::vector<CredalModel> models;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            models.push_back(parse_model(space, rows[i], where + "/rows/" + std::to_string(i)));
        }
        return located(where, [&] { return UpperTransitionOperator(space, std::move(models)); });
    }
    const auto type = type_of(node, where);
    const double scale = denominator(node, where);
    if (type == "precise") {
        auto m = matrix_of(space, member(node, where, "matrix"), where + "/matrix", scale);
        return located(where, [&] { return UpperTransitionOperator::precise(space, m); });
    }
    if (type == "contamination") {
        auto m = matrix_of(space, member(node, where, "matrix"), where + "/matrix", scale);
        const double eps = number(member(node, where, "epsilon"), where + "/epsilon");
        return located(where, [&] { return UpperTransitionOperator::contaminated(space, m, eps); });
    }
    if (type == "interval") {
        auto lo = matrix_of(space, member(node, where, "lower"), where + "/lower", scale);
        auto up = matrix_of(space, member(node, where, "upper"), where + "/upper", scale);
        return located(where, [&] { return UpperTransitionOperator::interval(space, lo, up); });
    }
    schema(where + "/type", "unknown transition type '" + type + "'");
}

json weights_json(std::span<const double> w) { return json(std::vector<double>(w.begin(), w.end())); }

} // namespace

CredalModel parse_model(const StateSpace& space, const json& node, const std::string& where) {
    const auto type = type_of(node, where);
    const double scale = denominator(node, where);
    if (type == "linear") {
        auto m = mass_of(space, member(node, where, "mass"), where + "/mass", scale);
        return CredalModel::linear(std::move(m));
    }
    if (type == "vacuous") return CredalModel::vacuous(space);
    if (type == "vertices") {
        const auto& list = member(node, where, "vertices");
        if (!list.is_array()) schema(where + "/vertices", "expected an array of mass functions");
        std::vector<MassFunction> vs;
        for (std::size_t i = 0; i < list.size(); ++i) {
            vs.push_back(mass_of(space, list[i], where + "/vertices/" + std::to_string(i), scale));
        }
        return located(where, [&] { return CredalModel::vertex_set(space, std::move(vs)); });
    }
    if (type == "contamination") {
        auto base = mass_of(space, member(node, where, "base"), where + "/base", scale);
        const double eps = number(member(node, where, "epsilon"), where + "/epsilon");
        return located(where, [&] { return CredalModel::contamination(std::move(base), eps); });
    }
    if (type == "belief") {
        const auto& focal = member(node, where, "focal");
        if (!focal.is_array()) schema(where + "/focal", "expected an array of focal elements");
        std::vector<FocalElement> elements;
        for (std::size_t i = 0; i < focal.size(); ++i) {
            const std::string at = where + "/focal/" + std::to_string(i);
            const auto& states = member(focal[i], at, "states");
            if (!states.is_array()) schema(at + "/states", "expected an array of state labels");
            std::vector<bool> members(space.size(), false);
            for (std::size_t j = 0; j < states.size(); ++j) {
                const std::string sat = at + "/states/" + std::to_string(j);
                if (!states[j].is_string()) schema(sat, "expected a state label");
                members[located(sat, [&] { return space.index_of(states[j].get<std::string>()); })] = true;
            }
            const double mass = number(member(focal[i], at, "mass"), at + "/mass") / scale;
            elements.push_back({Event(space, std::move(members)), mass});
        }
        return located(where, [&] { return CredalModel::belief(space, std::move(elements)); });
    }
    if (type == "interval") {
        auto lo = vector_of(space, member(node, where, "lower"), where + "/lower", scale);
        auto up = vector_of(space, member(node, where, "upper"), where + "/upper", scale);
        return located(where, [&] { return CredalModel::interval(space, std::move(lo), std::move(up)); });
    }
    schema(where + "/type", "unknown model type '" + type + "'");
}

ImpreciseMarkovChain Scenario::chain() const {
    if (stationary) return ImpreciseMarkovChain(initial, transitions.front(), horizon);
    return ImpreciseMarkovChain(initial, transitions);
}

const Query* Scenario::find_query(std::string_view command) const {
    for (const auto& q : queries) {
        if (q.command == command) return &q;
    }
    return nullptr;
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) schema("", "scenario must be a JSON object");
    const auto& labels = member(doc, "", "states");
    if (!labels.is_array() || labels.empty()) schema("/states", "expected a nonempty array of state labels");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i].is_string()) schema("/states/" + std::to_string(i), "expected a string");
        names.push_back(labels[i].get<std::string>());
    }
    StateSpace space = located("/states", [&] { return StateSpace(std::move(names)); });

    const auto& h = member(doc, "", "horizon");
    if (!h.is_number_integer() || h.get<long long>() < 1) schema("/horizon", "expected a positive integer");
    const auto horizon = static_cast<std::size_t>(h.get<long long>());

    CredalModel initial = parse_model(space, member(doc, "", "initial"), "/initial");

    std::vector<UpperTransitionOperator> transitions;
    bool stationary = true;
    const bool has_one = doc.contains("transition");
    const bool has_many = doc.contains("transitions");
    if (has_one == has_many) schema("", "exactly one of 'transition' or 'transitions' is required");
    if (has_one) {
        transitions.push_back(parse_transition(space, doc["transition"], "/transition"));
    } else {
        stationary = false;
        const auto& list = doc["transitions"];
        if (!list.is_array()) schema("/transitions", "expected an array of transition models");
        if (list.size() + 1 != horizon) {
            schema("/transitions", "expected horizon - 1 = " + std::to_string(horizon - 1) + " transition models, got " +
                                       std::to_string(list.size()));
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            transitions.push_back(parse_transition(space, list[i], "/transitions/" + std::to_string(i)));
        }
    }

    std::vector<Query> queries;
    if (doc.contains("queries")) {
        const auto& qs = doc["queries"];
        if (!qs.is_array()) schema("/queries", "expected an array");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const std::string at = "/queries/" + std::to_string(i);
            const auto& cmd = member(qs[i], at, "command");
            if (!cmd.is_string()) schema(at + "/command", "expected a string");
            queries.push_back({cmd.get<std::string>(), qs[i]});
        }
    }

    return Scenario{std::move(space), std::move(initial), std::move(transitions), stationary, horizon,
                    std::move(queries)};
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open scenario file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

json to_json(const CredalModel& model) {
    const auto& space = model.space();
    json out;
    out["type"] = std::string(model.kind());
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Linear>) {
                out["mass"] = weights_json(spec.mass.weights());
            } else if constexpr (std::is_same_v<T, VertexSet>) {
                out["vertices"] = json::array();
                for (const auto& v : spec.vertices) out["vertices"].push_back(weights_json(v.weights()));
            } else if constexpr (std::is_same_v<T, Contamination>) {
                out["base"] = weights_json(spec.base.weights());
                out["epsilon"] = spec.epsilon;
            } else if constexpr (std::is_same_v<T, BeliefFunction>) {
                out["focal"] = json::array();
                for (const auto& f : spec.focal) {
                    json states = json::array();
                    for (std::size_t x = 0; x < space.size(); ++x) {
                        if (f.set.contains(x)) states.push_back(space.label(x));
                    }
                    out["focal"].push_back({{"states", states}, {"mass", f.mass}});
                }
            } else if constexpr (std::is_same_v<T, ProbInterval>) {
                out["lower"] = spec.lower;
                out["upper"] = spec.upper;
            }
        },
        model.spec());
    return out;
}

json to_json(const UpperTransitionOperator& op) {
    json rows = json::array();
    for (const auto& r : op.rows()) rows.push_back(to_json(r));
    return {{"rows", rows}};
}

json to_json(const Scenario& scenario) {
    json out;
    out["states"] = std::vector<std::string>(scenario.space.labels().begin(), scenario.space.labels().end());
    out["horizon"] = scenario.horizon;
    out["initial"] = to_json(scenario.initial);
    if (scenario.stationary) {
        out["transition"] = to_json(scenario.transitions.front());
    } else {
        out["transitions"] = json::array();
        for (const auto& t : scenario.transitions) out["transitions"].push_back(to_json(t));
    }
    if (!scenario.queries.empty()) {
        out["queries"] = json::array();
        for (const auto& q : scenario.queries) out["queries"].push_back(q.params);
    }
    return out;
}

} // namespace credalmc
