#include "dynnull/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dynnull/errors.hpp"

namespace dynnull {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ValidationError(where.empty() ? key : where + "." + key, "unknown key");
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

const json& require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where, "expected an object");
    return j;
}

const json& require_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where, "expected an array");
    return j;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ValidationError(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ValidationError(where, "must be finite");
    return x;
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) throw ValidationError(where, "expected a string");
    return j.get<std::string>();
}

std::size_t species_index(const SystemSpec& spec, const std::string& name, const std::string& where) {
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (spec.species_names[i] == name) return i;
    throw ValidationError(where, "unknown species '" + name + "'");
}

ParamTarget parse_param_target(const SystemSpec& spec, const std::string& s, const std::string& where) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw ValidationError(where, "parameter target must look like r:<name>, K:<name> or gamma:<a>-><b>");
    const std::string kind = s.substr(0, colon);
    const std::string rest = s.substr(colon + 1);
    if (kind == "r") return ParamTarget::growth_rate(species_index(spec, rest, where));
    if (kind == "K") return ParamTarget::capacity(species_index(spec, rest, where));
    if (kind == "gamma") {
        const auto arrow = rest.find("->");
        if (arrow == std::string::npos) throw ValidationError(where, "gamma target needs '<from>-><to>'");
        const std::size_t i = species_index(spec, rest.substr(0, arrow), where);
        const std::size_t j = species_index(spec, rest.substr(arrow + 2), where);
        if (i == j) throw ValidationError(where, "gamma diagonal is fixed at 1");
        return ParamTarget::interaction(i, j);
    }
    throw ValidationError(where, "unknown parameter kind '" + kind + "'");
}

SystemSpec parse_system(const json& sys) {
    require_object(sys, "system");
    reject_unknown_keys(sys, "system", {"species", "gamma"});

    const json& species = require_array(require(sys, "system", "species"), "system.species");
    if (species.empty()) throw ValidationError("system.species", "needs at least one species");

    SystemSpec spec;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < species.size(); ++i) {
        const std::string where = fmt::format("system.species[{}]", i);
        const json& s = require_object(species[i], where);
        reject_unknown_keys(s, where, {"name", "r", "K"});
        std::string name = text(require(s, where, "name"), where + ".name");
        if (name.empty()) throw ValidationError(where + ".name", "must not be empty");
        if (!seen.insert(name).second) throw ValidationError(where + ".name", "duplicate species '" + name + "'");
        const double r = number(require(s, where, "r"), where + ".r");
        const double k = number(require(s, where, "K"), where + ".K");
        if (r < 0.0) throw ValidationError(where + ".r", "must be >= 0");
        if (k <= 0.0) throw ValidationError(where + ".K", "must be > 0");
        spec.species_names.push_back(std::move(name));
        spec.growth_rate.push_back(r);
        spec.capacity.push_back(k);
    }
    spec.gamma = InteractionMatrix(spec.size());

    if (auto it = sys.find("gamma"); it != sys.end()) {
        require_array(*it, "system.gamma");
        std::set<std::pair<std::size_t, std::size_t>> assigned;
        for (std::size_t e = 0; e < it->size(); ++e) {
            const std::string where = fmt::format("system.gamma[{}]", e);
            const json& g = require_object((*it)[e], where);
            reject_unknown_keys(g, where, {"from", "to", "value"});
            const std::size_t i = species_index(spec, text(require(g, where, "from"), where + ".from"), where + ".from");
            const std::size_t j = species_index(spec, text(require(g, where, "to"), where + ".to"), where + ".to");
            if (i == j) throw ValidationError(where, "self-interaction is fixed at 1 and cannot be set");
            if (!assigned.insert({i, j}).second) throw ValidationError(where, "duplicate gamma entry");
            spec.gamma.set(i, j, number(require(g, where, "value"), where + ".value"));
        }
    }
    return spec;
}

Intervention parse_intervention(const SystemSpec& spec, const json& j, const std::string& where) {
    require_object(j, where);
    reject_unknown_keys(j, where, {"time", "action", "target", "value"});
    Intervention iv;
    iv.time = number(require(j, where, "time"), where + ".time");
    const std::string action = text(require(j, where, "action"), where + ".action");
    const std::string target = text(require(j, where, "target"), where + ".target");
    const double value = number(require(j, where, "value"), where + ".value");

    if (action == "set_state") {
        iv.action = SetState{species_index(spec, target, where + ".target"), value};
    } else if (action == "scale_state") {
        iv.action = ScaleState{species_index(spec, target, where + ".target"), value};
    } else if (action == "set_param") {
        iv.action = SetParam{parse_param_target(spec, target, where + ".target"), value};
    } else {
        throw ValidationError(where + ".action", "expected set_state, scale_state or set_param");
    }
    try {
        validate_action(iv.action, spec.size());
    } catch (const ActionError& e) {
        throw ValidationError(where, e.what());
    }
    return iv;
}

ClassifierOverrides parse_classifier(const json& j) {
    require_object(j, "classifier");
    reject_unknown_keys(j, "classifier",
                        {"residual_tol", "delta_tol", "epsilon_eq", "delta_search_range", "refine_iterations",
                         "match_tol"});
    ClassifierOverrides out;
    auto positive = [&](const char* key, std::optional<double>& slot) {
        if (auto it = j.find(key); it != j.end()) {
            const std::string where = std::string("classifier.") + key;
            const double x = number(*it, where);
            if (x <= 0.0) throw ValidationError(where, "must be > 0");
            slot = x;
        }
    };
    positive("residual_tol", out.residual_tol);
    positive("delta_tol", out.delta_tol);
    positive("epsilon_eq", out.epsilon_eq);
    positive("delta_search_range", out.delta_search_range);
    positive("match_tol", out.match_tol);
    if (auto it = j.find("refine_iterations"); it != j.end()) {
        if (!it->is_number_integer() || it->get<long long>() <= 0)
            throw ValidationError("classifier.refine_iterations", "must be a positive integer");
        out.refine_iterations = it->get<int>();
    }
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

/// Replays the text to find where an overflowing number sits; the DOM
/// parser only reports the token.
class NumberPathFinder : public nlohmann::json_sax<json> {
public:
    std::string path;

    bool null() override { return advance(); }
    bool boolean(bool) override { return advance(); }
    bool number_integer(number_integer_t) override { return advance(); }
    bool number_unsigned(number_unsigned_t) override { return advance(); }
    bool number_float(number_float_t, const string_t&) override { return advance(); }
    bool string(string_t&) override { return advance(); }
    bool binary(binary_t&) override { return advance(); }
    bool start_object(std::size_t) override { return open(false); }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override { return open(true); }
    bool end_array() override { return close(); }
    bool key(string_t& k) override {
        frames_.back().key = k;
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
        path.clear();
        for (const auto& f : frames_) {
            if (f.array)
                path += fmt::format("[{}]", f.index);
            else
                path += (path.empty() ? "" : ".") + f.key;
        }
        return false;
    }

private:
    struct Frame {
        bool array = false;
        std::size_t index = 0;
        std::string key;
    };
    std::vector<Frame> frames_;

    bool advance() {
        if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
        return true;
    }
    bool open(bool array) {
        frames_.push_back({array, 0, {}});
        return true;
    }
    bool close() {
        frames_.pop_back();
        return advance();
    }
};

}  // namespace

ScenarioDocument parse_scenario(std::string_view input) {
    json root;
    try {
        root = json::parse(input.begin(), input.end());
    } catch (const json::parse_error& e) {
        // The reported byte is one past the offending character.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        auto [line, column] = line_column(input, at);
        throw ParseError(line, column, e.what());
    } catch (const json::out_of_range&) {
        // Only number overflow gets here: the literal is not a finite double.
        NumberPathFinder finder;
        json::sax_parse(input.begin(), input.end(), &finder);
        throw ValidationError(finder.path.empty() ? "<root>" : finder.path, "must be finite");
    }

    require_object(root, "<root>");
    reject_unknown_keys(root, "",
                        {"schema_version", "system", "init", "horizon", "step", "interventions", "classifier",
                         "measure_times"});

    const json& version = require(root, "", "schema_version");
    if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion)
        throw ValidationError("schema_version", fmt::format("must be {}", kSchemaVersion));

    ScenarioDocument doc;
    Scenario& sc = doc.scenario;
    sc.spec = parse_system(require(root, "", "system"));

    const json& init = require_object(require(root, "", "init"), "init");
    sc.init.t = 0.0;
    sc.init.v.assign(sc.spec.size(), 0.0);
    std::vector<bool> given(sc.spec.size(), false);
    for (const auto& [name, value] : init.items()) {
        const std::size_t i = species_index(sc.spec, name, "init." + name);
        const double v = number(value, "init." + name);
        if (v < 0.0) throw ValidationError("init." + name, "must be >= 0");
        sc.init.v[i] = v;
        given[i] = true;
    }
    for (std::size_t i = 0; i < given.size(); ++i)
        if (!given[i]) throw ValidationError("init." + sc.spec.species_names[i], "missing");

    sc.horizon = number(require(root, "", "horizon"), "horizon");
    if (sc.horizon <= 0.0) throw ValidationError("horizon", "must be > 0");
    sc.step = kDefaultStep;
    if (auto it = root.find("step"); it != root.end()) {
        sc.step = number(*it, "step");
        if (sc.step <= 0.0) throw ValidationError("step", "must be > 0");
    }
    if (step_count(sc.horizon, sc.step) < 1) throw ValidationError("horizon", "shorter than one step");

    if (auto it = root.find("interventions"); it != root.end()) {
        require_array(*it, "interventions");
        for (std::size_t k = 0; k < it->size(); ++k)
            sc.interventions.push_back(parse_intervention(sc.spec, (*it)[k], fmt::format("interventions[{}]", k)));
    }
    if (auto it = root.find("classifier"); it != root.end()) doc.classifier = parse_classifier(*it);
    if (auto it = root.find("measure_times"); it != root.end()) {
        require_array(*it, "measure_times");
        std::vector<double> times;
        for (std::size_t k = 0; k < it->size(); ++k)
            times.push_back(number((*it)[k], fmt::format("measure_times[{}]", k)));
        doc.measure_times = std::move(times);
    }

    try {
        validate(sc);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError("interventions", e.what());
    }
    return doc;
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path.string(), "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string format_param_target(const ParamTarget& target, const SystemSpec& spec) {
    const auto& names = spec.species_names;
    switch (target.kind) {
        case ParamKind::growth_rate: return "r:" + names.at(target.row);
        case ParamKind::capacity: return "K:" + names.at(target.row);
        case ParamKind::interaction: return "gamma:" + names.at(target.row) + "->" + names.at(target.col);
    }
    return {};
}

std::string emit_scenario(const ScenarioDocument& doc) {
    const Scenario& sc = doc.scenario;
    const SystemSpec& spec = sc.spec;

    ojson species = ojson::array();
    for (std::size_t i = 0; i < spec.size(); ++i)
        species.push_back({{"name", spec.species_names[i]}, {"r", spec.growth_rate[i]}, {"K", spec.capacity[i]}});
    ojson gamma = ojson::array();
    for (std::size_t i = 0; i < spec.size(); ++i)
        for (std::size_t j = 0; j < spec.size(); ++j)
            if (i != j && spec.gamma(i, j) != 0.0)
                gamma.push_back({{"from", spec.species_names[i]}, {"to", spec.species_names[j]},
                                 {"value", spec.gamma(i, j)}});

    ojson init = ojson::object();
    for (std::size_t i = 0; i < spec.size(); ++i) init[spec.species_names[i]] = sc.init.v[i];

    ojson interventions = ojson::array();
    for (const auto& iv : sc.interventions) {
        ojson j;
        j["time"] = iv.time;
        if (const auto* a = std::get_if<SetState>(&iv.action)) {
            j["action"] = "set_state";
            j["target"] = spec.species_names[a->species];
            j["value"] = a->value;
        } else if (const auto* a = std::get_if<ScaleState>(&iv.action)) {
            j["action"] = "scale_state";
            j["target"] = spec.species_names[a->species];
            j["value"] = a->factor;
        } else {
            const auto& p = std::get<SetParam>(iv.action);
            j["action"] = "set_param";
            j["target"] = format_param_target(p.target, spec);
            j["value"] = p.value;
        }
        interventions.push_back(std::move(j));
    }

    ojson root;
    root["schema_version"] = kSchemaVersion;
    root["system"] = {{"species", std::move(species)}, {"gamma", std::move(gamma)}};
    root["init"] = std::move(init);
    root["horizon"] = sc.horizon;
    root["step"] = sc.step;
    root["interventions"] = std::move(interventions);

    const auto& c = doc.classifier;
    if (c != ClassifierOverrides{}) {
        ojson cls = ojson::object();
        if (c.residual_tol) cls["residual_tol"] = *c.residual_tol;
        if (c.delta_tol) cls["delta_tol"] = *c.delta_tol;
        if (c.epsilon_eq) cls["epsilon_eq"] = *c.epsilon_eq;
        if (c.delta_search_range) cls["delta_search_range"] = *c.delta_search_range;
        if (c.refine_iterations) cls["refine_iterations"] = *c.refine_iterations;
        if (c.match_tol) cls["match_tol"] = *c.match_tol;
        root["classifier"] = std::move(cls);
    }
    if (doc.measure_times) root["measure_times"] = *doc.measure_times;
    return root.dump(2) + "\n";
}

ClassifierConfig resolve_classifier(const ScenarioDocument& doc) {
    ClassifierConfig cfg = default_config(doc.scenario.step, doc.scenario.horizon);
    const auto& c = doc.classifier;
    if (c.residual_tol) cfg.residual_tol = *c.residual_tol;
    if (c.delta_tol) cfg.delta_tol = *c.delta_tol;
    if (c.epsilon_eq) cfg.epsilon_eq = *c.epsilon_eq;
    if (c.delta_search_range) cfg.delta_search_range = *c.delta_search_range;
    if (c.refine_iterations) cfg.refine_iterations = *c.refine_iterations;
    if (c.match_tol) cfg.match_tol = *c.match_tol;
    return cfg;
}

std::vector<double> resolve_measure_times(const ScenarioDocument& doc) {
    if (doc.measure_times) return *doc.measure_times;
    const Scenario& sc = doc.scenario;
    const std::size_t steps = step_count(sc.horizon, sc.step);
    std::vector<double> times;
    for (std::size_t k = 0; k <= 10; ++k) {
        const auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(steps * k) / 10.0));
        if (!times.empty() && sc.init.t + static_cast<double>(idx) * sc.step <= times.back()) continue;
        times.push_back(sc.init.t + static_cast<double>(idx) * sc.step);
    }
    return times;
}

}  // namespace dynnull
