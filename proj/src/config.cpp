// SPDX-License-Identifier: Apache-2.0
#include "optionrace/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "optionrace/errors.hpp"
#include "optionrace/sweep.hpp"

namespace optionrace::cli {

using nlohmann::json;

namespace {

enum class Kind { Number, Integer, Bool, String, OptionalNumber };

struct KeyEntry {
    std::string name;
    Kind kind;
    std::function<json(const RunConfig&)> get;  // empty for write-only aliases
    std::function<void(RunConfig&, const json&)> set;
};

json number_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double json_to_number(const json& j, const std::string& key) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ConfigError("config key '" + key + "': expected a number, got " + j.dump());
}

std::uint64_t json_to_integer(const json& j, const std::string& key) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (d >= 0.0 && std::floor(d) == d && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError("config key '" + key + "': expected a nonnegative integer, got " + j.dump());
}

bool json_to_bool(const json& j, const std::string& key) {
    if (j.is_boolean()) return j.get<bool>();
    throw ConfigError("config key '" + key + "': expected true or false, got " + j.dump());
}

std::string json_to_string(const json& j, const std::string& key) {
    if (j.is_string()) return j.get<std::string>();
    throw ConfigError("config key '" + key + "': expected a string, got " + j.dump());
}

KeyEntry number_key(std::string name, std::function<double&(RunConfig&)> field) {
    return {name, Kind::Number,
            [field](const RunConfig& c) { return number_to_json(field(const_cast<RunConfig&>(c))); },
            [field, name](RunConfig& c, const json& j) { field(c) = json_to_number(j, name); }};
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(current);
            current.clear();
        } else if (ch != ' ') {
            current += ch;
        }
    }
    parts.push_back(current);
    parts.erase(std::remove(parts.begin(), parts.end(), std::string{}), parts.end());
    return parts;
}

const std::vector<KeyEntry>& key_table() {
    static const std::vector<KeyEntry> table = [] {
        std::vector<KeyEntry> t;
        t.push_back({"preset", Kind::String, [](const RunConfig& c) { return json(c.preset); },
                     [](RunConfig& c, const json& j) {
                         const auto name = json_to_string(j, "preset");
                         if (name.empty()) {
                             c.preset.clear();
                         } else {
                             c = preset(name);
                         }
                     }});
        t.push_back(number_key("r", [](RunConfig& c) -> double& { return c.params.r; }));
        t.push_back(number_key("delta", [](RunConfig& c) -> double& { return c.params.delta; }));
        t.push_back(number_key("sigma", [](RunConfig& c) -> double& { return c.params.sigma; }));
        t.push_back(number_key("gamma", [](RunConfig& c) -> double& { return c.params.gamma; }));
        t.push_back(number_key("v_ref", [](RunConfig& c) -> double& { return c.params.v_ref; }));
        t.push_back(number_key("invest_cost", [](RunConfig& c) -> double& { return c.params.invest_cost; }));
        t.push_back(number_key("d_social", [](RunConfig& c) -> double& { return c.params.d_social; }));
        t.push_back(number_key("d_private", [](RunConfig& c) -> double& { return c.params.d_private; }));
        t.push_back(number_key("share", [](RunConfig& c) -> double& { return c.params.share; }));
        t.push_back(number_key("lambda_rate", [](RunConfig& c) -> double& { return c.params.lambda_rate; }));
        t.push_back({"pi", Kind::Number, nullptr, [](RunConfig& c, const json& j) {
                         c.beliefs.pi_self = c.beliefs.pi_rival = json_to_number(j, "pi");
                     }});
        t.push_back(number_key("pi_self", [](RunConfig& c) -> double& { return c.beliefs.pi_self; }));
        t.push_back(number_key("pi_rival", [](RunConfig& c) -> double& { return c.beliefs.pi_rival; }));
        t.push_back({"belief_source", Kind::String,
                     [](const RunConfig& c) {
                         return json(c.beliefs.source == model::BeliefSource::Learned ? "learned" : "direct");
                     },
                     [](RunConfig& c, const json& j) {
                         const auto s = json_to_string(j, "belief_source");
                         if (s == "learned") {
                             c.beliefs.source = model::BeliefSource::Learned;
                         } else if (s == "direct") {
                             c.beliefs.source = model::BeliefSource::Direct;
                         } else {
                             throw ConfigError("config key 'belief_source': expected direct or learned, got " + s);
                         }
                     }});
        t.push_back(number_key("tau", [](RunConfig& c) -> double& { return c.beliefs.tau; }));
        t.push_back({"include_private", Kind::Bool, [](const RunConfig& c) { return json(c.include_private); },
                     [](RunConfig& c, const json& j) { c.include_private = json_to_bool(j, "include_private"); }});
        t.push_back(number_key("v", [](RunConfig& c) -> double& { return c.v; }));
        t.push_back(number_key("v0", [](RunConfig& c) -> double& { return c.sim.v0; }));
        t.push_back(number_key("horizon", [](RunConfig& c) -> double& { return c.sim.horizon; }));
        t.push_back(number_key("dt", [](RunConfig& c) -> double& { return c.sim.dt; }));
        t.push_back({"n_paths", Kind::Integer, [](const RunConfig& c) { return json(c.sim.n_paths); },
                     [](RunConfig& c, const json& j) { c.sim.n_paths = json_to_integer(j, "n_paths"); }});
        t.push_back({"seed", Kind::Integer, [](const RunConfig& c) { return json(c.sim.seed); },
                     [](RunConfig& c, const json& j) { c.sim.seed = json_to_integer(j, "seed"); }});
        t.push_back({"barrier", Kind::String, [](const RunConfig& c) { return json(std::string(sim::to_string(c.sim.barrier))); },
                     [](RunConfig& c, const json& j) {
                         const auto s = json_to_string(j, "barrier");
                         const auto kind = sim::barrier_kind_from_string(s);
                         if (!kind) {
                             throw ConfigError("config key 'barrier': expected preemption, survival, fixed, saviour "
                                               "or liability, got " + s);
                         }
                         c.sim.barrier = *kind;
                     }});
        t.push_back(number_key("barrier_level", [](RunConfig& c) -> double& { return c.sim.barrier_level; }));
        t.push_back({"discounting", Kind::Bool, [](const RunConfig& c) { return json(c.sim.discounting); },
                     [](RunConfig& c, const json& j) { c.sim.discounting = json_to_bool(j, "discounting"); }});
        t.push_back(number_key("lag", [](RunConfig& c) -> double& { return c.lag; }));
        t.push_back(number_key("epsilon", [](RunConfig& c) -> double& { return c.epsilon; }));
        t.push_back(number_key("validate_level", [](RunConfig& c) -> double& { return c.validate_level; }));
        t.push_back(number_key("d_after", [](RunConfig& c) -> double& { return c.d_after; }));
        for (auto [prefix, member] : {std::pair{"x", &RunConfig::x_axis}, std::pair{"y", &RunConfig::y_axis}}) {
            const std::string p = prefix;
            t.push_back({p + "_axis", Kind::String, [member](const RunConfig& c) { return json((c.*member).name); },
                         [member, p](RunConfig& c, const json& j) { (c.*member).name = json_to_string(j, p + "_axis"); }});
            t.push_back(number_key(p + "_min", [member](RunConfig& c) -> double& { return (c.*member).min; }));
            t.push_back(number_key(p + "_max", [member](RunConfig& c) -> double& { return (c.*member).max; }));
            t.push_back({p + "_steps", Kind::Integer, [member](const RunConfig& c) { return json((c.*member).steps); },
                         [member, p](RunConfig& c, const json& j) {
                             const auto n = json_to_integer(j, p + "_steps");
                             if (n > 100000) throw ConfigError("config key '" + p + "_steps': at most 100000");
                             (c.*member).steps = static_cast<int>(n);
                         }});
        }
        t.push_back({"annotate_x", Kind::OptionalNumber,
                     [](const RunConfig& c) { return c.annotation ? number_to_json(c.annotation->first) : json(nullptr); },
                     [](RunConfig& c, const json& j) {
                         if (j.is_null()) {
                             c.annotation.reset();
                             return;
                         }
                         const double x = json_to_number(j, "annotate_x");
                         c.annotation = std::pair{x, c.annotation ? c.annotation->second : 0.0};
                     }});
        t.push_back({"annotate_y", Kind::OptionalNumber,
                     [](const RunConfig& c) { return c.annotation ? number_to_json(c.annotation->second) : json(nullptr); },
                     [](RunConfig& c, const json& j) {
                         if (j.is_null()) {
                             c.annotation.reset();
                             return;
                         }
                         const double y = json_to_number(j, "annotate_y");
                         c.annotation = std::pair{c.annotation ? c.annotation->first : 0.0, y};
                     }});
        t.push_back({"out", Kind::String, [](const RunConfig& c) { return json(c.out_dir); },
                     [](RunConfig& c, const json& j) { c.out_dir = json_to_string(j, "out"); }});
        t.push_back({"formats", Kind::String, [](const RunConfig& c) { return json(join(c.formats, ',')); },
                     [](RunConfig& c, const json& j) { c.formats = split(json_to_string(j, "formats"), ','); }});
        return t;
    }();
    return table;
}

const KeyEntry& find_key(std::string_view raw) {
    std::string key(raw);
    std::replace(key.begin(), key.end(), '-', '_');
    for (const auto& e : key_table()) {
        if (e.name == key) return e;
    }
    throw ConfigError("unknown config key '" + std::string(raw) + "'");
}

json text_to_json(const KeyEntry& entry, std::string_view text) {
    const std::string s(text);
    switch (entry.kind) {
        case Kind::String: return s;
        case Kind::Bool:
            if (s == "true" || s == "1" || s == "on") return true;
            if (s == "false" || s == "0" || s == "off") return false;
            throw ConfigError("config key '" + entry.name + "': expected true or false, got '" + s + "'");
        case Kind::OptionalNumber:
            if (s == "none" || s == "null") return nullptr;
            [[fallthrough]];
        case Kind::Number: {
            if (s == "inf" || s == "-inf") return s;
            errno = 0;
            char* end = nullptr;
            const double d = std::strtod(s.c_str(), &end);
            if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
                throw ConfigError("config key '" + entry.name + "': expected a number, got '" + s + "'");
            }
            return d;
        }
        case Kind::Integer: {
            errno = 0;
            char* end = nullptr;
            const unsigned long long n = std::strtoull(s.c_str(), &end, 10);
            if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
                throw ConfigError("config key '" + entry.name + "': expected a nonnegative integer, got '" + s + "'");
            }
            return static_cast<std::uint64_t>(n);
        }
    }
    return nullptr;
}

RunConfig make_preset(std::string_view name) {
    RunConfig c;
    c.preset = std::string(name);
    c.params.invest_cost = 1.0;
    c.params.share = 0.0;
    c.params.d_social = 10.0;
    c.beliefs = model::BeliefState::symmetric(0.5);
    if (name == "baseline") return c;
    if (name == "figure1") {
        // Illustrative ranges; the phase diagram has no published axis scale.
        c.x_axis = {"d_social", 0.0, 20.0, 41};
        c.y_axis = {"v", 0.0, 30.0, 61};
        c.annotation = std::pair{12.0, 6.0};
        return c;
    }
    if (name == "liability-demo") {
        c.params.share = 0.25;
        return c;
    }
    if (name == "saviour-demo") {
        c.beliefs = model::BeliefState::asymmetric(0.6, 0.4);
        return c;
    }
    if (name == "warning-shot-demo") {
        c.params.d_social = 5.0;
        c.d_after = 50.0;
        return c;
    }
    // Catastrophe probabilities quoted by AI lab leaders and surveys, as
    // alignment probabilities: 20%, the 10% end of a 10-20% range, and a 5%
    // survey median.
    if (name == "expert-survey") {
        c.beliefs = model::BeliefState::symmetric(0.8);
        return c;
    }
    if (name == "expert-survey-high") {
        c.beliefs = model::BeliefState::symmetric(0.9);
        return c;
    }
    if (name == "expert-survey-median") {
        c.beliefs = model::BeliefState::symmetric(0.95);
        return c;
    }
    if (name == "validate-benchmark") {
        c.params.r = 0.05;
        c.params.delta = 0.02;
        c.params.sigma = 0.3;
        c.sim.v0 = 1.0;
        c.validate_level = 2.0;
        c.sim.dt = 0.02;
        c.sim.horizon = 100.0;
        c.sim.n_paths = 100000;
        c.sim.barrier = sim::BarrierKind::Fixed;
        c.sim.barrier_level = 2.0;
        return c;
    }
    if (name == "breakout-demo") {
        c.params.lambda_rate = 0.5;
        c.sim.horizon = 20.0;
        c.sim.n_paths = 2000;
        c.lag = 2.0;
        c.epsilon = 2.0;
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace

double AxisSpec::value(int index) const {
    if (index == steps - 1) return max;
    return min + (max - min) * static_cast<double>(index) / static_cast<double>(steps - 1);
}

bool RunConfig::wants(std::string_view format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::finalize() {
    try {
        if (beliefs.source == model::BeliefSource::Learned) {
            beliefs.pi_self = beliefs.pi_rival = model::safety_probability(params.lambda_rate, beliefs.tau);
        }
        params.validate();
        beliefs.validate();
        sim.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    for (const auto* axis : {&x_axis, &y_axis}) {
        const auto& names = sweep_axis_names();
        if (std::find(names.begin(), names.end(), axis->name) == names.end()) {
            throw ConfigError("sweep axis '" + axis->name + "' is not a swept parameter (allowed: " +
                              join(names, ',') + ")");
        }
        if (axis->steps < 2) throw ConfigError("sweep axis '" + axis->name + "' needs steps >= 2");
        if (!(axis->min < axis->max)) throw ConfigError("sweep axis '" + axis->name + "' needs min < max");
    }
    if (x_axis.name == y_axis.name) throw ConfigError("sweep axes must differ");
    for (const auto& f : formats) {
        if (f != "csv" && f != "json" && f != "svg") {
            throw ConfigError("unknown output format '" + f + "' (allowed: csv,json,svg)");
        }
    }
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& e : key_table()) k.push_back(e.name);
        return k;
    }();
    return keys;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "baseline",      "figure1",      "liability-demo",     "saviour-demo",       "warning-shot-demo",
        "expert-survey", "expert-survey-high", "expert-survey-median", "validate-benchmark", "breakout-demo"};
    return names;
}

RunConfig preset(std::string_view name) { return make_preset(name); }

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    const auto& entry = find_key(key);
    entry.set(config, text_to_json(entry, value));
}

RunConfig load_config_json(std::string_view text, RunConfig base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig config = std::move(base);
    if (auto it = doc.find("preset"); it != doc.end() && !it->is_null()) {
        find_key("preset").set(config, *it);
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "preset") continue;
        const auto& entry = find_key(key);
        entry.set(config, value);
    }
    return config;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_config_json(buffer.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string to_config_json(const RunConfig& config) {
    json doc = json::object();
    for (const auto& e : key_table()) {
        if (e.get) doc[e.name] = e.get(config);
    }
    return doc.dump(2) + "\n";
}

}  // namespace optionrace::cli
