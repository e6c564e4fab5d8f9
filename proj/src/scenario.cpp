#include "offsim/scenario.hpp"

#include "offsim/errors.hpp"
#include "offsim/presets.hpp"

#include <json.hpp>

#include <set>

namespace offsim {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.find(key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for key '") + key + "'");
    }
}

ModelConfig parse_model(const json& node) {
    if (node.is_string()) return model_preset(node.get<std::string>());
    if (!node.is_object()) throw ConfigError("'model' must be a preset name or an object");

    static const std::set<std::string> allowed = {
        "preset",          "name",        "num_layers",
        "num_heads",       "hidden_dim",  "batch_size",
        "seq_len",         "param_elem_bytes", "optimizer_state_multiplier",
        "activation_elem_bytes", "extra_flops_per_block"};
    reject_unknown_keys(node, allowed, "model");

    ModelConfig m;
    if (node.contains("preset")) {
        m = model_preset(node.at("preset").get<std::string>());
    } else {
        for (const char* required : {"num_layers", "num_heads", "hidden_dim"})
            if (!node.contains(required))
                throw ConfigError(std::string("model: missing key '") + required + "'");
    }
    read_field(node, "name", m.name);
    read_field(node, "num_layers", m.num_layers);
    read_field(node, "num_heads", m.num_heads);
    read_field(node, "hidden_dim", m.hidden_dim);
    read_field(node, "batch_size", m.batch_size);
    read_field(node, "seq_len", m.seq_len);
    read_field(node, "param_elem_bytes", m.param_elem_bytes);
    read_field(node, "optimizer_state_multiplier", m.optimizer_state_multiplier);
    read_field(node, "activation_elem_bytes", m.activation_elem_bytes);
    read_field(node, "extra_flops_per_block", m.extra_flops_per_block);
    m.validate();
    return m;
}

HardwareConfig parse_hardware(const json& node) {
    if (node.is_string()) return hardware_preset(node.get<std::string>());
    if (!node.is_object()) throw ConfigError("'hardware' must be a preset name or an object");

    static const std::set<std::string> allowed = {
        "preset",     "name",        "bw_gpu",        "bw_s2c",
        "bw_c2s",     "n_ssd",       "gpu_mem",       "cpu_mem",
        "ssd_capacity", "gpu_tput",  "cpu_opt_tput",  "gpu_price_dollars",
        "ssd_price_dollars", "server_price_dollars"};
    reject_unknown_keys(node, allowed, "hardware");

    HardwareConfig hw;
    if (node.contains("preset")) {
        hw = hardware_preset(node.at("preset").get<std::string>());
    } else {
        for (const char* required : {"bw_gpu", "bw_s2c", "bw_c2s", "gpu_mem", "cpu_mem",
                                     "ssd_capacity", "gpu_tput", "cpu_opt_tput"})
            if (!node.contains(required))
                throw ConfigError(std::string("hardware: missing key '") + required + "'");
    }
    read_field(node, "name", hw.name);
    read_field(node, "bw_gpu", hw.bw_gpu);
    read_field(node, "bw_s2c", hw.bw_s2c);
    read_field(node, "bw_c2s", hw.bw_c2s);
    read_field(node, "n_ssd", hw.n_ssd);
    read_field(node, "gpu_mem", hw.gpu_mem);
    read_field(node, "cpu_mem", hw.cpu_mem);
    read_field(node, "ssd_capacity", hw.ssd_capacity);
    read_field(node, "gpu_tput", hw.gpu_tput);
    read_field(node, "cpu_opt_tput", hw.cpu_opt_tput);
    read_field(node, "gpu_price_dollars", hw.gpu_price_dollars);
    read_field(node, "ssd_price_dollars", hw.ssd_price_dollars);
    read_field(node, "server_price_dollars", hw.server_price_dollars);
    const ValidationReport r = validate(hw);
    if (!r.ok()) throw ConfigError("hardware: " + r.errors.front());
    return hw;
}

void parse_planner(const json& node, Scenario& s) {
    if (!node.is_object()) throw ConfigError("'planner' must be an object");
    reject_unknown_keys(node, {"mode", "d_f", "coefficient"}, "planner");
    const std::string mode = node.value("mode", std::string("auto"));
    if (mode == "auto") {
        s.planner_mode = PlannerOptions::Mode::automatic;
        if (node.contains("d_f") || node.contains("coefficient"))
            throw ConfigError("planner: mode 'auto' takes no value");
    } else if (mode == "fixed_d_f") {
        s.planner_mode = PlannerOptions::Mode::fixed_d_f;
        if (!node.contains("d_f")) throw ConfigError("planner: mode 'fixed_d_f' needs 'd_f'");
        s.planner_value = node.at("d_f").get<double>();
    } else if (mode == "fixed_coefficient") {
        s.planner_mode = PlannerOptions::Mode::fixed_coefficient;
        if (!node.contains("coefficient"))
            throw ConfigError("planner: mode 'fixed_coefficient' needs 'coefficient'");
        s.planner_value = node.at("coefficient").get<double>();
        if (s.planner_value < 0.0 || s.planner_value > 1.0)
            throw ConfigError("planner: coefficient must be in [0, 1]");
    } else {
        throw ConfigError("planner: unknown mode '" + mode + "'");
    }
}

} // namespace

Scenario load_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario document must be an object");
    reject_unknown_keys(doc, {"schema_version", "model", "hardware", "variant", "planner", "seed"},
                        "scenario");

    Scenario s;
    if (!doc.contains("schema_version"))
        throw ConfigError("scenario: missing key 'schema_version'");
    s.schema_version = doc.at("schema_version").get<int>();
    if (s.schema_version != kScenarioSchemaVersion)
        throw ConfigError("scenario: unsupported schema_version " +
                          std::to_string(s.schema_version));
    for (const char* required : {"model", "hardware"})
        if (!doc.contains(required))
            throw ConfigError(std::string("scenario: missing key '") + required + "'");

    s.model = parse_model(doc.at("model"));
    s.hardware = parse_hardware(doc.at("hardware"));
    if (doc.contains("variant"))
        s.variant = schedule_variant_from_string(doc.at("variant").get<std::string>());
    if (doc.contains("planner")) parse_planner(doc.at("planner"), s);
    if (doc.contains("seed")) s.seed = doc.at("seed").get<std::int64_t>();
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json model = {
        {"name", s.model.name},
        {"num_layers", s.model.num_layers},
        {"num_heads", s.model.num_heads},
        {"hidden_dim", s.model.hidden_dim},
        {"batch_size", s.model.batch_size},
        {"seq_len", s.model.seq_len},
        {"param_elem_bytes", s.model.param_elem_bytes},
        {"optimizer_state_multiplier", s.model.optimizer_state_multiplier},
        {"activation_elem_bytes", s.model.activation_elem_bytes},
        {"extra_flops_per_block", s.model.extra_flops_per_block},
    };
    json hardware = {
        {"name", s.hardware.name},
        {"bw_gpu", s.hardware.bw_gpu},
        {"bw_s2c", s.hardware.bw_s2c},
        {"bw_c2s", s.hardware.bw_c2s},
        {"n_ssd", s.hardware.n_ssd},
        {"gpu_mem", s.hardware.gpu_mem},
        {"cpu_mem", s.hardware.cpu_mem},
        {"ssd_capacity", s.hardware.ssd_capacity},
        {"gpu_tput", s.hardware.gpu_tput},
        {"cpu_opt_tput", s.hardware.cpu_opt_tput},
        {"gpu_price_dollars", s.hardware.gpu_price_dollars},
        {"ssd_price_dollars", s.hardware.ssd_price_dollars},
        {"server_price_dollars", s.hardware.server_price_dollars},
    };
    json planner;
    switch (s.planner_mode) {
    case PlannerOptions::Mode::automatic: planner = {{"mode", "auto"}}; break;
    case PlannerOptions::Mode::fixed_d_f:
        planner = {{"mode", "fixed_d_f"}, {"d_f", s.planner_value}};
        break;
    case PlannerOptions::Mode::fixed_coefficient:
        planner = {{"mode", "fixed_coefficient"}, {"coefficient", s.planner_value}};
        break;
    }
    const json doc = {
        {"schema_version", s.schema_version},
        {"model", model},
        {"hardware", hardware},
        {"variant", to_string(s.variant)},
        {"planner", planner},
        {"seed", s.seed},
    };
    return doc.dump(2) + "\n";
}

namespace {

struct ScenarioPresetSpec {
    const char* name;
    const char* model;
    const char* hardware;
    std::uint64_t batch;
};

constexpr ScenarioPresetSpec kScenarioPresets[] = {
    {"13b-a100-b8", "gpt3-13b", "a100-12ssd", 8},
    {"13b-a100-b16", "gpt3-13b", "a100-12ssd", 16},
    {"13b-a100-b32", "gpt3-13b", "a100-12ssd", 32},
    {"13b-a100-b64", "gpt3-13b", "a100-12ssd", 64},
    {"13b-a100-b80", "gpt3-13b", "a100-12ssd", 80},
    {"13b-4090-b32", "gpt3-13b", "rtx4090-12ssd", 32},
    {"175b-a100-b16", "gpt3-175b", "a100-12ssd", 16},
    {"175b-4090-b8", "gpt3-175b", "rtx4090-12ssd", 8},
};

} // namespace

const std::vector<std::string>& scenario_preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& p : kScenarioPresets) out.push_back(p.name);
        return out;
    }();
    return names;
}

Scenario scenario_preset(const std::string& name) {
    for (const auto& p : kScenarioPresets) {
        if (name == p.name) {
            Scenario s;
            s.model = model_preset(p.model);
            s.model.batch_size = p.batch;
            s.hardware = hardware_preset(p.hardware);
            return s;
        }
    }
    throw ConfigError("unknown scenario preset '" + name + "'");
}

} // namespace offsim
