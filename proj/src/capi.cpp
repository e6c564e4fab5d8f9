#include "offsim/offsim_c.h"

#include "offsim/errors.hpp"
#include "offsim/presets.hpp"
#include "offsim/runner.hpp"
#include "offsim/scenario.hpp"

#include <cstring>
#include <string>

using namespace offsim;

struct offsim_scenario {
    Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

offsim_status set_error(offsim_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
offsim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        return set_error(OFFSIM_ERR_CONFIG, e.what());
    } catch (const InfeasibleError& e) {
        return set_error(OFFSIM_ERR_INFEASIBLE, e.what());
    } catch (const InvariantError& e) {
        return set_error(OFFSIM_ERR_INVARIANT, e.what());
    } catch (const std::exception& e) {
        return set_error(OFFSIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(OFFSIM_ERR_INTERNAL, "unknown error");
    }
}

offsim_status require(bool ok, const char* what) {
    return ok ? OFFSIM_OK : set_error(OFFSIM_ERR_CONFIG, what);
}

} // namespace

extern "C" {

const char* offsim_version(void) { return "0.1.0"; }

const char* offsim_last_error(void) { return g_last_error.c_str(); }

void offsim_string_free(char* s) { delete[] s; }

offsim_status offsim_scenario_parse(const char* json_text, offsim_scenario** out) {
    if (offsim_status st = require(json_text && out, "null argument")) return st;
    return guarded([&] {
        *out = new offsim_scenario{load_scenario(json_text)};
        return OFFSIM_OK;
    });
}

offsim_status offsim_scenario_from_preset(const char* preset_name, offsim_scenario** out) {
    if (offsim_status st = require(preset_name && out, "null argument")) return st;
    return guarded([&] {
        *out = new offsim_scenario{scenario_preset(preset_name)};
        return OFFSIM_OK;
    });
}

void offsim_scenario_free(offsim_scenario* s) { delete s; }

offsim_status offsim_scenario_to_json(const offsim_scenario* s, char** json_out) {
    if (offsim_status st = require(s && json_out, "null argument")) return st;
    return guarded([&] {
        *json_out = dup_string(scenario_to_json(s->scenario));
        return OFFSIM_OK;
    });
}

offsim_status offsim_scenario_override(offsim_scenario* s, const char* key, const char* value) {
    if (offsim_status st = require(s && key && value, "null argument")) return st;
    return guarded([&] {
        const std::string k = key;
        const std::string v = value;
        if (k == "variant") {
            s->scenario.variant = schedule_variant_from_string(v);
        } else if (k == "batch_size") {
            const long long b = std::stoll(v);
            if (b < 1) throw ConfigError("batch_size override must be >= 1");
            s->scenario.model.batch_size = static_cast<std::uint64_t>(b);
        } else if (k == "n_ssd") {
            const long long n = std::stoll(v);
            if (n < 1) throw ConfigError("n_ssd override must be >= 1");
            s->scenario.hardware.n_ssd = static_cast<std::uint32_t>(n);
        } else if (k == "planner") {
            if (v == "auto") {
                s->scenario.planner_mode = PlannerOptions::Mode::automatic;
                s->scenario.planner_value = 0.0;
            } else {
                const double c = std::stod(v);
                if (c < 0.0 || c > 1.0)
                    throw ConfigError("planner override must be 'auto' or a coefficient in "
                                      "[0, 1]");
                s->scenario.planner_mode = PlannerOptions::Mode::fixed_coefficient;
                s->scenario.planner_value = c;
            }
        } else {
            throw ConfigError("unknown override key '" + k + "'");
        }
        return OFFSIM_OK;
    });
}

offsim_status offsim_preset_names(char** names_out) {
    if (offsim_status st = require(names_out != nullptr, "null argument")) return st;
    return guarded([&] {
        std::string all = "scenario presets:\n";
        for (const auto& n : scenario_preset_names()) all += "  " + n + "\n";
        all += "model presets:\n";
        for (const auto& n : model_preset_names()) all += "  " + n + "\n";
        all += "hardware presets:\n";
        for (const auto& n : hardware_preset_names()) all += "  " + n + "\n";
        *names_out = dup_string(all);
        return OFFSIM_OK;
    });
}

offsim_status offsim_plan(const offsim_scenario* s, char** report_json_out) {
    if (offsim_status st = require(s && report_json_out, "null argument")) return st;
    return guarded([&] {
        *report_json_out = dup_string(plan_report_json(s->scenario));
        return OFFSIM_OK;
    });
}

offsim_status offsim_simulate(const offsim_scenario* s, char** summary_json_out,
                              char** trace_json_out) {
    if (offsim_status st = require(s && summary_json_out, "null argument")) return st;
    return guarded([&] {
        std::string trace_json;
        const std::string summary =
            simulate_summary_json(s->scenario, trace_json_out ? &trace_json : nullptr);
        *summary_json_out = dup_string(summary);
        if (trace_json_out) *trace_json_out = dup_string(trace_json);
        // Surface post-hoc invariant failures as a status without
        // discarding the report.
        if (summary.find("\"all_invariants_pass\": false") != std::string::npos)
            return set_error(OFFSIM_ERR_INVARIANT, "trace invariant failure; see summary");
        return OFFSIM_OK;
    });
}

offsim_status offsim_sweep(const offsim_scenario* s, const char* axis, const double* values,
                           size_t value_count, int workers, char** csv_out) {
    if (offsim_status st = require(s && axis && values && csv_out, "null argument")) return st;
    return guarded([&] {
        const std::vector<double> vals(values, values + value_count);
        *csv_out = dup_string(sweep_csv(s->scenario, axis, vals, workers));
        return OFFSIM_OK;
    });
}

offsim_status offsim_capacity(const offsim_scenario* s, const double* cpu_mem_gb,
                              size_t value_count, char** csv_out) {
    if (offsim_status st = require(s && cpu_mem_gb && csv_out, "null argument")) return st;
    return guarded([&] {
        const std::vector<double> vals(cpu_mem_gb, cpu_mem_gb + value_count);
        *csv_out = dup_string(capacity_csv(s->scenario, vals));
        return OFFSIM_OK;
    });
}

offsim_status offsim_validate(const offsim_scenario* s, char** report_json_out) {
    if (offsim_status st = require(s && report_json_out, "null argument")) return st;
    return guarded([&] {
        const std::string report = validate_report_json(s->scenario);
        *report_json_out = dup_string(report);
        if (report.find("\"ok\": false") != std::string::npos)
            return set_error(OFFSIM_ERR_CONFIG, "hardware validation failed; see report");
        return OFFSIM_OK;
    });
}

} // extern "C"
