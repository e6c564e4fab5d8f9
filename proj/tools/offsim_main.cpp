// Command-line front end. Links the C API only; all simulation logic
// lives behind the shared library.

#include "offsim/offsim_c.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ScenarioDeleter {
    void operator()(offsim_scenario* s) const { offsim_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<offsim_scenario, ScenarioDeleter>;

struct StringDeleter {
    void operator()(char* s) const { offsim_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

int fail(offsim_status st) {
    std::cerr << "error: " << offsim_last_error() << "\n";
    return static_cast<int>(st);
}

int write_output(const std::string& path, const char* text) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return static_cast<int>(OFFSIM_ERR_CONFIG);
    }
    out << text;
    return 0;
}

struct CommonArgs {
    std::string scenario_file;
    std::string preset;
    std::string variant;
    std::string planner;
    long long batch = 0;
    long long n_ssd = 0;
    std::string out_file;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_file, "Scenario JSON file");
    cmd->add_option("--preset", args.preset, "Scenario preset name (see 'presets')");
    cmd->add_option("--variant", args.variant,
                    "Schedule variant override: serial | pipelined | overlapped");
    cmd->add_option("--planner", args.planner,
                    "Planner override: auto or a fixed swap coefficient in [0,1]");
    cmd->add_option("--batch", args.batch, "Batch size override");
    cmd->add_option("--n-ssd", args.n_ssd, "SSD count override");
    cmd->add_option("--out", args.out_file, "Write the report here instead of stdout");
}

int load_common(const CommonArgs& args, ScenarioPtr& scenario) {
    if (args.scenario_file.empty() == args.preset.empty()) {
        std::cerr << "error: exactly one of --scenario or --preset is required\n";
        return static_cast<int>(OFFSIM_ERR_CONFIG);
    }
    offsim_scenario* raw = nullptr;
    if (!args.preset.empty()) {
        if (offsim_status st = offsim_scenario_from_preset(args.preset.c_str(), &raw))
            return fail(st);
    } else {
        std::ifstream in(args.scenario_file, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read scenario file '" << args.scenario_file << "'\n";
            return static_cast<int>(OFFSIM_ERR_CONFIG);
        }
        std::ostringstream text;
        text << in.rdbuf();
        if (offsim_status st = offsim_scenario_parse(text.str().c_str(), &raw))
            return fail(st);
    }
    scenario.reset(raw);

    if (!args.variant.empty())
        if (offsim_status st =
                offsim_scenario_override(scenario.get(), "variant", args.variant.c_str()))
            return fail(st);
    if (!args.planner.empty())
        if (offsim_status st =
                offsim_scenario_override(scenario.get(), "planner", args.planner.c_str()))
            return fail(st);
    if (args.batch > 0)
        if (offsim_status st = offsim_scenario_override(scenario.get(), "batch_size",
                                                        std::to_string(args.batch).c_str()))
            return fail(st);
    if (args.n_ssd > 0)
        if (offsim_status st = offsim_scenario_override(scenario.get(), "n_ssd",
                                                        std::to_string(args.n_ssd).c_str()))
            return fail(st);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("offsim ") + offsim_version() +
                 " - offload training simulator and planner"};
    app.require_subcommand(1);

    CommonArgs plan_args, sim_args, sweep_args, cap_args, val_args;
    std::string trace_file, axis;
    std::vector<double> values, cpu_mem_gb;
    int workers = 1;

    CLI::App* plan = app.add_subcommand("plan", "Choose swap volume and report the estimate");
    add_common(plan, plan_args);

    CLI::App* simulate = app.add_subcommand("simulate", "Run one iteration and summarize");
    add_common(simulate, sim_args);
    simulate->add_option("--trace", trace_file, "Write a Chrome trace event file");

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep one axis across all variants (CSV)");
    add_common(sweep, sweep_args);
    sweep->add_option("--axis", axis,
                      "Axis: batch_size | n_ssd | swap_coefficient | cpu_mem (GB)")
        ->required();
    sweep->add_option("--values", values, "Axis values")->required()->delimiter(',');
    sweep->add_option("--workers", workers, "Worker threads");

    CLI::App* capacity =
        app.add_subcommand("capacity", "Max trainable model per placement policy (CSV)");
    add_common(capacity, cap_args);
    capacity->add_option("--cpu-mem-gb", cpu_mem_gb, "CPU memory values in GB")
        ->required()
        ->delimiter(',');

    CLI::App* validate = app.add_subcommand("validate", "Check a scenario and report footprints");
    add_common(validate, val_args);

    CLI::App* presets = app.add_subcommand("presets", "List available presets");

    CLI11_PARSE(app, argc, argv);

    if (presets->parsed()) {
        char* names = nullptr;
        if (offsim_status st = offsim_preset_names(&names)) return fail(st);
        CString guard(names);
        std::cout << names;
        return 0;
    }

    ScenarioPtr scenario;
    CommonArgs* args = nullptr;
    if (plan->parsed()) args = &plan_args;
    if (simulate->parsed()) args = &sim_args;
    if (sweep->parsed()) args = &sweep_args;
    if (capacity->parsed()) args = &cap_args;
    if (validate->parsed()) args = &val_args;
    if (int rc = load_common(*args, scenario)) return rc;

    if (plan->parsed()) {
        char* report = nullptr;
        if (offsim_status st = offsim_plan(scenario.get(), &report)) return fail(st);
        CString guard(report);
        return write_output(args->out_file, report);
    }

    if (simulate->parsed()) {
        char* summary = nullptr;
        char* trace = nullptr;
        const offsim_status st =
            offsim_simulate(scenario.get(), &summary, trace_file.empty() ? nullptr : &trace);
        CString summary_guard(summary);
        CString trace_guard(trace);
        if (st != OFFSIM_OK && summary == nullptr) return fail(st);
        if (trace != nullptr)
            if (int rc = write_output(trace_file, trace)) return rc;
        if (int rc = write_output(args->out_file, summary)) return rc;
        if (st != OFFSIM_OK) {
            std::cerr << "error: " << offsim_last_error() << "\n";
            return static_cast<int>(st);
        }
        return 0;
    }

    if (sweep->parsed()) {
        char* csv = nullptr;
        if (offsim_status st = offsim_sweep(scenario.get(), axis.c_str(), values.data(),
                                            values.size(), workers, &csv))
            return fail(st);
        CString guard(csv);
        return write_output(args->out_file, csv);
    }

    if (capacity->parsed()) {
        char* csv = nullptr;
        if (offsim_status st =
                offsim_capacity(scenario.get(), cpu_mem_gb.data(), cpu_mem_gb.size(), &csv))
            return fail(st);
        CString guard(csv);
        return write_output(args->out_file, csv);
    }

    if (validate->parsed()) {
        char* report = nullptr;
        const offsim_status st = offsim_validate(scenario.get(), &report);
        CString guard(report);
        if (report == nullptr) return fail(st);
        if (int rc = write_output(args->out_file, report)) return rc;
        if (st != OFFSIM_OK) {
            std::cerr << "error: " << offsim_last_error() << "\n";
            return static_cast<int>(st);
        }
        return 0;
    }

    return 0;
}
