#include "offsim/runner.hpp"

#include "offsim/errors.hpp"
#include "offsim/presets.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace offsim {

using json = nlohmann::ordered_json;

namespace {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

json breakdown_to_json(const CostBreakdown& c) {
    return json{
        {"t_f_comp_s", c.t_f_comp},
        {"t_f_gpu_s", c.t_f_gpu},
        {"t_f_ssd_s", c.t_f_ssd},
        {"t_f_s", c.t_f},
        {"t_b_comp_s", c.t_b_comp},
        {"t_o_comp_s", c.t_o_comp},
        {"t_bo_gpu_s", c.t_bo_gpu},
        {"t_bo_gpu_c2g_s", c.t_bo_gpu_c2g},
        {"t_bo_gpu_g2c_s", c.t_bo_gpu_g2c},
        {"t_bo_ssd_s", c.t_bo_ssd},
        {"t_bo_s", c.t_bo},
        {"t_iter_s", c.t_iter},
        {"d_f_bytes", c.d_f},
        {"bottleneck_f", to_string(c.bottleneck_f)},
        {"bottleneck_bo", to_string(c.bottleneck_bo)},
    };
}

json plan_to_json(const ModelConfig& model, const SwapPlan& plan) {
    const std::vector<LayerProfile> profiles = build_layer_profiles(model);
    json layers = json::array();
    for (std::uint32_t idx : plan.swapped_layers) {
        std::ostringstream os;
        os << "b" << profiles[idx].block_index << " " << to_string(profiles[idx].kind);
        layers.push_back(os.str());
    }
    return json{
        {"d_start_bytes", plan.d_start_bytes},
        {"d_f_bytes", plan.d_f_bytes},
        {"d_max_bytes", plan.d_max_bytes},
        {"t_max_s", plan.t_max_s},
        {"swap_coefficient", plan.swap_coefficient},
        {"swapped_layer_count", plan.swapped_layers.size()},
        {"swapped_layers", layers},
        {"checkpoint_location", plan.checkpoints_on_ssd ? "ssd" : "cpu"},
    };
}

json scenario_echo(const Scenario& s) {
    return json{
        {"model", s.model.name},
        {"hardware", s.hardware.name},
        {"batch_size", s.model.batch_size},
        {"seq_len", s.model.seq_len},
        {"n_ssd", s.hardware.n_ssd},
        {"variant", to_string(s.variant)},
        {"seed", s.seed},
    };
}

PlannerOptions planner_options_for(const Scenario& s, bool ckpt_on_ssd) {
    PlannerOptions opts;
    opts.mode = s.planner_mode;
    opts.fixed_d_f_bytes = s.planner_value;
    opts.fixed_coefficient = s.planner_value;
    opts.checkpoints_on_ssd = ckpt_on_ssd;
    return opts;
}

} // namespace

bool checkpoints_fit_cpu(const ModelConfig& model, const HardwareConfig& hw) {
    const FootprintReport fp = footprint(model);
    const std::uint64_t full_swap_bytes =
        fp.total_checkpoint_bytes + total_intra_block_act_bytes(model);
    const double block_fp16 = 12.0 * static_cast<double>(model.hidden_dim) *
                              static_cast<double>(model.hidden_dim) *
                              static_cast<double>(model.param_elem_bytes);
    const std::uint64_t staging = static_cast<std::uint64_t>(
        std::llround(kCpuStagingGroups * block_fp16 * (2.0 + model.optimizer_state_multiplier)));
    return staging <= hw.cpu_mem && full_swap_bytes <= hw.cpu_mem - staging;
}

SwapPlan plan_for_scenario(const Scenario& s) {
    const bool ckpt_on_ssd =
        s.variant == ScheduleVariant::serial ? false : !checkpoints_fit_cpu(s.model, s.hardware);
    return plan_swaps(s.model, s.hardware, planner_options_for(s, ckpt_on_ssd));
}

RunOutputs run_scenario(const Scenario& s) {
    RunOutputs out;
    out.plan = plan_for_scenario(s);
    out.graph = build_schedule(s.model, s.hardware, out.plan, s.variant);
    out.trace = simulate(out.graph, s.hardware);
    out.invariants = check_trace_invariants(out.graph, out.trace, s.hardware);
    return out;
}

std::string plan_report_json(const Scenario& s) {
    const SwapPlan plan = plan_for_scenario(s);
    const json doc = {
        {"schema_version", kScenarioSchemaVersion},
        {"command", "plan"},
        {"scenario", scenario_echo(s)},
        {"plan", plan_to_json(s.model, plan)},
        {"cost_model", breakdown_to_json(plan.predicted)},
    };
    return doc.dump(2) + "\n";
}

std::string simulate_summary_json(const Scenario& s, std::string* trace_json_out) {
    const RunOutputs run = run_scenario(s);
    if (trace_json_out != nullptr) *trace_json_out = to_chrome_trace_json(run.graph, run.trace);

    json busy = json::object();
    for (const auto& [res, ns] : run.trace.busy_ns)
        busy[to_string(res)] = static_cast<double>(ns) * 1e-9;
    json peaks = json::object();
    for (const auto& [res, bytes] : run.trace.peak_mem) peaks[to_string(res)] = bytes;
    json invariants = json::array();
    for (const auto& e : run.invariants.entries)
        invariants.push_back(json{{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});

    const json doc = {
        {"schema_version", kScenarioSchemaVersion},
        {"command", "simulate"},
        {"scenario", scenario_echo(s)},
        {"plan", plan_to_json(s.model, run.plan)},
        {"cost_model", breakdown_to_json(run.plan.predicted)},
        {"simulation",
         json{
             {"variant", to_string(s.variant)},
             {"checkpoint_location", run.graph.header.checkpoint_location},
             {"makespan_s", run.trace.makespan_s()},
             {"makespan_ns", run.trace.makespan_ns},
             {"task_count", run.graph.tasks.size()},
             {"peak_mem_bytes", peaks},
             {"busy_s", busy},
             {"roofline_lower_bound_s",
              static_cast<double>(roofline_lower_bound_ns(run.graph, s.hardware)) * 1e-9},
             {"serial_duration_sum_s",
              static_cast<double>(serial_duration_sum_ns(run.graph, s.hardware)) * 1e-9},
         }},
        {"invariants", invariants},
        {"all_invariants_pass", run.invariants.all_pass},
    };
    return doc.dump(2) + "\n";
}

namespace {

struct SweepCell {
    std::size_t value_index = 0;
    double value = 0.0;
    ScheduleVariant variant = ScheduleVariant::serial;
    bool ok = false;
    std::string error;
    double makespan_s = 0.0;
    SwapPlan plan;
    std::string checkpoint_location;
};

Scenario apply_axis(const Scenario& base, const std::string& axis, double value) {
    Scenario s = base;
    if (axis == "batch_size") {
        if (value < 1.0) throw ConfigError("batch_size value must be >= 1");
        s.model.batch_size = static_cast<std::uint64_t>(value);
    } else if (axis == "n_ssd") {
        if (value < 1.0) throw ConfigError("n_ssd value must be >= 1");
        s.hardware.n_ssd = static_cast<std::uint32_t>(value);
    } else if (axis == "swap_coefficient") {
        s.planner_mode = PlannerOptions::Mode::fixed_coefficient;
        s.planner_value = value;
    } else if (axis == "cpu_mem") {
        if (value <= 0.0) throw ConfigError("cpu_mem value (GB) must be > 0");
        s.hardware.cpu_mem = static_cast<std::uint64_t>(value * 1e9);
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "'");
    }
    return s;
}

void run_cell(const Scenario& base, const std::string& axis, SweepCell& cell) {
    try {
        Scenario s = apply_axis(base, axis, cell.value);
        s.variant = cell.variant;
        RunOutputs run = run_scenario(s);
        if (!run.invariants.all_pass) {
            cell.ok = false;
            cell.error = "trace invariant failure";
            return;
        }
        cell.ok = true;
        cell.makespan_s = run.trace.makespan_s();
        cell.plan = run.plan;
        cell.checkpoint_location = run.graph.header.checkpoint_location;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
}

std::string csv_escape(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

constexpr ScheduleVariant kAllVariants[] = {ScheduleVariant::serial, ScheduleVariant::pipelined,
                                            ScheduleVariant::overlapped};

} // namespace

std::string sweep_csv(const Scenario& base, const std::string& axis,
                      const std::vector<double>& values, int workers) {
    if (values.empty()) throw ConfigError("sweep: values list must not be empty");
    if (axis != "batch_size" && axis != "n_ssd" && axis != "swap_coefficient" &&
        axis != "cpu_mem")
        throw ConfigError("unknown sweep axis '" + axis + "'");

    std::vector<SweepCell> cells;
    for (std::size_t vi = 0; vi < values.size(); ++vi)
        for (ScheduleVariant variant : kAllVariants) {
            SweepCell c;
            c.value_index = vi;
            c.value = values[vi];
            c.variant = variant;
            cells.push_back(c);
        }

    const int thread_count =
        std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
    if (thread_count <= 1) {
        for (SweepCell& cell : cells) run_cell(base, axis, cell);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(base, axis, cells[i]);
                }
            });
        for (std::thread& t : pool) t.join();
    }

    const PriceTable prices = price_table(base.hardware);
    std::ostringstream out;
    out << "schema_version,axis,value,variant,status,makespan_s,speedup_vs_serial,"
           "t_f_comp_s,t_f_gpu_s,t_f_ssd_s,t_f_s,t_b_comp_s,t_o_comp_s,t_bo_gpu_s,"
           "t_bo_ssd_s,t_bo_s,t_iter_model_s,bottleneck_f,bottleneck_bo,swap_coefficient,"
           "d_f_bytes,checkpoint_location,tokens_per_s,tokens_per_s_per_dollar_gpu_ssd,"
           "tokens_per_s_per_dollar_server,error\n";

    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        const SweepCell* serial_cell = nullptr;
        for (const SweepCell& c : cells)
            if (c.value_index == vi && c.variant == ScheduleVariant::serial) serial_cell = &c;
        for (ScheduleVariant variant : kAllVariants) {
            const SweepCell* cell = nullptr;
            for (const SweepCell& c : cells)
                if (c.value_index == vi && c.variant == variant) cell = &c;
            out << kScenarioSchemaVersion << ',' << axis << ',' << format_double(values[vi])
                << ',' << to_string(variant) << ',';
            if (!cell->ok) {
                out << "error";
                for (int blank = 0; blank < 21; ++blank) out << ',';
                out << csv_escape(cell->error) << "\n";
                continue;
            }
            Scenario varied = apply_axis(base, axis, values[vi]);
            const std::uint32_t n_ssd = varied.hardware.n_ssd;
            out << "ok," << format_double(cell->makespan_s) << ',';
            if (serial_cell != nullptr && serial_cell->ok && cell->makespan_s > 0.0)
                out << format_double(serial_cell->makespan_s / cell->makespan_s);
            const CostBreakdown& cb = cell->plan.predicted;
            out << ',' << format_double(cb.t_f_comp) << ',' << format_double(cb.t_f_gpu) << ','
                << format_double(cb.t_f_ssd) << ',' << format_double(cb.t_f) << ','
                << format_double(cb.t_b_comp) << ',' << format_double(cb.t_o_comp) << ','
                << format_double(cb.t_bo_gpu) << ',' << format_double(cb.t_bo_ssd) << ','
                << format_double(cb.t_bo) << ',' << format_double(cb.t_iter) << ','
                << to_string(cb.bottleneck_f) << ',' << to_string(cb.bottleneck_bo) << ','
                << format_double(cell->plan.swap_coefficient) << ',' << cell->plan.d_f_bytes
                << ',' << cell->checkpoint_location << ',';
            const double tokens =
                cell->makespan_s > 0.0 ? tokens_per_second(varied.model, cell->makespan_s) : 0.0;
            out << format_double(tokens) << ',';
            if (prices.gpu > 0.0 && prices.ssd > 0.0 && cell->makespan_s > 0.0)
                out << format_double(cost_effectiveness(cell->makespan_s, varied.model, prices,
                                                        PriceScope::gpu_ssd, n_ssd));
            out << ',';
            if (prices.gpu > 0.0 && prices.ssd > 0.0 && prices.server > 0.0 &&
                cell->makespan_s > 0.0)
                out << format_double(cost_effectiveness(cell->makespan_s, varied.model, prices,
                                                        PriceScope::whole_server, n_ssd));
            out << ",\n";
        }
    }
    return out.str();
}

std::string capacity_csv(const Scenario& base, const std::vector<double>& cpu_mem_gb) {
    if (cpu_mem_gb.empty()) throw ConfigError("capacity: cpu_mem list must not be empty");

    std::vector<ModelConfig> ladder = model_ladder();
    for (ModelConfig& m : ladder) {
        m.batch_size = base.model.batch_size;
        m.seq_len = base.model.seq_len;
    }

    std::ostringstream out;
    out << "schema_version,cpu_mem_gb,policy,max_model,max_params,bottleneck\n";
    for (double gb : cpu_mem_gb) {
        if (gb <= 0.0) throw ConfigError("capacity: cpu_mem values (GB) must be > 0");
        HardwareConfig hw = base.hardware;
        hw.cpu_mem = static_cast<std::uint64_t>(gb * 1e9);
        for (PolicyId policy : {PolicyId::zero_infinity, PolicyId::two_level}) {
            const MaxTrainable mt = max_trainable(policy, hw, ladder);
            out << kScenarioSchemaVersion << ',' << format_double(gb) << ','
                << to_string(policy) << ',';
            if (mt.found)
                out << mt.model.name << ',' << total_param_count(mt.model) << ','
                    << to_string(mt.limit) << "\n";
            else
                out << "none,0," << to_string(mt.limit) << "\n";
        }
    }
    return out.str();
}

std::string validate_report_json(const Scenario& s) {
    const ValidationReport hw_report = validate(s.hardware, &s.model);
    const FootprintReport fp = footprint(s.model);
    json errors = json::array();
    for (const auto& e : hw_report.errors) errors.push_back(e);
    json warnings = json::array();
    for (const auto& w : hw_report.warnings) warnings.push_back(w);

    const json doc = {
        {"schema_version", kScenarioSchemaVersion},
        {"command", "validate"},
        {"scenario", scenario_echo(s)},
        {"hardware_validation", json{{"errors", errors}, {"warnings", warnings}}},
        {"model_footprint",
         json{
             {"total_params", fp.total_params},
             {"fp16_param_bytes", fp.fp16_param_bytes},
             {"fp16_grad_bytes", fp.fp16_grad_bytes},
             {"optimizer_state_bytes", fp.optimizer_state_bytes},
             {"model_state_bytes", fp.model_state_bytes},
             {"checkpoint_bytes_per_block", fp.checkpoint_bytes_per_block},
             {"total_checkpoint_bytes", fp.total_checkpoint_bytes},
             {"gpu_working_set_bytes", gpu_working_set_bytes(s.model)},
         }},
        {"ok", hw_report.ok()},
    };
    return doc.dump(2) + "\n";
}

} // namespace offsim
