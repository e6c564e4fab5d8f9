#pragma once

#include "offsim/capacity.hpp"
#include "offsim/scenario.hpp"
#include "offsim/sim.hpp"

#include <string>
#include <vector>

namespace offsim {

/// Dynamic checkpoint placement: checkpoints (and swapped activations)
/// stay in CPU memory when even the largest possible swap volume fits
/// beside the optimizer staging windows; otherwise they go to SSD.
/// All-or-nothing per run.
bool checkpoints_fit_cpu(const ModelConfig& model, const HardwareConfig& hw);

/// Plans with the placement the schedule builder will use for this
/// scenario's variant.
SwapPlan plan_for_scenario(const Scenario& s);

struct RunOutputs {
    SwapPlan plan;
    TaskGraph graph;
    SimTrace trace;
    InvariantReport invariants;
};

RunOutputs run_scenario(const Scenario& s);

std::string plan_report_json(const Scenario& s);

/// Summary report; when trace_json_out is non-null it receives the Chrome
/// trace for the run.
std::string simulate_summary_json(const Scenario& s, std::string* trace_json_out);

/// One row per (axis value, variant). Axis is one of batch_size, n_ssd,
/// swap_coefficient, cpu_mem (values in GB). Failing cells become error
/// rows; the sweep continues.
std::string sweep_csv(const Scenario& base, const std::string& axis,
                      const std::vector<double>& values, int workers);

/// One row per (cpu_mem value in GB, placement policy) over the preset
/// model ladder at the base scenario's batch size and sequence length.
std::string capacity_csv(const Scenario& base, const std::vector<double>& cpu_mem_gb);

std::string validate_report_json(const Scenario& s);

} // namespace offsim
