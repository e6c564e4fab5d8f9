#pragma once

#include "offsim/hardware.hpp"
#include "offsim/planner.hpp"
#include "offsim/sim.hpp"
#include "offsim/workload.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace offsim {

inline constexpr int kScenarioSchemaVersion = 1;

/// One fully resolved experiment: model + hardware + schedule variant +
/// planner mode. The seed affects nothing but is recorded for provenance.
struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    ModelConfig model;
    HardwareConfig hardware;
    ScheduleVariant variant = ScheduleVariant::overlapped;
    PlannerOptions::Mode planner_mode = PlannerOptions::Mode::automatic;
    double planner_value = 0.0; // d_f bytes or coefficient, per mode
    std::int64_t seed = 0;
};

/// Parses a scenario document. Presets are expanded, unknown keys are
/// rejected, and the schema version must match. Throws ConfigError with
/// the offending key or parse position.
Scenario load_scenario(const std::string& json_text);

/// Serializes the resolved scenario; load(serialize(s)) == s.
std::string scenario_to_json(const Scenario& s);

const std::vector<std::string>& scenario_preset_names();
Scenario scenario_preset(const std::string& name); // throws ConfigError

} // namespace offsim
