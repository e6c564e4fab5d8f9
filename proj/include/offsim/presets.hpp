#pragma once

#include "offsim/hardware.hpp"
#include "offsim/workload.hpp"

#include <string>
#include <vector>

namespace offsim {

/// Named GPT-3-family shapes (layers/heads/hidden), sequence length 1024,
/// batch size 1. Scenario files override batch size as needed.
const std::vector<std::string>& model_preset_names();
ModelConfig model_preset(const std::string& name); // throws ConfigError

/// Named machines. Bandwidths are calibration defaults for a PCIe Gen4
/// commodity server with a datacenter-SSD array; see README for the
/// derivation of the sustained-throughput numbers.
const std::vector<std::string>& hardware_preset_names();
HardwareConfig hardware_preset(const std::string& name); // throws ConfigError

/// The model presets sorted ascending by parameter count; the default
/// candidate ladder for capacity analysis.
std::vector<ModelConfig> model_ladder();

} // namespace offsim
