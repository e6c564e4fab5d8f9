#pragma once

#include "offsim/hardware.hpp"
#include "offsim/workload.hpp"

#include <string>
#include <vector>

namespace offsim {

/// Storage-placement policies compared by the capacity analyzer.
///   zero_infinity  model states on SSD, activation checkpoints pinned to
///                  CPU memory, plus per-parameter CPU staging buffers.
///   two_level      model states and (when CPU space is short) checkpoints
///                  on SSD; CPU holds only streaming windows.
enum class PolicyId : std::uint8_t { zero_infinity, two_level };
const char* to_string(PolicyId id);
PolicyId policy_from_string(const std::string& s); // throws ConfigError

/// CPU bytes per parameter that the zero_infinity policy pins for staging
/// and intermediates. Calibration constant; see README.
inline constexpr double kZeroInfinityCpuBytesPerParam = 5.0;

/// Model-state groups the two_level policy keeps in flight in CPU memory
/// (read-ahead, update, write-back, headroom).
inline constexpr double kCpuStagingGroups = 4.0;

enum class CapacityBottleneck : std::uint8_t { none, ssd, cpu_mem, gpu_mem };
const char* to_string(CapacityBottleneck b);

/// Byte budgets a (policy, model) pair requires per location.
struct PlacementBudget {
    std::uint64_t ssd_bytes = 0;
    std::uint64_t cpu_bytes = 0;
    std::uint64_t gpu_bytes = 0;
    bool checkpoints_on_ssd = false;
};
PlacementBudget placement_budget(PolicyId policy, const ModelConfig& model,
                                 const HardwareConfig& hw);

struct Feasibility {
    bool ok = false;
    CapacityBottleneck bottleneck = CapacityBottleneck::none;
    std::string detail;
};

/// Checks the location budgets in order ssd, cpu, gpu and reports the
/// first violated one.
Feasibility feasible(PolicyId policy, const ModelConfig& model, const HardwareConfig& hw);

struct MaxTrainable {
    bool found = false;
    ModelConfig model; // valid when found
    /// What blocked the next-larger candidate (or everything, when none
    /// fit); none when the whole ladder fits.
    CapacityBottleneck limit = CapacityBottleneck::none;
};

/// Largest feasible candidate; `candidates` must be sorted ascending by
/// parameter count.
MaxTrainable max_trainable(PolicyId policy, const HardwareConfig& hw,
                           const std::vector<ModelConfig>& candidates);

/// Component prices in dollars.
struct PriceTable {
    double gpu = 0.0;
    double ssd = 0.0; // per device
    double server = 0.0;
};
PriceTable price_table(const HardwareConfig& hw);

enum class PriceScope : std::uint8_t { gpu_ssd, whole_server };

double tokens_per_second(const ModelConfig& model, double t_iter_s);

/// Training throughput per dollar of the priced components. Throws
/// ConfigError on non-positive prices or iteration time.
double cost_effectiveness(double t_iter_s, const ModelConfig& model, const PriceTable& prices,
                          PriceScope scope, std::uint32_t n_ssd);

} // namespace offsim
