#pragma once

#include "offsim/cost_model.hpp"
#include "offsim/hardware.hpp"
#include "offsim/workload.hpp"

#include <cstdint>
#include <vector>

namespace offsim {

/// Which activations to swap out (instead of recomputing), chosen to
/// minimize the predicted iteration time.
struct SwapPlan {
    std::uint64_t d_start_bytes = 0; // one checkpoint per block
    std::uint64_t d_f_bytes = 0;     // d_start + swapped activation bytes
    double d_max_bytes = 0.0;
    double t_max_s = 0.0;
    /// Indices into build_layer_profiles order; always a prefix of the
    /// swap priority order.
    std::vector<std::uint32_t> swapped_layers;
    /// Swapped intra-block activation bytes over all intra-block
    /// activation bytes, in [0, 1].
    double swap_coefficient = 0.0;
    bool checkpoints_on_ssd = true;
    CostBreakdown predicted;
};

/// Recompute FLOPs saved per unit of swap time, normalized so that
/// linear_htoh scores 1. linear_4htoh scores 4 (small activation, large
/// recompute), everything else 1.
double swap_benefit_factor(const LayerProfile& layer);

/// Swap priority: every linear_4htoh first (block order), then the
/// remaining layers in block order. Entries are profile indices.
struct PriorityQueues {
    std::vector<std::uint32_t> high;
    std::vector<std::uint32_t> low;
    std::vector<std::uint32_t> order() const; // high then low
};
PriorityQueues build_priority_queues(const std::vector<LayerProfile>& profiles);

struct PlannerOptions {
    enum class Mode : std::uint8_t { automatic, fixed_d_f, fixed_coefficient };
    Mode mode = Mode::automatic;
    double fixed_d_f_bytes = 0.0;    // for Mode::fixed_d_f
    double fixed_coefficient = 0.0;  // for Mode::fixed_coefficient, in [0, 1]
    bool checkpoints_on_ssd = true;
};

/// Sweeps swapped-prefix sizes i = 0..L, evaluating the full iteration
/// estimate per prefix via per-layer deltas, and returns the feasible
/// argmin (ties toward smaller i). Throws InfeasibleError when the model's
/// working set cannot fit in GPU memory at this batch size.
SwapPlan plan_swaps(const ModelConfig& model, const HardwareConfig& hw,
                    const PlannerOptions& options = {});

} // namespace offsim
