#pragma once

#include "offsim/hardware.hpp"
#include "offsim/workload.hpp"

#include <cstdint>
#include <vector>

namespace offsim {

// Closed-form iteration-time estimate for one training step with model
// states resident on SSD and a CPU-run optimizer overlapped with backward
// propagation. Each stage is the max of its resource times:
//
//   forward            compute F/Tput | GPU link max(2p, D_f)/BW
//                      | SSD link 2p read + D_f write
//   backward+optimizer GPU compute 2F/Tput + RC | CPU optimizer p/Tput_o
//                      | GPU link max(2p, 2p + D_f)/BW
//                      | SSD link (14p + D_f) read + 14p write
//
// with p fp16-parameter bytes 2p, optimizer-state bytes 12p, checkpoint
// bytes D_f (same volume out in forward and back in backward), and RC the
// recompute time of the layers whose activations were not swapped.

enum class ForwardBottleneck : std::uint8_t { gpu_compute, gpu_link, ssd_link };
enum class BackwardBottleneck : std::uint8_t { gpu_compute, cpu_optimizer, gpu_link, ssd_link };

const char* to_string(ForwardBottleneck b);
const char* to_string(BackwardBottleneck b);

/// Workload summary feeding the closed forms. Derived from a model and a
/// swap plan in normal use; tests may populate it directly.
struct CostInputs {
    double total_params = 0.0;     // p
    double fwd_flops = 0.0;        // full forward FLOPs, recompute included
    double recompute_flops = 0.0;  // FLOPs re-run in backward (unswapped layers)
    double d_f = 0.0;              // checkpoint bytes moved one way
    // When checkpoints live in CPU memory instead of SSD, the D_f terms
    // drop off the SSD link (the GPU-link terms stay).
    bool checkpoints_on_ssd = true;
};

struct ForwardTimes {
    double t_f = 0.0;
    double t_f_comp = 0.0;
    double t_f_gpu = 0.0;
    double t_f_ssd = 0.0;
    ForwardBottleneck bottleneck = ForwardBottleneck::gpu_compute;
};

struct BackwardOptimizerTimes {
    double t_bo = 0.0;
    double t_b_comp = 0.0;
    double t_o_comp = 0.0;
    double t_bo_gpu = 0.0;
    double t_bo_ssd = 0.0;
    // Duplex split of the GPU link during the overlapped stage: parameters
    // plus restored checkpoints downstream, gradients upstream. Their max
    // equals t_bo_gpu; both are recorded for inspection.
    double t_bo_gpu_c2g = 0.0;
    double t_bo_gpu_g2c = 0.0;
    BackwardBottleneck bottleneck = BackwardBottleneck::gpu_compute;
};

/// Flat per-term report for one iteration.
struct CostBreakdown {
    double t_f_comp = 0.0;
    double t_f_gpu = 0.0;
    double t_f_ssd = 0.0;
    double t_f = 0.0;
    double t_b_comp = 0.0;
    double t_o_comp = 0.0;
    double t_bo_gpu = 0.0;
    double t_bo_gpu_c2g = 0.0;
    double t_bo_gpu_g2c = 0.0;
    double t_bo_ssd = 0.0;
    double t_bo = 0.0;
    double t_iter = 0.0;
    double d_f = 0.0;
    ForwardBottleneck bottleneck_f = ForwardBottleneck::gpu_compute;
    BackwardBottleneck bottleneck_bo = BackwardBottleneck::gpu_compute;
};

ForwardTimes forward_time(const CostInputs& in, const HardwareConfig& hw);
BackwardOptimizerTimes backward_optimizer_time(const CostInputs& in, const HardwareConfig& hw);
CostBreakdown iteration_time(const CostInputs& in, const HardwareConfig& hw);

/// Swap-volume budget: the backward-compute slack over the larger of the
/// two communication terms, converted to bytes at the tightest link.
/// t_max <= 0 means no budget and d_max pins to the starting volume.
struct SwapBudget {
    double t_max_s = 0.0;
    double d_max_bytes = 0.0;
    bool exhausted = false;
};

/// `at_start` must describe the default one-checkpoint-per-block volume
/// (d_f = D_start).
SwapBudget swap_budget(const CostInputs& at_start, const HardwareConfig& hw);

/// Builds CostInputs for a model with the given swapped layer set.
/// `swapped` holds indices into build_layer_profiles(cfg) order.
CostInputs make_cost_inputs(const ModelConfig& cfg,
                            const std::vector<std::uint32_t>& swapped_layers,
                            bool checkpoints_on_ssd = true);

} // namespace offsim
