#include "offsim/cost_model.hpp"

#include <algorithm>

namespace offsim {

const char* to_string(ForwardBottleneck b) {
    switch (b) {
    case ForwardBottleneck::gpu_compute: return "gpu_compute";
    case ForwardBottleneck::gpu_link: return "gpu_link";
    case ForwardBottleneck::ssd_link: return "ssd_link";
    }
    return "unknown";
}

const char* to_string(BackwardBottleneck b) {
    switch (b) {
    case BackwardBottleneck::gpu_compute: return "gpu_compute";
    case BackwardBottleneck::cpu_optimizer: return "cpu_optimizer";
    case BackwardBottleneck::gpu_link: return "gpu_link";
    case BackwardBottleneck::ssd_link: return "ssd_link";
    }
    return "unknown";
}

ForwardTimes forward_time(const CostInputs& in, const HardwareConfig& hw) {
    const double p2 = 2.0 * in.total_params; // fp16 parameter bytes
    const double ssd_read = aggregate_ssd_bw(hw, SsdDirection::s2c);
    const double ssd_write = aggregate_ssd_bw(hw, SsdDirection::c2s);

    ForwardTimes t;
    t.t_f_comp = in.fwd_flops / hw.gpu_tput;
    t.t_f_gpu = std::max(p2 / hw.bw_gpu, in.d_f / hw.bw_gpu);
    t.t_f_ssd = p2 / ssd_read + (in.checkpoints_on_ssd ? in.d_f / ssd_write : 0.0);
    t.t_f = std::max({t.t_f_comp, t.t_f_gpu, t.t_f_ssd});
    t.bottleneck = ForwardBottleneck::gpu_compute;
    if (t.t_f_gpu > t.t_f_comp) t.bottleneck = ForwardBottleneck::gpu_link;
    if (t.t_f_ssd > std::max(t.t_f_comp, t.t_f_gpu)) t.bottleneck = ForwardBottleneck::ssd_link;
    return t;
}

BackwardOptimizerTimes backward_optimizer_time(const CostInputs& in, const HardwareConfig& hw) {
    const double p = in.total_params;
    const double p2 = 2.0 * p;
    const double ssd_read = aggregate_ssd_bw(hw, SsdDirection::s2c);
    const double ssd_write = aggregate_ssd_bw(hw, SsdDirection::c2s);

    BackwardOptimizerTimes t;
    // Backward propagation costs twice the forward compute, plus the
    // recompute of every layer whose activation was discarded.
    t.t_b_comp = 2.0 * in.fwd_flops / hw.gpu_tput + in.recompute_flops / hw.gpu_tput;
    t.t_o_comp = p / hw.cpu_opt_tput;
    t.t_bo_gpu_g2c = p2 / hw.bw_gpu;            // gradients up
    t.t_bo_gpu_c2g = (p2 + in.d_f) / hw.bw_gpu; // parameters + checkpoints down
    t.t_bo_gpu = std::max(p2 / hw.bw_gpu, (p2 + in.d_f) / hw.bw_gpu);
    // SSD reads: fp32 states (12p) + fp16 params (2p) + checkpoints;
    // writes: updated states + params (14p).
    const double d_ssd = in.checkpoints_on_ssd ? in.d_f : 0.0;
    t.t_bo_ssd = (14.0 * p + d_ssd) / ssd_read + 14.0 * p / ssd_write;
    t.t_bo = std::max({t.t_b_comp, t.t_o_comp, t.t_bo_gpu, t.t_bo_ssd});
    t.bottleneck = BackwardBottleneck::gpu_compute;
    if (t.t_o_comp > t.t_b_comp) t.bottleneck = BackwardBottleneck::cpu_optimizer;
    if (t.t_bo_gpu > std::max(t.t_b_comp, t.t_o_comp))
        t.bottleneck = BackwardBottleneck::gpu_link;
    if (t.t_bo_ssd > std::max({t.t_b_comp, t.t_o_comp, t.t_bo_gpu}))
        t.bottleneck = BackwardBottleneck::ssd_link;
    return t;
}

CostBreakdown iteration_time(const CostInputs& in, const HardwareConfig& hw) {
    const ForwardTimes f = forward_time(in, hw);
    const BackwardOptimizerTimes b = backward_optimizer_time(in, hw);
    CostBreakdown out;
    out.t_f_comp = f.t_f_comp;
    out.t_f_gpu = f.t_f_gpu;
    out.t_f_ssd = f.t_f_ssd;
    out.t_f = f.t_f;
    out.t_b_comp = b.t_b_comp;
    out.t_o_comp = b.t_o_comp;
    out.t_bo_gpu = b.t_bo_gpu;
    out.t_bo_gpu_c2g = b.t_bo_gpu_c2g;
    out.t_bo_gpu_g2c = b.t_bo_gpu_g2c;
    out.t_bo_ssd = b.t_bo_ssd;
    out.t_bo = b.t_bo;
    out.t_iter = f.t_f + b.t_bo;
    out.d_f = in.d_f;
    out.bottleneck_f = f.bottleneck;
    out.bottleneck_bo = b.bottleneck;
    return out;
}

SwapBudget swap_budget(const CostInputs& at_start, const HardwareConfig& hw) {
    const BackwardOptimizerTimes b = backward_optimizer_time(at_start, hw);
    SwapBudget out;
    out.t_max_s = b.t_b_comp - std::max(b.t_bo_gpu, b.t_bo_ssd);
    if (out.t_max_s <= 0.0) {
        out.exhausted = true;
        out.d_max_bytes = at_start.d_f;
        return out;
    }
    const double tightest = std::min(
        {hw.bw_gpu, aggregate_ssd_bw(hw, SsdDirection::c2s), aggregate_ssd_bw(hw, SsdDirection::s2c)});
    out.d_max_bytes = out.t_max_s * tightest;
    return out;
}

CostInputs make_cost_inputs(const ModelConfig& cfg,
                            const std::vector<std::uint32_t>& swapped_layers,
                            bool checkpoints_on_ssd) {
    const std::vector<LayerProfile> profiles = build_layer_profiles(cfg);
    const FootprintReport fp = footprint(cfg);

    CostInputs in;
    in.total_params = static_cast<double>(fp.total_params);
    in.checkpoints_on_ssd = checkpoints_on_ssd;

    double total_flops = 0.0;
    for (const LayerProfile& p : profiles) total_flops += p.flops_fwd;
    total_flops += cfg.extra_flops_per_block * static_cast<double>(cfg.num_layers);
    in.fwd_flops = total_flops;

    double swapped_flops = 0.0;
    std::uint64_t swapped_bytes = 0;
    for (std::uint32_t idx : swapped_layers) {
        swapped_flops += profiles.at(idx).flops_fwd;
        swapped_bytes += profiles.at(idx).act_bytes;
    }
    // Block-extra FLOPs (attention) are always recomputed; swapping only
    // removes the linear layers' share.
    in.recompute_flops = total_flops - swapped_flops;
    in.d_f = static_cast<double>(fp.total_checkpoint_bytes + swapped_bytes);
    return in;
}

} // namespace offsim
