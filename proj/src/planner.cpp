#include "offsim/planner.hpp"

#include "offsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace offsim {

double swap_benefit_factor(const LayerProfile& layer) {
    // flops_fwd = coeff * b*s*h^2 with coeff in {6,2,8,8} per kind;
    // linear_htoh (coeff 2, one swap unit) is the normalization unit.
    const double coeff = layer.kind == LayerKind::linear_qkv     ? 6.0
                         : layer.kind == LayerKind::linear_htoh  ? 2.0
                         : layer.kind == LayerKind::linear_hto4h ? 8.0
                                                                 : 8.0;
    const double bsh2 = layer.flops_fwd / coeff;
    const double per_unit = layer.flops_fwd / static_cast<double>(layer.swap_time_units);
    return per_unit / (2.0 * bsh2);
}

PriorityQueues build_priority_queues(const std::vector<LayerProfile>& profiles) {
    PriorityQueues q;
    for (std::uint32_t i = 0; i < profiles.size(); ++i) {
        if (profiles[i].kind == LayerKind::linear_4htoh)
            q.high.push_back(i);
        else
            q.low.push_back(i);
    }
    return q;
}

std::vector<std::uint32_t> PriorityQueues::order() const {
    std::vector<std::uint32_t> out = high;
    out.insert(out.end(), low.begin(), low.end());
    return out;
}

SwapPlan plan_swaps(const ModelConfig& model, const HardwareConfig& hw,
                    const PlannerOptions& options) {
    model.validate();
    const ValidationReport hw_report = validate(hw);
    if (!hw_report.ok()) throw ConfigError("hardware: " + hw_report.errors.front());

    const std::uint64_t working_set = gpu_working_set_bytes(model);
    if (working_set > hw.gpu_mem) {
        std::ostringstream os;
        os << "model '" << model.name << "' cannot run at batch size " << model.batch_size
           << ": GPU working set " << working_set << " exceeds gpu_mem " << hw.gpu_mem;
        throw InfeasibleError(os.str());
    }

    const std::vector<LayerProfile> profiles = build_layer_profiles(model);
    const std::vector<std::uint32_t> order = build_priority_queues(profiles).order();
    const FootprintReport fp = footprint(model);
    const std::uint64_t intra_total = total_intra_block_act_bytes(model);

    // i = 0 baseline: one checkpoint per block, every layer recomputed.
    const CostInputs at_start = make_cost_inputs(model, {}, options.checkpoints_on_ssd);
    const SwapBudget budget = swap_budget(at_start, hw);
    const BackwardOptimizerTimes b0 = backward_optimizer_time(at_start, hw);
    const double ssd_read = aggregate_ssd_bw(hw, SsdDirection::s2c);
    const double p2 = 2.0 * at_start.total_params;

    const bool automatic = options.mode == PlannerOptions::Mode::automatic;
    double d_f_cap = std::numeric_limits<double>::infinity();
    if (options.mode == PlannerOptions::Mode::fixed_d_f) {
        d_f_cap = std::max(options.fixed_d_f_bytes, at_start.d_f);
    } else if (options.mode == PlannerOptions::Mode::fixed_coefficient) {
        if (options.fixed_coefficient < 0.0 || options.fixed_coefficient > 1.0)
            throw ConfigError("planner: fixed coefficient must be in [0, 1]");
        d_f_cap =
            at_start.d_f + options.fixed_coefficient * static_cast<double>(intra_total) + 0.5;
    }

    // Moving terms, updated per layer as the swapped prefix grows.
    double t_b_comp = b0.t_b_comp;
    double t_bo_gpu = b0.t_bo_gpu;
    double t_bo_ssd = b0.t_bo_ssd;
    double d_f = at_start.d_f;

    std::size_t best_i = 0;
    double best_t_iter = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i <= order.size(); ++i) {
        if (i > 0) {
            const LayerProfile& layer = profiles[order[i - 1]];
            // Swapping removes the layer's recompute and adds its
            // activation bytes to both transfer paths.
            t_b_comp -= layer.flops_fwd / hw.gpu_tput;
            d_f += static_cast<double>(layer.act_bytes);
            t_bo_gpu = std::max(p2 / hw.bw_gpu, (p2 + d_f) / hw.bw_gpu);
            if (options.checkpoints_on_ssd)
                t_bo_ssd += static_cast<double>(layer.act_bytes) / ssd_read;
        }
        if (automatic && i > 0 && d_f > budget.d_max_bytes) break;
        if (d_f > d_f_cap) break;

        // Full iteration estimate at this prefix; the forward side may
        // grow with d_f, so it is re-evaluated rather than delta-tracked.
        CostInputs at_i = at_start;
        at_i.d_f = d_f;
        const ForwardTimes f = forward_time(at_i, hw);
        const double t_bo = std::max({t_b_comp, b0.t_o_comp, t_bo_gpu, t_bo_ssd});
        const double t_iter = f.t_f + t_bo;
        if (automatic) {
            if (t_iter < best_t_iter) {
                best_t_iter = t_iter;
                best_i = i;
            }
        } else {
            best_i = i; // fixed modes take the longest prefix under the cap
        }
    }

    SwapPlan plan;
    plan.d_start_bytes = fp.total_checkpoint_bytes;
    plan.t_max_s = budget.t_max_s;
    plan.d_max_bytes = budget.d_max_bytes;
    plan.checkpoints_on_ssd = options.checkpoints_on_ssd;
    plan.swapped_layers.assign(order.begin(), order.begin() + static_cast<long>(best_i));
    std::uint64_t swapped_bytes = 0;
    for (std::uint32_t idx : plan.swapped_layers) swapped_bytes += profiles[idx].act_bytes;
    plan.d_f_bytes = fp.total_checkpoint_bytes + swapped_bytes;
    plan.swap_coefficient =
        intra_total == 0 ? 0.0
                         : static_cast<double>(swapped_bytes) / static_cast<double>(intra_total);
    plan.predicted =
        iteration_time(make_cost_inputs(model, plan.swapped_layers, options.checkpoints_on_ssd), hw);
    return plan;
}

} // namespace offsim
