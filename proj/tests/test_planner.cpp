#include "offsim/errors.hpp"
#include "offsim/planner.hpp"
#include "offsim/presets.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace offsim;

namespace {

ModelConfig small_model(std::uint32_t blocks, std::uint64_t h, std::uint64_t b,
                        std::uint64_t s) {
    ModelConfig m;
    m.name = "synthetic";
    m.num_layers = blocks;
    m.num_heads = 1;
    m.hidden_dim = h;
    m.batch_size = b;
    m.seq_len = s;
    return m;
}

HardwareConfig base_hw() {
    HardwareConfig hw;
    hw.name = "bench";
    hw.bw_gpu = 16e9;
    hw.bw_s2c = 6e9;
    hw.bw_c2s = 3e9;
    hw.n_ssd = 4;
    hw.gpu_mem = 64ull << 30;
    hw.cpu_mem = 256ull << 30;
    hw.ssd_capacity = 1ull << 46;
    hw.gpu_tput = 1e13;
    hw.cpu_opt_tput = 1e9;
    return hw;
}

// Independent prefix oracle: evaluates every prefix from scratch through
// the public cost model and returns (best index, best time).
std::pair<std::size_t, double> best_prefix_oracle(const ModelConfig& m, const HardwareConfig& hw,
                                                  bool ckpt_on_ssd = true) {
    const auto profiles = build_layer_profiles(m);
    const auto order = build_priority_queues(profiles).order();
    const CostInputs start = make_cost_inputs(m, {}, ckpt_on_ssd);
    const SwapBudget budget = swap_budget(start, hw);
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> prefix;
    for (std::size_t i = 0; i <= order.size(); ++i) {
        if (i > 0) prefix.push_back(order[i - 1]);
        const CostInputs in = make_cost_inputs(m, prefix, ckpt_on_ssd);
        if (i > 0 && in.d_f > budget.d_max_bytes) break;
        const double t = iteration_time(in, hw).t_iter;
        if (t < best) {
            best = t;
            best_i = i;
        }
    }
    return {best_i, best};
}

} // namespace

TEST_SUITE_BEGIN("planner");

TEST_CASE("swap benefit factor matches the published ratios") {
    const auto profiles = build_layer_profiles(small_model(1, 64, 2, 16));
    CHECK(swap_benefit_factor(profiles[0]) == doctest::Approx(1.0)); // qkv
    CHECK(swap_benefit_factor(profiles[1]) == doctest::Approx(1.0)); // htoh
    CHECK(swap_benefit_factor(profiles[2]) == doctest::Approx(1.0)); // hto4h
    CHECK(swap_benefit_factor(profiles[3]) == doctest::Approx(4.0)); // 4htoh
}

TEST_CASE("priority queues split by kind, block order preserved") {
    const auto profiles = build_layer_profiles(small_model(2, 8, 1, 1));
    const PriorityQueues q = build_priority_queues(profiles);
    REQUIRE(q.high.size() == 2);
    REQUIRE(q.low.size() == 6);
    CHECK(profiles[q.high[0]].block_index == 0);
    CHECK(profiles[q.high[1]].block_index == 1);
    for (std::uint32_t idx : q.high) CHECK(profiles[idx].kind == LayerKind::linear_4htoh);

    const PriorityQueues empty = build_priority_queues({});
    CHECK(empty.high.empty());
    CHECK(empty.low.empty());

    // The global order starts with a 4htoh layer for any model.
    for (std::uint32_t blocks : {1u, 3u, 7u}) {
        const auto p = build_layer_profiles(small_model(blocks, 16, 2, 4));
        const auto order = build_priority_queues(p).order();
        REQUIRE_FALSE(order.empty());
        CHECK(p[order.front()].kind == LayerKind::linear_4htoh);
    }
}

TEST_CASE("planner matches the independent prefix oracle") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<std::uint32_t> blocks(1, 24);
    std::uniform_int_distribution<int> h_pick(0, 3);
    const std::uint64_t hs[] = {256, 512, 1024, 2048};
    std::uniform_int_distribution<std::uint64_t> batch(1, 32);
    std::uniform_real_distribution<double> tput(5e11, 5e13);
    std::uniform_real_distribution<double> opt_tput(2e8, 4e9);

    for (int trial = 0; trial < 60; ++trial) {
        const ModelConfig m = small_model(blocks(rng), hs[h_pick(rng)], batch(rng), 256);
        HardwareConfig hw = base_hw();
        hw.gpu_tput = tput(rng);
        hw.cpu_opt_tput = opt_tput(rng);
        hw.n_ssd = 1 + (trial % 12);

        const SwapPlan plan = plan_swaps(m, hw);
        const auto [oracle_i, oracle_t] = best_prefix_oracle(m, hw);
        CHECK(plan.swapped_layers.size() == oracle_i);
        CHECK(plan.predicted.t_iter ==
              doctest::Approx(oracle_t).epsilon(1e-9)); // delta bookkeeping drift-free
        // Never worse than not swapping, and the constraint holds.
        const double at_zero = iteration_time(make_cost_inputs(m, {}), hw).t_iter;
        CHECK(plan.predicted.t_iter <= at_zero + 1e-12);
        CHECK(plan.d_f_bytes >= plan.d_start_bytes);
        if (!plan.swapped_layers.empty())
            CHECK(static_cast<double>(plan.d_f_bytes) <= plan.d_max_bytes * (1 + 1e-12));
    }
}

TEST_CASE("prefix of priority order is as good as exhaustive subsets") {
    // Transformer-like proportions: parameter traffic well above single
    // activation steps, as in the published shapes.
    std::mt19937 rng(77);
    std::uniform_int_distribution<std::uint32_t> blocks(1, 3);
    std::uniform_int_distribution<std::uint64_t> batch(1, 8);
    const std::uint64_t hs[] = {512, 1024, 2048};
    std::uniform_int_distribution<int> h_pick(0, 2);
    std::uniform_real_distribution<double> tput(1e11, 2e13);

    for (int trial = 0; trial < 40; ++trial) {
        const ModelConfig m = small_model(blocks(rng), hs[h_pick(rng)], batch(rng), 256);
        HardwareConfig hw = base_hw();
        hw.gpu_tput = tput(rng);
        hw.n_ssd = 1 + (trial % 12);

        const auto profiles = build_layer_profiles(m);
        const std::size_t n = profiles.size();
        REQUIRE(n <= 12);
        const CostInputs start = make_cost_inputs(m, {});
        const SwapBudget budget = swap_budget(start, hw);

        double best_subset = std::numeric_limits<double>::infinity();
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<std::uint32_t> subset;
            for (std::uint32_t bit = 0; bit < n; ++bit)
                if (mask & (1u << bit)) subset.push_back(bit);
            const CostInputs in = make_cost_inputs(m, subset);
            if (!subset.empty() && in.d_f > budget.d_max_bytes) continue;
            best_subset = std::min(best_subset, iteration_time(in, hw).t_iter);
        }

        const SwapPlan plan = plan_swaps(m, hw);
        CHECK(plan.predicted.t_iter <= best_subset * 1.02);
    }
}

TEST_CASE("behavior anchors") {
    // Communication/optimizer-bound: no swapping wins.
    ModelConfig m = model_preset("gpt3-13b");
    m.batch_size = 32;
    const HardwareConfig a100 = hardware_preset("a100-12ssd");
    PlannerOptions cpu_resident;
    cpu_resident.checkpoints_on_ssd = false;
    const SwapPlan bound = plan_swaps(m, a100, cpu_resident);
    CHECK(bound.swap_coefficient == 0.0);
    CHECK(bound.swapped_layers.empty());

    // Compute-bound: swapping strictly helps.
    ModelConfig small = small_model(4, 1024, 8, 512);
    HardwareConfig slow_gpu = base_hw();
    slow_gpu.gpu_tput = 5e11;
    slow_gpu.n_ssd = 12;
    const SwapPlan fast = plan_swaps(small, slow_gpu);
    CHECK(fast.swapped_layers.size() > 0);
    const double at_zero = iteration_time(make_cost_inputs(small, {}), slow_gpu).t_iter;
    CHECK(fast.predicted.t_iter < at_zero);

    // Infinitely fast GPU: recompute is free, swapping only adds traffic.
    HardwareConfig infinite = base_hw();
    infinite.gpu_tput = 1e30;
    const SwapPlan none = plan_swaps(small, infinite);
    CHECK(none.swapped_layers.empty());
}

TEST_CASE("fixed planner modes honor their targets") {
    const ModelConfig m = small_model(6, 512, 8, 256);
    const HardwareConfig hw = base_hw();
    const std::uint64_t intra = total_intra_block_act_bytes(m);

    PlannerOptions coeff;
    coeff.mode = PlannerOptions::Mode::fixed_coefficient;
    coeff.fixed_coefficient = 0.4;
    const SwapPlan p = plan_swaps(m, hw, coeff);
    CHECK(p.swap_coefficient <= 0.4 + 1e-12);
    // Within one layer activation of the request.
    const auto profiles = build_layer_profiles(m);
    std::uint64_t max_act = 0;
    for (const auto& lp : profiles) max_act = std::max(max_act, lp.act_bytes);
    CHECK(0.4 - p.swap_coefficient <=
          static_cast<double>(max_act) / static_cast<double>(intra) + 1e-12);

    PlannerOptions full;
    full.mode = PlannerOptions::Mode::fixed_coefficient;
    full.fixed_coefficient = 1.0;
    CHECK(plan_swaps(m, hw, full).swap_coefficient == doctest::Approx(1.0));

    PlannerOptions bad;
    bad.mode = PlannerOptions::Mode::fixed_coefficient;
    bad.fixed_coefficient = 1.5;
    CHECK_THROWS_AS(plan_swaps(m, hw, bad), ConfigError);

    // Fixed byte targets clamp to the starting volume from below and take
    // the longest prefix that stays under the cap.
    PlannerOptions bytes;
    bytes.mode = PlannerOptions::Mode::fixed_d_f;
    bytes.fixed_d_f_bytes = 0.0;
    const SwapPlan at_start = plan_swaps(m, hw, bytes);
    CHECK(at_start.d_f_bytes == at_start.d_start_bytes);
    bytes.fixed_d_f_bytes =
        static_cast<double>(footprint(m).total_checkpoint_bytes) + 2.0e6;
    const SwapPlan two_meg = plan_swaps(m, hw, bytes);
    CHECK(two_meg.d_f_bytes >= two_meg.d_start_bytes);
    CHECK(static_cast<double>(two_meg.d_f_bytes) <= bytes.fixed_d_f_bytes + 1.0);
}

TEST_CASE("working set beyond GPU memory is infeasible") {
    const ModelConfig big = model_preset("gpt3-412b");
    const HardwareConfig small_gpu = hardware_preset("rtx4090-12ssd");
    CHECK_THROWS_AS(plan_swaps(big, small_gpu), InfeasibleError);
}

TEST_SUITE_END();
