#include "offsim/cost_model.hpp"
#include "offsim/presets.hpp"

#include <doctest.h>

#include <random>

using namespace offsim;

namespace {

// The hand-derived scenario family: 1e9 parameters, forward compute of
// 0.5 s, duplex GPU link at 16 GB/s, SSDs at 6/3 GB/s each.
HardwareConfig family_hw(std::uint32_t n_ssd) {
    HardwareConfig hw;
    hw.name = "family";
    hw.bw_gpu = 16e9;
    hw.bw_s2c = 6e9;
    hw.bw_c2s = 3e9;
    hw.n_ssd = n_ssd;
    hw.gpu_mem = 16ull << 30;
    hw.cpu_mem = 64ull << 30;
    hw.ssd_capacity = 1ull << 44;
    hw.gpu_tput = 2e12;
    hw.cpu_opt_tput = 2e9;
    return hw;
}

CostInputs family_inputs(double d_f) {
    CostInputs in;
    in.total_params = 1e9;
    in.fwd_flops = 1e12;       // 0.5 s at 2e12 FLOP/s
    in.recompute_flops = 1e12; // full recompute
    in.d_f = d_f;
    return in;
}

constexpr double kRel = 1e-9;

bool close(double a, double b) { return std::abs(a - b) <= kRel * std::max(std::abs(a), 1.0); }

} // namespace

TEST_SUITE_BEGIN("cost_model");

TEST_CASE("forward times at zero and non-zero swap volume") {
    const HardwareConfig hw = family_hw(4);
    const ForwardTimes t0 = forward_time(family_inputs(0.0), hw);
    CHECK(close(t0.t_f_comp, 0.5));
    CHECK(close(t0.t_f_gpu, 0.125));
    CHECK(close(t0.t_f_ssd, 2e9 / 2.4e10));
    CHECK(close(t0.t_f, 0.5));
    CHECK(t0.bottleneck == ForwardBottleneck::gpu_compute);

    // With no checkpoints in flight, the GPU-link term is exactly the
    // parameter download.
    CHECK(t0.t_f_gpu == doctest::Approx(2.0 * 1e9 / hw.bw_gpu).epsilon(kRel));

    const ForwardTimes t4 = forward_time(family_inputs(4e9), hw);
    CHECK(close(t4.t_f_gpu, 0.25));
    CHECK(close(t4.t_f_ssd, 2e9 / 2.4e10 + 4e9 / 1.2e10));
    CHECK(close(t4.t_f, 0.5)); // still compute-bound
}

TEST_CASE("backward+optimizer times across the SSD counts") {
    const BackwardOptimizerTimes b4 = backward_optimizer_time(family_inputs(0.0), family_hw(4));
    CHECK(close(b4.t_b_comp, 1.5));
    CHECK(close(b4.t_o_comp, 0.5));
    CHECK(close(b4.t_bo_gpu, 0.125));
    CHECK(close(b4.t_bo_ssd, 14e9 / 2.4e10 + 14e9 / 1.2e10));
    CHECK(close(b4.t_bo, 1.75));
    CHECK(b4.bottleneck == BackwardBottleneck::ssd_link);

    // All layers swapped: backward compute is exactly twice forward.
    CostInputs all_swapped = family_inputs(0.0);
    all_swapped.recompute_flops = 0.0;
    CHECK(close(backward_optimizer_time(all_swapped, family_hw(4)).t_b_comp, 1.0));

    const BackwardOptimizerTimes b12 = backward_optimizer_time(family_inputs(0.0), family_hw(12));
    CHECK(close(b12.t_bo_ssd, 14e9 / 7.2e10 + 14e9 / 3.6e10));
    CHECK(close(b12.t_bo, 1.5));
    CHECK(b12.bottleneck == BackwardBottleneck::gpu_compute);
}

TEST_CASE("iteration time composes the two stages") {
    CHECK(close(iteration_time(family_inputs(0.0), family_hw(4)).t_iter, 2.25));
    CHECK(close(iteration_time(family_inputs(0.0), family_hw(12)).t_iter, 2.0));

    // Vanishing model: only the compute terms remain.
    CostInputs tiny = family_inputs(0.0);
    tiny.total_params = 0.0;
    const CostBreakdown c = iteration_time(tiny, family_hw(4));
    CHECK(close(c.t_iter, tiny.fwd_flops / 2e12 + c.t_b_comp));
    CHECK(close(c.t_bo, std::max(c.t_b_comp, c.t_o_comp)));
}

TEST_CASE("swap budget") {
    const SwapBudget exhausted = swap_budget(family_inputs(0.0), family_hw(4));
    CHECK(close(exhausted.t_max_s, 1.5 - 1.75));
    CHECK(exhausted.exhausted);
    CHECK(exhausted.d_max_bytes == 0.0); // pinned to the starting volume

    const SwapBudget open = swap_budget(family_inputs(0.0), family_hw(12));
    CHECK(close(open.t_max_s, 1.5 - 14e9 / 7.2e10 - 14e9 / 3.6e10));
    CHECK_FALSE(open.exhausted);
    CHECK(close(open.d_max_bytes, open.t_max_s * 16e9));
    CHECK(open.d_max_bytes == doctest::Approx(1.4666666667e10).epsilon(1e-6));

    // Exactly balanced: no budget either.
    CostInputs balanced = family_inputs(0.0);
    HardwareConfig hw = family_hw(12);
    // Make max(t_bo_gpu, t_bo_ssd) equal t_b_comp by slowing the GPU link.
    hw.bw_gpu = 2.0 * 1e9 / 1.5;
    balanced.d_f = 0.0;
    const SwapBudget boundary = swap_budget(balanced, hw);
    CHECK(close(boundary.t_max_s, 0.0));
    CHECK(boundary.exhausted);
    CHECK(boundary.d_max_bytes == balanced.d_f);
}

TEST_CASE("monotonicity and scaling properties") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> d_f_dist(0.0, 1e11);
    const HardwareConfig hw = family_hw(4);
    double prev_d = 0.0;
    CostBreakdown prev = iteration_time(family_inputs(0.0), hw);
    for (int step = 1; step <= 40; ++step) {
        const double d = prev_d + d_f_dist(rng) / 40.0;
        CostInputs in = family_inputs(d);
        // More swap means less recompute.
        in.recompute_flops = 1e12 * std::max(0.0, 1.0 - d / 1e11);
        const CostBreakdown c = iteration_time(in, hw);
        CHECK(c.t_f_gpu >= prev.t_f_gpu);
        CHECK(c.t_f_ssd >= prev.t_f_ssd);
        CHECK(c.t_bo_gpu >= prev.t_bo_gpu);
        CHECK(c.t_bo_ssd >= prev.t_bo_ssd);
        CHECK(c.t_b_comp <= prev.t_b_comp);
        CHECK(c.t_bo_gpu >= c.t_f_gpu); // gradients ride on top of params
        prev = c;
        prev_d = d;
    }

    // Halving a bandwidth doubles its term exactly.
    HardwareConfig slow = hw;
    slow.bw_gpu /= 2.0;
    const CostBreakdown fast_c = iteration_time(family_inputs(3e9), hw);
    const CostBreakdown slow_c = iteration_time(family_inputs(3e9), slow);
    CHECK(close(slow_c.t_f_gpu, 2.0 * fast_c.t_f_gpu));
    CHECK(close(slow_c.t_bo_gpu, 2.0 * fast_c.t_bo_gpu));
}

TEST_CASE("cost inputs derived from a model") {
    const ModelConfig m = model_preset("gpt3-13b");
    const CostInputs in = make_cost_inputs(m, {});
    CHECK(in.total_params == doctest::Approx(1.2582912e10));
    // 24 * b * s * h^2 per block.
    const double expected_flops = 24.0 * 1.0 * 1024.0 * 5120.0 * 5120.0 * 40.0;
    CHECK(in.fwd_flops == doctest::Approx(expected_flops));
    CHECK(in.recompute_flops == doctest::Approx(expected_flops));
    CHECK(in.d_f == doctest::Approx(40.0 * 1024.0 * 5120.0));

    // Swapping every layer erases the recompute share.
    std::vector<std::uint32_t> all;
    for (std::uint32_t i = 0; i < 160; ++i) all.push_back(i);
    const CostInputs swapped = make_cost_inputs(m, all);
    CHECK(swapped.recompute_flops == doctest::Approx(0.0));
}

TEST_SUITE_END();
