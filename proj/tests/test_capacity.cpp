#include "offsim/capacity.hpp"
#include "offsim/errors.hpp"
#include "offsim/presets.hpp"

#include <doctest.h>

using namespace offsim;

namespace {

HardwareConfig a100() { return hardware_preset("a100-12ssd"); }
HardwareConfig rtx4090() { return hardware_preset("rtx4090-12ssd"); }

std::uint64_t gb(double v) { return static_cast<std::uint64_t>(v * 1e9); }

} // namespace

TEST_SUITE_BEGIN("capacity");

TEST_CASE("model states beyond the SSD array fail on ssd") {
    HardwareConfig hw = a100();
    hw.ssd_capacity = gb(1000); // 1 TB
    const Feasibility f = feasible(PolicyId::two_level, model_preset("gpt3-175b"), hw);
    CHECK_FALSE(f.ok);
    CHECK(f.bottleneck == CapacityBottleneck::ssd);
}

TEST_CASE("cpu-resident checkpoints cap the zero-infinity policy") {
    const Feasibility f = feasible(PolicyId::zero_infinity, model_preset("gpt3-175b"), a100());
    CHECK_FALSE(f.ok);
    CHECK(f.bottleneck == CapacityBottleneck::cpu_mem);

    // The two-level policy fits the full ladder on this machine.
    const Feasibility big = feasible(PolicyId::two_level, model_preset("gpt3-805b"), a100());
    CHECK(big.ok);
}

TEST_CASE("max trainable ordering at the evaluation machine") {
    const auto ladder = model_ladder();
    const MaxTrainable zi = max_trainable(PolicyId::zero_infinity, a100(), ladder);
    const MaxTrainable two = max_trainable(PolicyId::two_level, a100(), ladder);
    REQUIRE(zi.found);
    REQUIRE(two.found);
    CHECK(zi.model.name == "gpt3-135b");
    CHECK(two.model.name == "gpt3-805b");
    CHECK(total_param_count(two.model) >= 2 * total_param_count(zi.model));
}

TEST_CASE("unbounded cpu memory leaves ssd or gpu as the limit") {
    HardwareConfig hw = a100();
    hw.cpu_mem = 1ull << 60;
    const auto ladder = model_ladder();
    for (PolicyId policy : {PolicyId::zero_infinity, PolicyId::two_level}) {
        const MaxTrainable mt = max_trainable(policy, hw, ladder);
        REQUIRE(mt.found);
        CHECK(mt.model.name == "gpt3-805b");
        CHECK(mt.limit == CapacityBottleneck::none);
    }
}

TEST_CASE("shrinking gpu memory never raises the max") {
    const auto ladder = model_ladder();
    HardwareConfig hw = a100();
    std::uint64_t prev = 1ull << 62;
    for (double mem_gb : {80.0, 48.0, 24.0, 16.0}) {
        hw.gpu_mem = gb(mem_gb);
        const MaxTrainable mt = max_trainable(PolicyId::two_level, hw, ladder);
        const std::uint64_t p = mt.found ? total_param_count(mt.model) : 0;
        CHECK(p <= prev);
        prev = p;
    }
    // The 24 GB point lands on the GPU working-set limit.
    hw.gpu_mem = gb(24);
    const MaxTrainable mt = max_trainable(PolicyId::two_level, hw, ladder);
    REQUIRE(mt.found);
    CHECK(mt.model.name == "gpt3-276b");
    CHECK(mt.limit == CapacityBottleneck::gpu_mem);
}

TEST_CASE("max trainable is monotone in every capacity") {
    const auto ladder = model_ladder();
    HardwareConfig hw = rtx4090();
    auto params_at = [&](const HardwareConfig& h) {
        const MaxTrainable mt = max_trainable(PolicyId::two_level, h, ladder);
        return mt.found ? total_param_count(mt.model) : 0;
    };
    for (double c : {64.0, 128.0, 256.0, 512.0, 1024.0}) {
        HardwareConfig more = hw;
        more.cpu_mem = gb(c);
        HardwareConfig even_more = more;
        even_more.cpu_mem = gb(c * 2);
        CHECK(params_at(more) <= params_at(even_more));
    }
    HardwareConfig small_ssd = hw;
    small_ssd.ssd_capacity = gb(2000);
    CHECK(params_at(small_ssd) <= params_at(hw));
}

TEST_CASE("two-level ssd budget is model states plus checkpoints when ssd-placed") {
    ModelConfig m = model_preset("gpt3-65b");
    m.batch_size = 16;
    HardwareConfig hw = a100();
    hw.cpu_mem = gb(1); // force checkpoints off the CPU
    const PlacementBudget b = placement_budget(PolicyId::two_level, m, hw);
    CHECK(b.checkpoints_on_ssd);
    CHECK(b.ssd_bytes == footprint(m).model_state_bytes + footprint(m).total_checkpoint_bytes);
}

TEST_CASE("cost effectiveness arithmetic and scaling") {
    ModelConfig m = model_preset("gpt3-13b");
    m.batch_size = 32;
    m.seq_len = 1024;
    CHECK(tokens_per_second(m, 2.0) == doctest::Approx(16384.0));

    PriceTable prices;
    prices.gpu = 1600.0;
    prices.ssd = 308.0;
    prices.server = 14098.0;
    const double per_dollar = cost_effectiveness(2.0, m, prices, PriceScope::gpu_ssd, 12);
    CHECK(per_dollar == doctest::Approx(16384.0 / 5296.0));

    PriceTable doubled = prices;
    doubled.gpu *= 2;
    doubled.ssd *= 2;
    doubled.server *= 2;
    CHECK(cost_effectiveness(2.0, m, doubled, PriceScope::gpu_ssd, 12) ==
          doctest::Approx(per_dollar / 2.0));
    CHECK(cost_effectiveness(2.0, m, doubled, PriceScope::whole_server, 12) ==
          doctest::Approx(cost_effectiveness(2.0, m, prices, PriceScope::whole_server, 12) / 2));

    PriceTable missing = prices;
    missing.gpu = 0.0;
    CHECK_THROWS_AS(cost_effectiveness(2.0, m, missing, PriceScope::gpu_ssd, 12), ConfigError);
    CHECK_THROWS_AS(tokens_per_second(m, 0.0), ConfigError);
}

TEST_SUITE_END();
