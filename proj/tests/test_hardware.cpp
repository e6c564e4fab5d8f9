#include "offsim/hardware.hpp"
#include "offsim/presets.hpp"
#include "offsim/workload.hpp"

#include <doctest.h>

using namespace offsim;

TEST_SUITE_BEGIN("hardware");

TEST_CASE("validate rejects non-positive fields by name") {
    HardwareConfig hw = hardware_preset("a100-12ssd");
    hw.n_ssd = 0;
    const ValidationReport r = validate(hw);
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors.front() == "n_ssd must be >= 1");

    HardwareConfig zero{};
    const ValidationReport all = validate(zero);
    CHECK(all.errors.size() >= 8);
}

TEST_CASE("the machine presets validate clean") {
    for (const auto& name : hardware_preset_names()) {
        const ValidationReport r = validate(hardware_preset(name));
        CHECK(r.ok());
        CHECK(r.warnings.empty());
    }
    const HardwareConfig a100 = hardware_preset("a100-12ssd");
    CHECK(a100.n_ssd == 12);
    CHECK(a100.cpu_mem == 768ull * 1000 * 1000 * 1000);
}

TEST_CASE("pairing a model warns when the SSD array is too small") {
    HardwareConfig hw = hardware_preset("a100-12ssd");
    hw.ssd_capacity = 1000ull * 1000 * 1000 * 1000; // 1 TB
    const ModelConfig big = model_preset("gpt3-175b");
    const ValidationReport r = validate(hw, &big);
    CHECK(r.ok());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings.front().find("ssd_capacity") != std::string::npos);

    // 16p for this model is ~2.78e12 > 1e12.
    CHECK(footprint(big).model_state_bytes > hw.ssd_capacity);
}

TEST_CASE("aggregate SSD bandwidth is linear in the device count") {
    HardwareConfig hw = hardware_preset("a100-12ssd");
    hw.bw_s2c = 6e9;
    hw.bw_c2s = 3e9;

    hw.n_ssd = 4;
    CHECK(aggregate_ssd_bw(hw, SsdDirection::s2c) == doctest::Approx(2.4e10));
    hw.n_ssd = 1;
    CHECK(aggregate_ssd_bw(hw, SsdDirection::c2s) == doctest::Approx(3e9));
    hw.n_ssd = 12;
    CHECK(aggregate_ssd_bw(hw, SsdDirection::s2c) == doctest::Approx(7.2e10));

    for (std::uint32_t n = 1; n <= 16; ++n) {
        hw.n_ssd = n;
        CHECK(aggregate_ssd_bw(hw, SsdDirection::s2c) == doctest::Approx(6e9 * n));
        CHECK(aggregate_ssd_bw(hw, SsdDirection::c2s) == doctest::Approx(3e9 * n));
    }
}

TEST_SUITE_END();
