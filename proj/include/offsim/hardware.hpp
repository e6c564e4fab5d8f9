#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace offsim {

struct ModelConfig;

/// Machine description. The GPU link is duplex (independent capacity per
/// direction); the SSD array is simplex (one direction at a time) with
/// per-device bandwidth scaled by the device count.
struct HardwareConfig {
    std::string name;
    double bw_gpu = 0.0; // bytes/s per direction, GPU<->CPU
    double bw_s2c = 0.0; // bytes/s per SSD, SSD->CPU (read)
    double bw_c2s = 0.0; // bytes/s per SSD, CPU->SSD (write)
    std::uint32_t n_ssd = 1;
    std::uint64_t gpu_mem = 0;
    std::uint64_t cpu_mem = 0;
    std::uint64_t ssd_capacity = 0; // total across the array
    double gpu_tput = 0.0;          // sustained FLOP/s
    double cpu_opt_tput = 0.0;      // optimizer params/s on the CPU

    // Component prices for cost-effectiveness reports; 0 means unknown.
    double gpu_price_dollars = 0.0;
    double ssd_price_dollars = 0.0;    // per device
    double server_price_dollars = 0.0; // chassis without GPU and SSDs
};

enum class SsdDirection : std::uint8_t { s2c, c2s };

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Field-by-field invariant check. When a model is paired, also warns if
/// the SSD array cannot hold that model's states (16p at defaults).
ValidationReport validate(const HardwareConfig& hw, const ModelConfig* paired_model = nullptr);

/// Per-SSD bandwidth times device count for one direction.
double aggregate_ssd_bw(const HardwareConfig& hw, SsdDirection dir);

} // namespace offsim
