#include "offsim/capacity.hpp"

#include "offsim/errors.hpp"

#include <cmath>
#include <sstream>

namespace offsim {

const char* to_string(PolicyId id) {
    switch (id) {
    case PolicyId::zero_infinity: return "zero-infinity";
    case PolicyId::two_level: return "two-level";
    }
    return "unknown";
}

PolicyId policy_from_string(const std::string& s) {
    if (s == "zero-infinity") return PolicyId::zero_infinity;
    if (s == "two-level") return PolicyId::two_level;
    throw ConfigError("unknown placement policy '" + s + "'");
}

const char* to_string(CapacityBottleneck b) {
    switch (b) {
    case CapacityBottleneck::none: return "none";
    case CapacityBottleneck::ssd: return "ssd";
    case CapacityBottleneck::cpu_mem: return "cpu_mem";
    case CapacityBottleneck::gpu_mem: return "gpu_mem";
    }
    return "unknown";
}

namespace {

std::uint64_t two_level_cpu_staging(const ModelConfig& model) {
    const double block_fp16 = 12.0 * static_cast<double>(model.hidden_dim) *
                              static_cast<double>(model.hidden_dim) *
                              static_cast<double>(model.param_elem_bytes);
    // Params + gradients + optimizer states per streamed group.
    const double group_bytes = block_fp16 * (2.0 + model.optimizer_state_multiplier);
    return static_cast<std::uint64_t>(std::llround(kCpuStagingGroups * group_bytes));
}

} // namespace

PlacementBudget placement_budget(PolicyId policy, const ModelConfig& model,
                                 const HardwareConfig& hw) {
    const FootprintReport fp = footprint(model);
    PlacementBudget b;
    b.gpu_bytes = gpu_working_set_bytes(model);
    if (policy == PolicyId::zero_infinity) {
        b.ssd_bytes = fp.model_state_bytes;
        b.cpu_bytes = fp.total_checkpoint_bytes +
                      static_cast<std::uint64_t>(std::llround(
                          kZeroInfinityCpuBytesPerParam * static_cast<double>(fp.total_params)));
        b.checkpoints_on_ssd = false;
        return b;
    }
    const std::uint64_t staging = two_level_cpu_staging(model);
    const bool ckpt_in_cpu =
        staging <= hw.cpu_mem && fp.total_checkpoint_bytes <= hw.cpu_mem - staging;
    b.checkpoints_on_ssd = !ckpt_in_cpu;
    b.cpu_bytes = staging + (ckpt_in_cpu ? fp.total_checkpoint_bytes : 0);
    b.ssd_bytes = fp.model_state_bytes + (ckpt_in_cpu ? 0 : fp.total_checkpoint_bytes);
    return b;
}

Feasibility feasible(PolicyId policy, const ModelConfig& model, const HardwareConfig& hw) {
    const PlacementBudget b = placement_budget(policy, model, hw);
    Feasibility f;
    auto fail = [&](CapacityBottleneck bn, std::uint64_t need, std::uint64_t have) {
        f.ok = false;
        f.bottleneck = bn;
        std::ostringstream os;
        os << to_string(bn) << ": needs " << need << " bytes, capacity " << have;
        f.detail = os.str();
    };
    if (b.ssd_bytes > hw.ssd_capacity) {
        fail(CapacityBottleneck::ssd, b.ssd_bytes, hw.ssd_capacity);
        return f;
    }
    if (b.cpu_bytes > hw.cpu_mem) {
        fail(CapacityBottleneck::cpu_mem, b.cpu_bytes, hw.cpu_mem);
        return f;
    }
    if (b.gpu_bytes > hw.gpu_mem) {
        fail(CapacityBottleneck::gpu_mem, b.gpu_bytes, hw.gpu_mem);
        return f;
    }
    f.ok = true;
    f.bottleneck = CapacityBottleneck::none;
    return f;
}

MaxTrainable max_trainable(PolicyId policy, const HardwareConfig& hw,
                           const std::vector<ModelConfig>& candidates) {
    MaxTrainable out;
    CapacityBottleneck last_block = CapacityBottleneck::none;
    for (std::size_t i = candidates.size(); i-- > 0;) {
        const Feasibility f = feasible(policy, candidates[i], hw);
        if (f.ok) {
            out.found = true;
            out.model = candidates[i];
            out.limit = last_block;
            return out;
        }
        last_block = f.bottleneck;
    }
    out.found = false;
    out.limit = last_block;
    return out;
}

PriceTable price_table(const HardwareConfig& hw) {
    PriceTable p;
    p.gpu = hw.gpu_price_dollars;
    p.ssd = hw.ssd_price_dollars;
    p.server = hw.server_price_dollars;
    return p;
}

double tokens_per_second(const ModelConfig& model, double t_iter_s) {
    if (t_iter_s <= 0.0) throw ConfigError("tokens_per_second: iteration time must be > 0");
    return static_cast<double>(model.batch_size) * static_cast<double>(model.seq_len) / t_iter_s;
}

double cost_effectiveness(double t_iter_s, const ModelConfig& model, const PriceTable& prices,
                          PriceScope scope, std::uint32_t n_ssd) {
    if (prices.gpu <= 0.0) throw ConfigError("cost_effectiveness: gpu price must be > 0");
    if (prices.ssd <= 0.0) throw ConfigError("cost_effectiveness: ssd price must be > 0");
    double dollars = prices.gpu + prices.ssd * static_cast<double>(n_ssd);
    if (scope == PriceScope::whole_server) {
        if (prices.server <= 0.0)
            throw ConfigError("cost_effectiveness: server price must be > 0");
        dollars += prices.server;
    }
    return tokens_per_second(model, t_iter_s) / dollars;
}

} // namespace offsim
