#include "offsim/workload.hpp"

#include "offsim/errors.hpp"

#include <cmath>

namespace offsim {

const char* to_string(LayerKind kind) {
    switch (kind) {
    case LayerKind::linear_qkv: return "linear_qkv";
    case LayerKind::linear_htoh: return "linear_htoh";
    case LayerKind::linear_hto4h: return "linear_hto4h";
    case LayerKind::linear_4htoh: return "linear_4htoh";
    }
    return "unknown";
}

void ModelConfig::validate() const {
    if (num_layers < 1) throw ConfigError("model: num_layers must be >= 1");
    if (num_heads < 1) throw ConfigError("model: num_heads must be >= 1");
    if (hidden_dim < 1) throw ConfigError("model: hidden_dim must be >= 1");
    if (batch_size < 1) throw ConfigError("model: batch_size must be >= 1");
    if (seq_len < 1) throw ConfigError("model: seq_len must be >= 1");
    if (param_elem_bytes < 1) throw ConfigError("model: param_elem_bytes must be >= 1");
    if (activation_elem_bytes < 1)
        throw ConfigError("model: activation_elem_bytes must be >= 1");
    if (optimizer_state_multiplier <= 0.0)
        throw ConfigError("model: optimizer_state_multiplier must be > 0");
    if (extra_flops_per_block < 0.0)
        throw ConfigError("model: extra_flops_per_block must be >= 0");
    if (hidden_dim % num_heads != 0)
        throw ConfigError("model: hidden_dim must be divisible by num_heads");
}

std::uint64_t total_param_count(const ModelConfig& cfg) {
    return 12ull * cfg.num_layers * cfg.hidden_dim * cfg.hidden_dim;
}

std::vector<LayerProfile> build_layer_profiles(const ModelConfig& cfg) {
    const std::uint64_t h = cfg.hidden_dim;
    const double bsh2 = static_cast<double>(cfg.batch_size) * static_cast<double>(cfg.seq_len) *
                        static_cast<double>(h) * static_cast<double>(h);
    const std::uint64_t bs_act =
        cfg.batch_size * cfg.seq_len * static_cast<std::uint64_t>(cfg.activation_elem_bytes);

    struct KindSpec {
        LayerKind kind;
        std::uint64_t act_h_mult;   // output width in units of h
        std::uint64_t param_h2;     // weights in units of h^2
        double flop_coeff;          // forward FLOPs in units of b*s*h^2
        std::uint32_t swap_units;   // swap time in units of t_s
    };
    // Activation ratio 3:1:4:1 and FLOP ratio 6:2:8:8 across the kinds.
    static constexpr KindSpec kSpecs[4] = {
        {LayerKind::linear_qkv, 3, 3, 6.0, 3},
        {LayerKind::linear_htoh, 1, 1, 2.0, 1},
        {LayerKind::linear_hto4h, 4, 4, 8.0, 4},
        {LayerKind::linear_4htoh, 1, 4, 8.0, 1},
    };

    std::vector<LayerProfile> out;
    out.reserve(4ull * cfg.num_layers);
    for (std::uint32_t block = 0; block < cfg.num_layers; ++block) {
        for (const KindSpec& spec : kSpecs) {
            LayerProfile p;
            p.block_index = block;
            p.kind = spec.kind;
            p.act_bytes = bs_act * spec.act_h_mult * h;
            p.param_bytes = spec.param_h2 * h * h * cfg.param_elem_bytes;
            p.flops_fwd = spec.flop_coeff * bsh2;
            p.swap_time_units = spec.swap_units;
            out.push_back(p);
        }
    }
    return out;
}

FootprintReport footprint(const ModelConfig& cfg) {
    FootprintReport r;
    r.total_params = total_param_count(cfg);
    r.fp16_param_bytes = r.total_params * cfg.param_elem_bytes;
    r.fp16_grad_bytes = r.fp16_param_bytes;
    r.optimizer_state_bytes = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(r.fp16_param_bytes) * cfg.optimizer_state_multiplier));
    r.model_state_bytes = r.fp16_param_bytes + r.fp16_grad_bytes + r.optimizer_state_bytes;
    r.checkpoint_bytes_per_block =
        cfg.batch_size * cfg.seq_len * cfg.hidden_dim * cfg.activation_elem_bytes;
    r.total_checkpoint_bytes = r.checkpoint_bytes_per_block * cfg.num_layers;
    return r;
}

std::uint64_t total_intra_block_act_bytes(const ModelConfig& cfg) {
    return cfg.num_layers * cfg.batch_size * cfg.seq_len * 9ull * cfg.hidden_dim *
           cfg.activation_elem_bytes;
}

std::uint64_t gpu_working_set_bytes(const ModelConfig& cfg) {
    const std::uint64_t block_param_bytes =
        12ull * cfg.hidden_dim * cfg.hidden_dim * cfg.param_elem_bytes;
    const std::uint64_t block_act_bytes =
        cfg.batch_size * cfg.seq_len * 9ull * cfg.hidden_dim * cfg.activation_elem_bytes;
    const std::uint64_t ckpt_bytes =
        cfg.batch_size * cfg.seq_len * cfg.hidden_dim * cfg.activation_elem_bytes;
    const auto resident = static_cast<std::uint64_t>(
        std::llround(kResidentBlockMultiplier * static_cast<double>(block_param_bytes)));
    return resident + block_act_bytes + ckpt_bytes;
}

} // namespace offsim
