#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace offsim {

/// The four linear layers of one transformer block, in execution order.
/// Attention-score math is folded into an optional per-block FLOP extra;
/// only the linears produce activations that are candidates for swapping.
enum class LayerKind : std::uint8_t {
    linear_qkv,   // h -> 3h projection, output (b, s, 3h)
    linear_htoh,  // h -> h  projection, output (b, s, h)
    linear_hto4h, // h -> 4h MLP up,     output (b, s, 4h)
    linear_4htoh, // 4h -> h MLP down,   output (b, s, h)
};

const char* to_string(LayerKind kind);

/// Transformer shape plus the element-size knobs that turn counts into bytes.
struct ModelConfig {
    std::string name;
    std::uint32_t num_layers = 1; // transformer blocks
    std::uint32_t num_heads = 1;
    std::uint64_t hidden_dim = 1;
    std::uint64_t batch_size = 1;
    std::uint64_t seq_len = 1;

    // fp16 weights by default; optimizer state is 6x the fp16 bytes
    // (fp32 params + two fp32 Adam moments = 12 bytes per 2-byte weight).
    std::uint32_t param_elem_bytes = 2;
    double optimizer_state_multiplier = 6.0;

    // Activation accounting defaults to one byte per element so that a
    // (b, s, h) tensor occupies b*s*h bytes; set to 2 for fp16 realism.
    std::uint32_t activation_elem_bytes = 1;

    // Extra forward FLOPs per block (e.g. attention scores ~ b*s^2*h),
    // excluded from the default accounting which covers the linears only.
    double extra_flops_per_block = 0.0;

    /// Throws ConfigError when a field violates its invariant.
    void validate() const;
};

/// Per-layer sizes and costs derived from a ModelConfig.
struct LayerProfile {
    std::uint32_t block_index = 0;
    LayerKind kind = LayerKind::linear_qkv;
    std::uint64_t act_bytes = 0;   // output activation
    std::uint64_t param_bytes = 0; // weight bytes at param_elem_bytes
    double flops_fwd = 0.0;
    std::uint32_t swap_time_units = 1; // multiples of the unit swap time t_s
};

/// Aggregate memory footprint of model states and activation checkpoints.
struct FootprintReport {
    std::uint64_t total_params = 0;          // p
    std::uint64_t fp16_param_bytes = 0;      // p * param_elem_bytes
    std::uint64_t fp16_grad_bytes = 0;       // same size as the weights
    std::uint64_t optimizer_state_bytes = 0; // fp16_param_bytes * multiplier
    std::uint64_t model_state_bytes = 0;     // params + grads + optimizer states
    std::uint64_t checkpoint_bytes_per_block = 0; // b * s * h * act elem
    std::uint64_t total_checkpoint_bytes = 0;     // one checkpoint per block
};

/// p = 12 * l * h^2: the four block linears hold 3h^2 + h^2 + 4h^2 + 4h^2
/// weights. Embeddings and layer norms are excluded from the accounting.
std::uint64_t total_param_count(const ModelConfig& cfg);

/// Expands a config into 4 * num_layers profiles, blocks in order and
/// layers in execution order within each block. FLOPs follow the dense
/// 2 * b * s * in * out rule, giving the 6:2:8:8 ratio across the kinds.
std::vector<LayerProfile> build_layer_profiles(const ModelConfig& cfg);

FootprintReport footprint(const ModelConfig& cfg);

/// Sum of all intra-block output activations: b * s * 9h bytes per block
/// (3h + h + 4h + h). This is the denominator of the swap coefficient.
std::uint64_t total_intra_block_act_bytes(const ModelConfig& cfg);

/// GPU bytes that must stay resident while one block computes: a small
/// number of block-sized weight buffers (active weights, gradients,
/// prefetch slot, autograd temporaries) plus the block's live activations.
/// Used as the baseline for FIFO sizing and for capacity feasibility.
std::uint64_t gpu_working_set_bytes(const ModelConfig& cfg);

/// Weight buffers kept resident in gpu_working_set_bytes, in units of one
/// block's weights. Calibration constant; see README.
inline constexpr double kResidentBlockMultiplier = 4.0;

} // namespace offsim
