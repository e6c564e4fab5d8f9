#include "offsim/errors.hpp"
#include "offsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace offsim {

const char* to_string(ResourceId id) {
    switch (id) {
    case ResourceId::gpu_compute: return "gpu_compute";
    case ResourceId::cpu_compute: return "cpu_compute";
    case ResourceId::link_c2g: return "link_c2g";
    case ResourceId::link_g2c: return "link_g2c";
    case ResourceId::link_ssd: return "link_ssd";
    case ResourceId::mem_gpu: return "mem_gpu";
    case ResourceId::mem_cpu: return "mem_cpu";
    }
    return "unknown";
}

const char* to_string(TaskKind kind) {
    switch (kind) {
    case TaskKind::compute: return "compute";
    case TaskKind::transfer: return "transfer";
    case TaskKind::optimizer_update: return "optimizer_update";
    }
    return "unknown";
}

const char* to_string(TransferDir dir) {
    switch (dir) {
    case TransferDir::none: return "none";
    case TransferDir::s2c: return "s2c";
    case TransferDir::c2s: return "c2s";
    case TransferDir::c2g: return "c2g";
    case TransferDir::g2c: return "g2c";
    }
    return "unknown";
}

const char* to_string(Payload p) {
    switch (p) {
    case Payload::none: return "none";
    case Payload::params: return "params";
    case Payload::grads: return "grads";
    case Payload::opt_states: return "opt_states";
    case Payload::activations: return "activations";
    }
    return "unknown";
}

const char* to_string(ScheduleVariant v) {
    switch (v) {
    case ScheduleVariant::serial: return "serial";
    case ScheduleVariant::pipelined: return "pipelined";
    case ScheduleVariant::overlapped: return "overlapped";
    }
    return "unknown";
}

ScheduleVariant schedule_variant_from_string(const std::string& s) {
    if (s == "serial") return ScheduleVariant::serial;
    if (s == "pipelined") return ScheduleVariant::pipelined;
    if (s == "overlapped") return ScheduleVariant::overlapped;
    throw ConfigError("unknown schedule variant '" + s + "'");
}

namespace {

constexpr std::uint32_t kNone = 0xffffffff;

/// Appends tasks; in serial mode every task also depends on the one
/// created before it, which forces the fully chained schedule.
class GraphBuilder {
public:
    GraphBuilder(TaskGraph& graph, bool serial_chain)
        : graph_(graph), serial_chain_(serial_chain) {}

    std::uint32_t add(std::string name, TaskKind kind, ResourceId resource, TransferDir dir,
                      Payload payload, double work, std::vector<std::uint32_t> deps,
                      std::vector<MemEffect> effects) {
        Task t;
        t.id = static_cast<std::uint32_t>(graph_.tasks.size());
        t.name = std::move(name);
        t.kind = kind;
        t.resource = resource;
        t.dir = dir;
        t.payload = payload;
        t.work = work;
        if (serial_chain_ && t.id > 0) deps.push_back(t.id - 1);
        deps.erase(std::remove(deps.begin(), deps.end(), kNone), deps.end());
        std::sort(deps.begin(), deps.end());
        deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
        t.deps = std::move(deps);
        t.mem_effects = std::move(effects);
        graph_.tasks.push_back(std::move(t));
        return graph_.tasks.back().id;
    }

private:
    TaskGraph& graph_;
    bool serial_chain_;
};

std::string layer_label(const LayerProfile& p) {
    std::ostringstream os;
    os << "b" << p.block_index << " " << to_string(p.kind);
    return os.str();
}

MemEffect gpu_delta(std::int64_t bytes, bool at_start) {
    return MemEffect{ResourceId::mem_gpu, bytes, at_start};
}
MemEffect cpu_delta(std::int64_t bytes, bool at_start) {
    return MemEffect{ResourceId::mem_cpu, bytes, at_start};
}

} // namespace

TaskGraph build_schedule(const ModelConfig& model, const HardwareConfig& hw,
                         const SwapPlan& plan, ScheduleVariant variant,
                         const BuildOptions& options) {
    model.validate();
    {
        const ValidationReport r = validate(hw);
        if (!r.ok()) throw ConfigError("hardware: " + r.errors.front());
    }

    const std::vector<LayerProfile> profiles = build_layer_profiles(model);
    const FootprintReport fp = footprint(model);
    const std::uint32_t num_blocks = model.num_layers;
    const std::uint32_t num_linears = static_cast<std::uint32_t>(profiles.size());

    std::vector<bool> swapped(num_linears, false);
    for (std::uint32_t idx : plan.swapped_layers) swapped.at(idx) = true;

    const bool serial = variant == ScheduleVariant::serial;
    const bool overlapped = variant == ScheduleVariant::overlapped;
    // The serial schedule keeps checkpoints in CPU memory; the pipelined
    // ones follow the plan's dynamic placement decision.
    const bool ckpt_on_ssd = !serial && plan.checkpoints_on_ssd;

    const std::uint64_t working_set = gpu_working_set_bytes(model);
    if (working_set > hw.gpu_mem) {
        std::ostringstream os;
        os << "GPU working set " << working_set << " exceeds gpu_mem " << hw.gpu_mem;
        throw InfeasibleError(os.str());
    }
    const std::uint64_t fifo = hw.gpu_mem - working_set;

    // Largest unit the prefetcher must hold at once.
    std::uint64_t max_unit = fp.checkpoint_bytes_per_block;
    std::uint32_t max_unit_layer = 0;
    std::uint64_t max_param_unit = 0;
    for (std::uint32_t i = 0; i < num_linears; ++i) {
        max_param_unit = std::max(max_param_unit, profiles[i].param_bytes);
        std::uint64_t unit = profiles[i].param_bytes;
        if (swapped[i]) unit = std::max(unit, profiles[i].act_bytes);
        if (unit > max_unit) {
            max_unit = unit;
            max_unit_layer = i;
        }
    }
    if (fifo < max_unit) {
        std::ostringstream os;
        os << "GPU FIFO capacity " << fifo << " cannot hold the prefetch unit of layer "
           << layer_label(profiles[max_unit_layer]) << " (" << max_unit << " bytes)";
        throw InfeasibleError(os.str());
    }

    const std::uint64_t block_param_bytes =
        12ull * model.hidden_dim * model.hidden_dim * model.param_elem_bytes;
    const std::uint64_t block_opt_bytes = static_cast<std::uint64_t>(std::llround(
        static_cast<double>(block_param_bytes) * model.optimizer_state_multiplier));
    const double block_param_count = 12.0 * static_cast<double>(model.hidden_dim) *
                                     static_cast<double>(model.hidden_dim);

    // Per-block restore volume in backward: checkpoint plus swapped acts.
    std::uint64_t max_block_restore = 0;
    for (std::uint32_t k = 0; k < num_blocks; ++k) {
        std::uint64_t v = fp.checkpoint_bytes_per_block;
        for (std::uint32_t j = 0; j < 4; ++j)
            if (swapped[4 * k + j]) v += profiles[4 * k + j].act_bytes;
        max_block_restore = std::max(max_block_restore, v);
    }

    auto window = [](std::uint64_t budget, std::uint64_t unit, std::uint32_t lo,
                     std::uint32_t hi) {
        const std::uint64_t w = unit == 0 ? hi : budget / unit;
        return static_cast<std::uint32_t>(std::clamp<std::uint64_t>(w, lo, hi));
    };
    // Forward prefetch depth in layers, offload drain window in blocks and
    // backward prefetch depth in blocks, each against a slice of the FIFO.
    // The backward window is additionally capped at a few blocks: releasing
    // every block's restores at the phase boundary would interleave all
    // recompute chains and stall the gradient stream the optimizer feeds on.
    const std::uint32_t w_prefetch = window(fifo * 2 / 5, max_param_unit, 1, num_linears);
    const std::uint32_t w_offload = window(fifo / 2, max_block_restore, 1, num_blocks);
    const std::uint32_t w_bwd_blocks = window(fifo / 2, block_param_bytes + max_block_restore,
                                              1, std::min<std::uint32_t>(num_blocks, 4));

    // CPU-side staging queue scales with the bandwidth ratio of the two
    // hops, capped to a quarter of CPU memory.
    const double ssd_read_bw = aggregate_ssd_bw(hw, SsdDirection::s2c);
    const double queue_ratio = hw.bw_gpu / ssd_read_bw;
    const std::uint64_t cpu_queue_bytes =
        std::min(static_cast<std::uint64_t>(static_cast<double>(fifo) * queue_ratio),
                 hw.cpu_mem / 4);
    const std::uint32_t w_stage = window(cpu_queue_bytes, max_param_unit, 1, num_linears);

    // The serial baseline has no SSD fallback for its checkpoints; reject
    // it up front when they cannot sit in CPU memory. The pipelined
    // variants follow the placement decision and the engine's memory
    // accounting catches any remaining overcommit.
    const std::uint64_t cpu_staging =
        4 * (block_param_bytes * 2 + block_opt_bytes) + cpu_queue_bytes;
    if (serial && plan.d_f_bytes + cpu_staging > hw.cpu_mem) {
        std::ostringstream os;
        os << "checkpoints (" << plan.d_f_bytes << " bytes) plus staging (" << cpu_staging
           << ") exceed cpu_mem " << hw.cpu_mem << " with CPU-resident placement";
        throw InfeasibleError(os.str());
    }

    TaskGraph graph;
    graph.header.variant = variant;
    graph.header.model_name = model.name;
    graph.header.hardware_name = hw.name;
    graph.header.checkpoint_location = ckpt_on_ssd ? "ssd" : "cpu";
    graph.header.fp16_param_bytes = fp.fp16_param_bytes;
    graph.header.gpu_fifo_bytes = fifo;
    graph.header.prefetch_window_layers = w_prefetch;
    graph.header.offload_window_blocks = w_offload;
    graph.header.cpu_stage_window_layers = w_stage;
    graph.header.forward_only = options.forward_only;
    // Two of the working set's block-weight slots are modeled explicitly
    // by transfer/compute effects (active weights, gradients); the static
    // reservation keeps the rest (temporaries, live activations).
    graph.initial_mem[ResourceId::mem_gpu] =
        static_cast<std::int64_t>(working_set - 2 * block_param_bytes);
    graph.initial_mem[ResourceId::mem_cpu] = 0;

    GraphBuilder b(graph, serial);

    const auto act_bytes = [&](std::uint32_t i) {
        return static_cast<std::int64_t>(profiles[i].act_bytes);
    };
    const auto param_bytes = [&](std::uint32_t i) {
        return static_cast<std::int64_t>(profiles[i].param_bytes);
    };
    const std::int64_t ckpt_bytes = static_cast<std::int64_t>(fp.checkpoint_bytes_per_block);

    // ---------------- forward ----------------
    std::vector<std::uint32_t> fwd_comp(num_linears, kNone);
    std::vector<std::uint32_t> ckpt_out(num_blocks, kNone); // last offload hop per block
    std::vector<std::uint32_t> ckpt_g2c(num_blocks, kNone);
    std::vector<std::uint32_t> act_out(num_linears, kNone);
    std::vector<std::uint32_t> act_g2c(num_linears, kNone);

    for (std::uint32_t i = 0; i < num_linears; ++i) {
        const std::uint32_t k = i / 4;
        const std::uint32_t j = i % 4;
        const std::string label = layer_label(profiles[i]);

        std::vector<std::uint32_t> s2c_deps;
        if (!serial && i >= w_prefetch + w_stage)
            s2c_deps.push_back(fwd_comp[i - w_prefetch - w_stage]);
        const std::uint32_t s2c =
            b.add("fwd p_s2c " + label, TaskKind::transfer, ResourceId::link_ssd,
                  TransferDir::s2c, Payload::params, static_cast<double>(profiles[i].param_bytes),
                  std::move(s2c_deps), {cpu_delta(param_bytes(i), false)});

        std::vector<std::uint32_t> c2g_deps{s2c};
        if (!serial && i >= w_prefetch) c2g_deps.push_back(fwd_comp[i - w_prefetch]);
        const std::uint32_t c2g =
            b.add("fwd p_c2g " + label, TaskKind::transfer, ResourceId::link_c2g,
                  TransferDir::c2g, Payload::params, static_cast<double>(profiles[i].param_bytes),
                  std::move(c2g_deps),
                  {gpu_delta(param_bytes(i), true), cpu_delta(-param_bytes(i), false)});

        std::vector<std::uint32_t> comp_deps{c2g};
        if (i > 0) comp_deps.push_back(fwd_comp[i - 1]);
        if (!serial && j == 0 && k >= w_offload) comp_deps.push_back(ckpt_g2c[k - w_offload]);
        std::vector<MemEffect> comp_fx{gpu_delta(-param_bytes(i), false)};
        if (swapped[i]) comp_fx.push_back(gpu_delta(act_bytes(i), false));
        double comp_work = profiles[i].flops_fwd;
        if (j == 3) {
            comp_fx.push_back(gpu_delta(ckpt_bytes, false));
            comp_work += model.extra_flops_per_block;
        }
        fwd_comp[i] = b.add("fwd compute " + label, TaskKind::compute, ResourceId::gpu_compute,
                            TransferDir::none, Payload::none, comp_work, std::move(comp_deps),
                            std::move(comp_fx));

        if (swapped[i]) {
            act_g2c[i] = b.add("fwd act_g2c " + label, TaskKind::transfer, ResourceId::link_g2c,
                               TransferDir::g2c, Payload::activations,
                               static_cast<double>(profiles[i].act_bytes), {fwd_comp[i]},
                               {cpu_delta(act_bytes(i), true), gpu_delta(-act_bytes(i), false)});
            act_out[i] = act_g2c[i];
            if (ckpt_on_ssd)
                act_out[i] = b.add("fwd act_c2s " + label, TaskKind::transfer,
                                   ResourceId::link_ssd, TransferDir::c2s, Payload::activations,
                                   static_cast<double>(profiles[i].act_bytes), {act_g2c[i]},
                                   {cpu_delta(-act_bytes(i), false)});
        }
        if (j == 3) {
            std::ostringstream ck;
            ck << "b" << k;
            ckpt_g2c[k] = b.add("fwd ckpt_g2c " + ck.str(), TaskKind::transfer,
                                ResourceId::link_g2c, TransferDir::g2c, Payload::activations,
                                static_cast<double>(fp.checkpoint_bytes_per_block), {fwd_comp[i]},
                                {cpu_delta(ckpt_bytes, true), gpu_delta(-ckpt_bytes, false)});
            ckpt_out[k] = ckpt_g2c[k];
            if (ckpt_on_ssd)
                ckpt_out[k] = b.add("fwd ckpt_c2s " + ck.str(), TaskKind::transfer,
                                    ResourceId::link_ssd, TransferDir::c2s, Payload::activations,
                                    static_cast<double>(fp.checkpoint_bytes_per_block),
                                    {ckpt_g2c[k]}, {cpu_delta(-ckpt_bytes, false)});
        }
    }
    const std::uint32_t fwd_last = fwd_comp[num_linears - 1];

    if (options.forward_only) return graph;

    // ---------------- backward, blocks in reverse ----------------
    std::vector<std::uint32_t> bwd_block_done(num_blocks, kNone);
    std::vector<std::uint32_t> grad_g2c(num_blocks, kNone);
    std::vector<std::uint32_t> grad_c2s(num_blocks, kNone);

    const std::int64_t grad_block = static_cast<std::int64_t>(block_param_bytes);

    for (std::uint32_t m = 0; m < num_blocks; ++m) {
        const std::uint32_t kb = num_blocks - 1 - m;
        // Prefetch gate: wait until the block w_bwd_blocks ahead (in
        // processing order) has finished its backward computes.
        const std::uint32_t gate =
            (!serial && m >= w_bwd_blocks) ? bwd_block_done[kb + w_bwd_blocks] : fwd_last;

        std::vector<std::uint32_t> bwd_c2g(4, kNone);
        for (std::uint32_t j = 0; j < 4; ++j) {
            const std::uint32_t i = 4 * kb + j;
            const std::string label = layer_label(profiles[i]);
            const std::uint32_t s2c = b.add(
                "bwd p_s2c " + label, TaskKind::transfer, ResourceId::link_ssd, TransferDir::s2c,
                Payload::params, static_cast<double>(profiles[i].param_bytes),
                serial ? std::vector<std::uint32_t>{} : std::vector<std::uint32_t>{gate},
                {cpu_delta(param_bytes(i), false)});
            bwd_c2g[j] =
                b.add("bwd p_c2g " + label, TaskKind::transfer, ResourceId::link_c2g,
                      TransferDir::c2g, Payload::params,
                      static_cast<double>(profiles[i].param_bytes), {s2c},
                      {gpu_delta(param_bytes(i), true), cpu_delta(-param_bytes(i), false)});
        }

        // Checkpoint restore (block input).
        std::ostringstream ck;
        ck << "b" << kb;
        std::uint32_t ck_src = ckpt_out[kb];
        if (ckpt_on_ssd)
            ck_src = b.add("bwd ckpt_s2c " + ck.str(), TaskKind::transfer, ResourceId::link_ssd,
                           TransferDir::s2c, Payload::activations,
                           static_cast<double>(fp.checkpoint_bytes_per_block),
                           serial ? std::vector<std::uint32_t>{ckpt_out[kb]}
                                  : std::vector<std::uint32_t>{ckpt_out[kb], gate},
                           {cpu_delta(ckpt_bytes, false)});
        const std::uint32_t ck_c2g =
            b.add("bwd ckpt_c2g " + ck.str(), TaskKind::transfer, ResourceId::link_c2g,
                  TransferDir::c2g, Payload::activations,
                  static_cast<double>(fp.checkpoint_bytes_per_block),
                  (ckpt_on_ssd || serial) ? std::vector<std::uint32_t>{ck_src}
                                          : std::vector<std::uint32_t>{ck_src, gate},
                  {gpu_delta(ckpt_bytes, true), cpu_delta(-ckpt_bytes, false)});

        // Swapped-activation restores.
        std::vector<std::uint32_t> act_c2g(4, kNone);
        for (std::uint32_t j = 0; j < 4; ++j) {
            const std::uint32_t i = 4 * kb + j;
            if (!swapped[i]) continue;
            const std::string label = layer_label(profiles[i]);
            std::uint32_t src = act_out[i];
            if (ckpt_on_ssd)
                src = b.add("bwd act_s2c " + label, TaskKind::transfer, ResourceId::link_ssd,
                            TransferDir::s2c, Payload::activations,
                            static_cast<double>(profiles[i].act_bytes),
                            serial ? std::vector<std::uint32_t>{act_out[i]}
                                   : std::vector<std::uint32_t>{act_out[i], gate},
                            {cpu_delta(act_bytes(i), false)});
            act_c2g[j] =
                b.add("bwd act_c2g " + label, TaskKind::transfer, ResourceId::link_c2g,
                      TransferDir::c2g, Payload::activations,
                      static_cast<double>(profiles[i].act_bytes),
                      (ckpt_on_ssd || serial) ? std::vector<std::uint32_t>{src}
                                              : std::vector<std::uint32_t>{src, gate},
                      {gpu_delta(act_bytes(i), true), cpu_delta(-act_bytes(i), false)});
        }

        // Recompute of discarded activations, in forward order.
        std::vector<std::uint32_t> act_src(4, kNone); // producer of layer j's output
        std::uint32_t prev_src = ck_c2g;              // block input
        for (std::uint32_t j = 0; j < 4; ++j) {
            const std::uint32_t i = 4 * kb + j;
            if (swapped[i]) {
                act_src[j] = act_c2g[j];
                prev_src = act_c2g[j];
                continue;
            }
            const std::string label = layer_label(profiles[i]);
            double work = profiles[i].flops_fwd;
            if (j == 3) work += model.extra_flops_per_block;
            act_src[j] = b.add("bwd recompute " + label, TaskKind::compute,
                               ResourceId::gpu_compute, TransferDir::none, Payload::none, work,
                               {bwd_c2g[j], prev_src}, {});
            prev_src = act_src[j];
        }

        // Backward computes, last layer first. Layer j consumes its own
        // output gradient and the input activation produced by j-1 (the
        // checkpoint for j = 0).
        std::uint32_t grad_in = (kb == num_blocks - 1) ? fwd_last : bwd_block_done[kb + 1];
        for (std::int32_t j = 3; j >= 0; --j) {
            const std::uint32_t i = 4 * kb + static_cast<std::uint32_t>(j);
            const std::string label = layer_label(profiles[i]);
            std::vector<std::uint32_t> deps{bwd_c2g[static_cast<std::uint32_t>(j)], grad_in};
            deps.push_back(j == 0 ? ck_c2g : act_src[static_cast<std::uint32_t>(j - 1)]);
            if (swapped[i]) deps.push_back(act_c2g[static_cast<std::uint32_t>(j)]);
            std::vector<MemEffect> fx{gpu_delta(-param_bytes(i), false)};
            if (swapped[i]) fx.push_back(gpu_delta(-act_bytes(i), false));
            double work = 2.0 * profiles[i].flops_fwd;
            if (j == 3) work += 2.0 * model.extra_flops_per_block;
            if (j == 0) {
                fx.push_back(gpu_delta(-ckpt_bytes, false));
                fx.push_back(gpu_delta(grad_block, false));
            }
            grad_in = b.add("bwd compute " + label, TaskKind::compute, ResourceId::gpu_compute,
                            TransferDir::none, Payload::none, work, std::move(deps),
                            std::move(fx));
        }
        bwd_block_done[kb] = grad_in;

        grad_g2c[kb] = b.add("bwd grad_g2c " + ck.str(), TaskKind::transfer, ResourceId::link_g2c,
                             TransferDir::g2c, Payload::grads,
                             static_cast<double>(block_param_bytes), {bwd_block_done[kb]},
                             {cpu_delta(grad_block, true), gpu_delta(-grad_block, false)});
        if (!overlapped)
            grad_c2s[kb] = b.add("bwd grad_c2s " + ck.str(), TaskKind::transfer,
                                 ResourceId::link_ssd, TransferDir::c2s, Payload::grads,
                                 static_cast<double>(block_param_bytes), {grad_g2c[kb]},
                                 {cpu_delta(-grad_block, false)});
    }

    // ---------------- optimizer, one group per block ----------------
    const std::int64_t opt_block = static_cast<std::int64_t>(block_opt_bytes);
    std::vector<std::uint32_t> upd(num_blocks, kNone);
    const std::uint32_t bwd_all_done = overlapped ? kNone : grad_c2s[0];

    for (std::uint32_t m = 0; m < num_blocks; ++m) {
        const std::uint32_t kb = num_blocks - 1 - m;
        std::ostringstream gname;
        gname << "g" << kb;

        // Read gate: two groups in flight ahead of the update pipeline, so
        // group m's read overlaps update m-1 and write m-2.
        std::vector<std::uint32_t> read_gate;
        if (overlapped) {
            read_gate.push_back(m >= 2 ? grad_g2c[num_blocks - 1 - (m - 2)] : fwd_last);
        } else if (!serial) {
            read_gate.push_back(bwd_all_done);
        }
        if (!serial && m >= 2) read_gate.push_back(upd[num_blocks - 1 - (m - 2)]);

        std::uint32_t grad_read = kNone;
        if (!overlapped) {
            std::vector<std::uint32_t> deps = read_gate;
            deps.push_back(grad_c2s[kb]);
            grad_read = b.add("opt grad_s2c " + gname.str(), TaskKind::transfer,
                              ResourceId::link_ssd, TransferDir::s2c, Payload::grads,
                              static_cast<double>(block_param_bytes), std::move(deps),
                              {cpu_delta(grad_block, false)});
        }

        const std::uint32_t state_read =
            b.add("opt state_s2c " + gname.str(), TaskKind::transfer, ResourceId::link_ssd,
                  TransferDir::s2c, Payload::opt_states, static_cast<double>(block_opt_bytes),
                  std::vector<std::uint32_t>(read_gate), {cpu_delta(opt_block, false)});

        std::vector<std::uint32_t> upd_deps{state_read};
        upd_deps.push_back(overlapped ? grad_g2c[kb] : grad_read);
        upd[kb] = b.add("opt update " + gname.str(), TaskKind::optimizer_update,
                        ResourceId::cpu_compute, TransferDir::none, Payload::none,
                        block_param_count, std::move(upd_deps),
                        {cpu_delta(-grad_block, false), cpu_delta(grad_block, false)});
        // The gradient buffer is replaced by the updated fp16 weights of
        // equal size, so the net CPU effect of the update is zero.

        b.add("opt state_c2s " + gname.str(), TaskKind::transfer, ResourceId::link_ssd,
              TransferDir::c2s, Payload::opt_states, static_cast<double>(block_opt_bytes),
              {upd[kb]}, {cpu_delta(-opt_block, false)});
        b.add("opt param_c2s " + gname.str(), TaskKind::transfer, ResourceId::link_ssd,
              TransferDir::c2s, Payload::params, static_cast<double>(block_param_bytes),
              {upd[kb]}, {cpu_delta(-grad_block, false)});
    }

    return graph;
}

} // namespace offsim
