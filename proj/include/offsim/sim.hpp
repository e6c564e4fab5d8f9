#pragma once

#include "offsim/hardware.hpp"
#include "offsim/planner.hpp"
#include "offsim/workload.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace offsim {

/// Contended resources of one training iteration. The GPU link is two
/// independent lanes (c2g, g2c); the SSD array is a single lane serving
/// one direction at a time; the memories are capacity pools, not lanes.
enum class ResourceId : std::uint8_t {
    gpu_compute,
    cpu_compute,
    link_c2g,
    link_g2c,
    link_ssd,
    mem_gpu,
    mem_cpu,
};
const char* to_string(ResourceId id);

enum class TaskKind : std::uint8_t { compute, transfer, optimizer_update };
const char* to_string(TaskKind kind);

enum class TransferDir : std::uint8_t { none, s2c, c2s, c2g, g2c };
const char* to_string(TransferDir dir);

/// Byte class a transfer carries; lets trace checks account for traffic
/// per class (e.g. gradient bytes on the SSD lane).
enum class Payload : std::uint8_t { none, params, grads, opt_states, activations };
const char* to_string(Payload p);

struct MemEffect {
    ResourceId mem = ResourceId::mem_gpu;
    std::int64_t delta_bytes = 0;
    bool at_start = false; // otherwise applied when the task completes
};

struct Task {
    std::uint32_t id = 0;
    std::string name;
    TaskKind kind = TaskKind::compute;
    ResourceId resource = ResourceId::gpu_compute;
    TransferDir dir = TransferDir::none;
    Payload payload = Payload::none;
    double work = 0.0; // bytes for transfers, FLOPs or params for compute
    std::vector<std::uint32_t> deps;
    std::vector<MemEffect> mem_effects;
};

enum class ScheduleVariant : std::uint8_t { serial, pipelined, overlapped };
const char* to_string(ScheduleVariant v);
ScheduleVariant schedule_variant_from_string(const std::string& s); // throws ConfigError

/// Provenance and derived constants recorded with every graph and trace.
struct TraceHeader {
    ScheduleVariant variant = ScheduleVariant::overlapped;
    std::string model_name;
    std::string hardware_name;
    std::string checkpoint_location; // "cpu" or "ssd"
    std::uint64_t fp16_param_bytes = 0;
    std::uint64_t gpu_fifo_bytes = 0; // gpu_mem minus the working set
    std::uint32_t prefetch_window_layers = 0;
    std::uint32_t offload_window_blocks = 0;
    std::uint32_t cpu_stage_window_layers = 0;
    bool forward_only = false;
};

struct TaskGraph {
    TraceHeader header;
    std::vector<Task> tasks;
    std::map<ResourceId, std::int64_t> initial_mem;
};

struct BuildOptions {
    bool forward_only = false;
};

/// Expands (model, plan, variant) into a dependency graph of compute and
/// transfer tasks:
///   serial     every task chained after the previous one; checkpoints to
///              CPU memory; gradients staged through the SSD; a distinct
///              optimizer stage afterwards.
///   pipelined  transfers prefetch ahead of compute behind a GPU-memory
///              FIFO window; optimizer stage still distinct but its reads,
///              updates and write-backs overlap (delayed write-back).
///   overlapped pipelined plus the optimizer running during backward;
///              gradients go GPU->CPU only and are consumed in place.
/// Throws InfeasibleError when the FIFO cannot hold the largest prefetch
/// unit or (serial/CPU placement) checkpoints cannot fit in CPU memory.
TaskGraph build_schedule(const ModelConfig& model, const HardwareConfig& hw,
                         const SwapPlan& plan, ScheduleVariant variant,
                         const BuildOptions& options = {});

struct TraceEvent {
    std::uint32_t task_id = 0;
    ResourceId resource = ResourceId::gpu_compute;
    TransferDir dir = TransferDir::none;
    Payload payload = Payload::none;
    double work = 0.0;
    std::uint64_t start_ns = 0;
    std::uint64_t end_ns = 0;
};

struct SimTrace {
    TraceHeader header;
    std::vector<TraceEvent> events; // in completion order
    std::uint64_t makespan_ns = 0;
    std::map<ResourceId, std::int64_t> peak_mem;
    std::map<ResourceId, std::uint64_t> busy_ns;
    double makespan_s() const { return static_cast<double>(makespan_ns) * 1e-9; }
};

/// Integer-nanosecond duration of one task on this hardware.
std::uint64_t task_duration_ns(const Task& task, const HardwareConfig& hw);

/// Deterministic event-driven execution. Serial resources run ready tasks
/// FIFO by (dependency-ready time, task id); memory effects apply
/// atomically at task boundaries. Throws InvariantError on deadlock or a
/// memory-capacity violation.
SimTrace simulate(const TaskGraph& graph, const HardwareConfig& hw);

/// Sum of every task duration: the serial-schedule makespan.
std::uint64_t serial_duration_sum_ns(const TaskGraph& graph, const HardwareConfig& hw);

/// Per-resource total work over capacity: no schedule can beat it.
std::uint64_t roofline_lower_bound_ns(const TaskGraph& graph, const HardwareConfig& hw);

struct InvariantReport {
    struct Entry {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Entry> entries;
    bool all_pass = true;
};

/// Post-hoc validation of a completed trace against its graph: resource
/// exclusivity, dependency order, memory bounds, the roofline bound, and
/// the variant-specific properties (gradient SSD bypass for overlapped,
/// strict seriality for serial).
InvariantReport check_trace_invariants(const TaskGraph& graph, const SimTrace& trace,
                                       const HardwareConfig& hw);

/// Chrome trace event JSON (one lane per resource), events sorted by
/// start time.
std::string to_chrome_trace_json(const TaskGraph& graph, const SimTrace& trace);

} // namespace offsim
