#include "offsim/sim.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace offsim {

namespace {

constexpr std::array<ResourceId, 5> kSerialResources = {
    ResourceId::gpu_compute, ResourceId::cpu_compute, ResourceId::link_c2g,
    ResourceId::link_g2c, ResourceId::link_ssd};

void add_entry(InvariantReport& report, std::string name, bool pass, std::string detail = "") {
    report.entries.push_back({std::move(name), pass, std::move(detail)});
    report.all_pass = report.all_pass && pass;
}

} // namespace

InvariantReport check_trace_invariants(const TaskGraph& graph, const SimTrace& trace,
                                       const HardwareConfig& hw) {
    InvariantReport report;
    const std::size_t n = graph.tasks.size();

    // Every task executed exactly once, with a sane interval.
    {
        bool pass = trace.events.size() == n;
        std::string detail;
        std::vector<bool> seen(n, false);
        for (const TraceEvent& ev : trace.events) {
            if (ev.task_id >= n || seen[ev.task_id] || ev.end_ns < ev.start_ns) {
                pass = false;
                detail = "bad event for task " + std::to_string(ev.task_id);
                break;
            }
            seen[ev.task_id] = true;
        }
        add_entry(report, "all-tasks-executed", pass, detail);
    }

    std::vector<const TraceEvent*> by_task(n, nullptr);
    for (const TraceEvent& ev : trace.events)
        if (ev.task_id < n) by_task[ev.task_id] = &ev;

    // Dependencies respected.
    {
        bool pass = true;
        std::string detail;
        for (const Task& t : graph.tasks) {
            if (by_task[t.id] == nullptr) continue;
            for (std::uint32_t d : t.deps) {
                if (by_task[d] == nullptr) continue;
                if (by_task[t.id]->start_ns < by_task[d]->end_ns) {
                    pass = false;
                    detail = "task '" + t.name + "' started before its dependency '" +
                             graph.tasks[d].name + "' finished";
                    break;
                }
            }
            if (!pass) break;
        }
        add_entry(report, "dependencies-respected", pass, detail);
    }

    // One task at a time on each serial resource.
    {
        bool pass = true;
        std::string detail;
        for (ResourceId res : kSerialResources) {
            std::vector<const TraceEvent*> lane;
            for (const TraceEvent& ev : trace.events)
                if (ev.resource == res) lane.push_back(&ev);
            std::sort(lane.begin(), lane.end(), [](const TraceEvent* a, const TraceEvent* b) {
                return a->start_ns != b->start_ns ? a->start_ns < b->start_ns
                                                  : a->end_ns < b->end_ns;
            });
            for (std::size_t i = 1; i < lane.size(); ++i) {
                if (lane[i]->start_ns < lane[i - 1]->end_ns) {
                    pass = false;
                    detail = std::string("overlap on ") + to_string(res) + ": tasks '" +
                             graph.tasks[lane[i - 1]->task_id].name + "' and '" +
                             graph.tasks[lane[i]->task_id].name + "'";
                    break;
                }
            }
            if (!pass) break;
        }
        add_entry(report, "serial-resource-exclusive", pass, detail);
    }

    // Memory stays within capacity at every boundary; ends apply before
    // starts at the same instant, mirroring the engine.
    {
        bool pass = true;
        std::string detail;
        struct Boundary {
            std::uint64_t t;
            bool is_start;
            const TraceEvent* ev;
        };
        std::vector<Boundary> boundaries;
        boundaries.reserve(trace.events.size() * 2);
        for (const TraceEvent& ev : trace.events) {
            boundaries.push_back({ev.start_ns, true, &ev});
            boundaries.push_back({ev.end_ns, false, &ev});
        }
        std::stable_sort(boundaries.begin(), boundaries.end(),
                         [](const Boundary& a, const Boundary& b) {
                             if (a.t != b.t) return a.t < b.t;
                             return !a.is_start && b.is_start;
                         });
        std::map<ResourceId, std::int64_t> level = graph.initial_mem;
        const std::map<ResourceId, std::int64_t> caps = {
            {ResourceId::mem_gpu, static_cast<std::int64_t>(hw.gpu_mem)},
            {ResourceId::mem_cpu, static_cast<std::int64_t>(hw.cpu_mem)},
        };
        for (const Boundary& bd : boundaries) {
            const Task& t = graph.tasks[bd.ev->task_id];
            for (const MemEffect& e : t.mem_effects) {
                if (e.at_start != bd.is_start) continue;
                level[e.mem] += e.delta_bytes;
                const auto cap = caps.find(e.mem);
                if (cap != caps.end() && level[e.mem] > cap->second) {
                    pass = false;
                    detail = std::string(to_string(e.mem)) + " exceeds capacity at task '" +
                             t.name + "'";
                }
            }
        }
        // A full iteration hands every staged buffer back; a forward-only
        // graph legitimately leaves checkpoints parked in CPU memory.
        if (!trace.header.forward_only) {
            for (const auto& [mem, lvl] : level) {
                const auto initial = graph.initial_mem.find(mem);
                const std::int64_t base =
                    initial == graph.initial_mem.end() ? 0 : initial->second;
                if (lvl != base) {
                    pass = false;
                    detail = std::string("memory ") + to_string(mem) + " does not return to "
                             "its initial level";
                }
            }
        }
        add_entry(report, "memory-within-capacity", pass, detail);
    }

    // No schedule can beat the per-resource work bound.
    {
        const std::uint64_t bound = roofline_lower_bound_ns(graph, hw);
        std::ostringstream os;
        os << "makespan " << trace.makespan_ns << " ns vs bound " << bound << " ns";
        add_entry(report, "roofline-lower-bound", trace.makespan_ns >= bound, os.str());
    }

    if (trace.header.variant == ScheduleVariant::serial) {
        // Strictly chained: nothing overlaps anything and the makespan is
        // exactly the sum of all durations.
        bool pass = true;
        std::string detail;
        std::vector<const TraceEvent*> all;
        for (const TraceEvent& ev : trace.events) all.push_back(&ev);
        std::sort(all.begin(), all.end(), [](const TraceEvent* a, const TraceEvent* b) {
            return a->start_ns != b->start_ns ? a->start_ns < b->start_ns
                                              : a->end_ns < b->end_ns;
        });
        for (std::size_t i = 1; i < all.size(); ++i) {
            if (all[i]->start_ns < all[i - 1]->end_ns) {
                pass = false;
                detail = "tasks overlap in a serial schedule";
                break;
            }
        }
        add_entry(report, "strictly-serial", pass, detail);

        const std::uint64_t sum = serial_duration_sum_ns(graph, hw);
        std::ostringstream os;
        os << "makespan " << trace.makespan_ns << " ns vs duration sum " << sum << " ns";
        add_entry(report, "makespan-equals-duration-sum", trace.makespan_ns == sum, os.str());
    }

    // Gradient traffic on the SSD lane: zero when the optimizer overlaps
    // backward (gradients are consumed straight from CPU memory), exactly
    // one write plus one read of the fp16 gradients otherwise.
    {
        double grad_ssd_bytes = 0.0;
        for (const TraceEvent& ev : trace.events)
            if (ev.resource == ResourceId::link_ssd && ev.payload == Payload::grads)
                grad_ssd_bytes += ev.work;
        if (trace.header.variant == ScheduleVariant::overlapped) {
            std::ostringstream os;
            os << grad_ssd_bytes << " gradient bytes on the SSD lane";
            add_entry(report, "no-gradient-bytes-on-ssd", grad_ssd_bytes == 0.0, os.str());
        } else if (!trace.header.forward_only) {
            const double expected = 2.0 * static_cast<double>(trace.header.fp16_param_bytes);
            std::ostringstream os;
            os << grad_ssd_bytes << " gradient bytes on the SSD lane, expected " << expected;
            add_entry(report, "gradient-ssd-roundtrip", grad_ssd_bytes == expected, os.str());
        }
    }

    return report;
}

} // namespace offsim
