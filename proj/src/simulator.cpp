#include "offsim/errors.hpp"
#include "offsim/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

namespace offsim {

namespace {

constexpr std::array<ResourceId, 5> kSerialResources = {
    ResourceId::gpu_compute, ResourceId::cpu_compute, ResourceId::link_c2g,
    ResourceId::link_g2c, ResourceId::link_ssd};

double resource_capacity(const Task& task, const HardwareConfig& hw) {
    switch (task.resource) {
    case ResourceId::gpu_compute: return hw.gpu_tput;
    case ResourceId::cpu_compute: return hw.cpu_opt_tput;
    case ResourceId::link_c2g:
    case ResourceId::link_g2c: return hw.bw_gpu;
    case ResourceId::link_ssd:
        return task.dir == TransferDir::s2c ? aggregate_ssd_bw(hw, SsdDirection::s2c)
                                            : aggregate_ssd_bw(hw, SsdDirection::c2s);
    case ResourceId::mem_gpu:
    case ResourceId::mem_cpu: break;
    }
    throw InvariantError("task '" + task.name + "' scheduled on a memory resource");
}

std::size_t lane_index(ResourceId id) { return static_cast<std::size_t>(id); }

} // namespace

std::uint64_t task_duration_ns(const Task& task, const HardwareConfig& hw) {
    if (task.work <= 0.0) return 0;
    const double seconds = task.work / resource_capacity(task, hw);
    return static_cast<std::uint64_t>(std::llround(seconds * 1e9));
}

std::uint64_t serial_duration_sum_ns(const TaskGraph& graph, const HardwareConfig& hw) {
    std::uint64_t sum = 0;
    for (const Task& t : graph.tasks) sum += task_duration_ns(t, hw);
    return sum;
}

std::uint64_t roofline_lower_bound_ns(const TaskGraph& graph, const HardwareConfig& hw) {
    std::map<ResourceId, std::uint64_t> per_resource;
    for (const Task& t : graph.tasks) per_resource[t.resource] += task_duration_ns(t, hw);
    std::uint64_t bound = 0;
    for (const auto& [id, ns] : per_resource) bound = std::max(bound, ns);
    return bound;
}

SimTrace simulate(const TaskGraph& graph, const HardwareConfig& hw) {
    const std::size_t n = graph.tasks.size();

    std::vector<std::uint64_t> duration(n);
    std::vector<std::uint32_t> unmet(n);
    std::vector<std::vector<std::uint32_t>> dependents(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Task& t = graph.tasks[i];
        duration[i] = task_duration_ns(t, hw);
        unmet[i] = static_cast<std::uint32_t>(t.deps.size());
        for (std::uint32_t d : t.deps) {
            if (d >= n) throw InvariantError("task '" + t.name + "' depends on unknown task");
            dependents[d].push_back(t.id);
        }
    }

    // Memory pools with capacity enforcement.
    std::map<ResourceId, std::int64_t> level;
    std::map<ResourceId, std::int64_t> peak;
    const std::map<ResourceId, std::int64_t> caps = {
        {ResourceId::mem_gpu, static_cast<std::int64_t>(hw.gpu_mem)},
        {ResourceId::mem_cpu, static_cast<std::int64_t>(hw.cpu_mem)},
    };
    for (const auto& [id, bytes] : graph.initial_mem) {
        level[id] += bytes;
        peak[id] = std::max(peak[id], level[id]);
    }
    auto apply_effects = [&](const Task& t, bool at_start, std::uint64_t now) {
        for (const MemEffect& e : t.mem_effects) {
            if (e.at_start != at_start) continue;
            level[e.mem] += e.delta_bytes;
            peak[e.mem] = std::max(peak[e.mem], level[e.mem]);
            const auto cap = caps.find(e.mem);
            if (cap != caps.end() && level[e.mem] > cap->second) {
                std::ostringstream os;
                os << to_string(e.mem) << " capacity " << cap->second << " exceeded ("
                   << level[e.mem] << " bytes) by task '" << t.name << "' at " << now << " ns";
                throw InvariantError(os.str());
            }
        }
    };
    for (const auto& [id, lvl] : level) {
        const auto cap = caps.find(id);
        if (cap != caps.end() && lvl > cap->second)
            throw InvariantError(std::string("initial ") + to_string(id) +
                                 " level exceeds capacity");
    }

    // Ready tasks FIFO per serial resource, ordered by (release time, id).
    using ReadyKey = std::pair<std::uint64_t, std::uint32_t>;
    std::array<std::priority_queue<ReadyKey, std::vector<ReadyKey>, std::greater<>>, 7> ready;
    std::array<bool, 7> running{};
    std::array<std::uint64_t, 7> busy{};

    using Completion = std::pair<std::uint64_t, std::uint32_t>; // (end, id)
    std::priority_queue<Completion, std::vector<Completion>, std::greater<>> completions;

    std::vector<std::uint64_t> start_ns(n, 0), end_ns(n, 0);
    std::vector<bool> done(n, false);
    SimTrace trace;
    trace.header = graph.header;
    trace.events.reserve(n);

    auto try_start = [&](ResourceId res, std::uint64_t now) {
        const std::size_t lane = lane_index(res);
        if (running[lane] || ready[lane].empty()) return;
        const auto [rel, id] = ready[lane].top();
        ready[lane].pop();
        (void)rel; // rel <= now: releases only happen at processed events
        const Task& t = graph.tasks[id];
        start_ns[id] = now;
        apply_effects(t, true, now);
        running[lane] = true;
        completions.emplace(now + duration[id], id);
    };

    auto release = [&](std::uint32_t id, std::uint64_t now) {
        ready[lane_index(graph.tasks[id].resource)].emplace(now, id);
    };

    for (std::size_t i = 0; i < n; ++i)
        if (unmet[i] == 0) release(static_cast<std::uint32_t>(i), 0);
    for (ResourceId res : kSerialResources) try_start(res, 0);

    std::size_t completed = 0;
    std::uint64_t makespan = 0;
    while (!completions.empty()) {
        const std::uint64_t now = completions.top().first;
        // Finish everything ending now before starting anything at now, so
        // freed memory is visible to tasks that begin at this instant.
        while (!completions.empty() && completions.top().first == now) {
            const std::uint32_t id = completions.top().second;
            completions.pop();
            const Task& t = graph.tasks[id];
            end_ns[id] = now;
            done[id] = true;
            running[lane_index(t.resource)] = false;
            busy[lane_index(t.resource)] += duration[id];
            apply_effects(t, false, now);
            TraceEvent ev;
            ev.task_id = id;
            ev.resource = t.resource;
            ev.dir = t.dir;
            ev.payload = t.payload;
            ev.work = t.work;
            ev.start_ns = start_ns[id];
            ev.end_ns = now;
            trace.events.push_back(ev);
            ++completed;
            makespan = std::max(makespan, now);
            for (std::uint32_t dep : dependents[id])
                if (--unmet[dep] == 0) release(dep, now);
        }
        for (ResourceId res : kSerialResources) try_start(res, now);
    }

    if (completed < n) {
        std::ostringstream os;
        os << "deadlock: " << (n - completed) << " tasks blocked, first:";
        int listed = 0;
        for (std::size_t i = 0; i < n && listed < 4; ++i) {
            if (!done[i]) {
                os << " '" << graph.tasks[i].name << "'";
                ++listed;
            }
        }
        throw InvariantError(os.str());
    }

    trace.makespan_ns = makespan;
    trace.peak_mem = peak;
    for (ResourceId res : kSerialResources)
        trace.busy_ns[res] = busy[lane_index(res)];
    return trace;
}

} // namespace offsim
