#include "offsim/sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <string>

namespace offsim {

namespace {

void append_escaped(std::string& out, const std::string& s) {
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
}

// Microseconds with nanosecond precision, printed exactly.
void append_us(std::string& out, std::uint64_t ns) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%" PRIu64 ".%03u", ns / 1000,
                  static_cast<unsigned>(ns % 1000));
    out += buf;
}

constexpr const char* kLaneNames[] = {
    "GPU compute", "CPU compute", "CPU to GPU", "GPU to CPU", "SSD array",
    "GPU memory", "CPU memory",
};

} // namespace

std::string to_chrome_trace_json(const TaskGraph& graph, const SimTrace& trace) {
    std::vector<const TraceEvent*> events;
    events.reserve(trace.events.size());
    for (const TraceEvent& ev : trace.events) events.push_back(&ev);
    std::sort(events.begin(), events.end(), [](const TraceEvent* a, const TraceEvent* b) {
        if (a->start_ns != b->start_ns) return a->start_ns < b->start_ns;
        if (a->resource != b->resource) return a->resource < b->resource;
        return a->task_id < b->task_id;
    });

    std::string out;
    out.reserve(events.size() * 160 + 1024);
    out += "{\"traceEvents\":[\n";
    out += "{\"name\":\"process_name\",\"ph\":\"M\",\"pid\":1,\"tid\":0,\"args\":{\"name\":\"";
    append_escaped(out, graph.header.model_name.empty() ? "offsim" : graph.header.model_name);
    out += " (";
    out += to_string(graph.header.variant);
    out += ")\"}}";
    for (int lane = 0; lane < 5; ++lane) {
        out += ",\n{\"name\":\"thread_name\",\"ph\":\"M\",\"pid\":1,\"tid\":";
        out += std::to_string(lane);
        out += ",\"args\":{\"name\":\"";
        append_escaped(out, kLaneNames[lane]);
        out += "\"}}";
    }
    for (const TraceEvent* ev : events) {
        const Task& task = graph.tasks[ev->task_id];
        out += ",\n{\"name\":\"";
        append_escaped(out, task.name);
        out += "\",\"cat\":\"";
        out += to_string(task.kind);
        out += "\",\"ph\":\"X\",\"ts\":";
        append_us(out, ev->start_ns);
        out += ",\"dur\":";
        append_us(out, ev->end_ns - ev->start_ns);
        out += ",\"pid\":1,\"tid\":";
        out += std::to_string(static_cast<int>(ev->resource));
        out += ",\"args\":{\"payload\":\"";
        out += to_string(ev->payload);
        out += "\",\"work\":";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", ev->work);
        out += buf;
        out += "}}";
    }
    out += "\n],\"displayTimeUnit\":\"ms\"}\n";
    return out;
}

} // namespace offsim
