#include "offsim/errors.hpp"
#include "offsim/presets.hpp"
#include "offsim/runner.hpp"
#include "offsim/scenario.hpp"
#include "offsim/sim.hpp"

#include <doctest.h>

#include <limits>

using namespace offsim;

namespace {

HardwareConfig link_hw() {
    HardwareConfig hw;
    hw.name = "links";
    hw.bw_gpu = 16e9;
    hw.bw_s2c = 6e9;
    hw.bw_c2s = 3e9;
    hw.n_ssd = 1;
    hw.gpu_mem = 16ull << 30;
    hw.cpu_mem = 64ull << 30;
    hw.ssd_capacity = 1ull << 44;
    hw.gpu_tput = 1e12;
    hw.cpu_opt_tput = 1e9;
    return hw;
}

Task make_task(std::uint32_t id, const char* name, ResourceId res, TransferDir dir, double work,
               std::vector<std::uint32_t> deps = {}) {
    Task t;
    t.id = id;
    t.name = name;
    t.kind = res == ResourceId::gpu_compute || res == ResourceId::cpu_compute
                 ? TaskKind::compute
                 : TaskKind::transfer;
    t.resource = res;
    t.dir = dir;
    t.work = work;
    t.deps = std::move(deps);
    return t;
}

Scenario preset_scenario(const char* name, ScheduleVariant variant) {
    Scenario s = scenario_preset(name);
    s.variant = variant;
    return s;
}

} // namespace

TEST_SUITE_BEGIN("sim");

TEST_CASE("single transfer duration is work over capacity") {
    TaskGraph g;
    g.tasks.push_back(make_task(0, "xfer", ResourceId::link_c2g, TransferDir::c2g, 2e9));
    const SimTrace trace = simulate(g, link_hw());
    CHECK(trace.makespan_ns == 125000000ull); // 0.125 s
}

TEST_CASE("simplex SSD serializes, duplex GPU link does not") {
    // Two 0.1 s transfers, both ready at t = 0.
    {
        TaskGraph g;
        g.tasks.push_back(make_task(0, "read", ResourceId::link_ssd, TransferDir::s2c, 6e8));
        g.tasks.push_back(make_task(1, "write", ResourceId::link_ssd, TransferDir::c2s, 3e8));
        const SimTrace trace = simulate(g, link_hw());
        CHECK(trace.makespan_ns == 200000000ull);
    }
    {
        TaskGraph g;
        g.tasks.push_back(make_task(0, "down", ResourceId::link_c2g, TransferDir::c2g, 1.6e9));
        g.tasks.push_back(make_task(1, "up", ResourceId::link_g2c, TransferDir::g2c, 1.6e9));
        const SimTrace trace = simulate(g, link_hw());
        CHECK(trace.makespan_ns == 100000000ull);
    }
}

TEST_CASE("empty graph completes at time zero") {
    const SimTrace trace = simulate(TaskGraph{}, link_hw());
    CHECK(trace.makespan_ns == 0);
    CHECK(trace.events.empty());
}

TEST_CASE("a chained layer is the sum of its three transfers") {
    // Parameter fetch, upload, zero-cost compute, activation offload.
    TaskGraph g;
    g.tasks.push_back(make_task(0, "p_s2c", ResourceId::link_ssd, TransferDir::s2c, 6e8));
    g.tasks.push_back(make_task(1, "p_c2g", ResourceId::link_c2g, TransferDir::c2g, 6e8, {0}));
    g.tasks.push_back(
        make_task(2, "compute", ResourceId::gpu_compute, TransferDir::none, 0.0, {1}));
    g.tasks.push_back(make_task(3, "a_g2c", ResourceId::link_g2c, TransferDir::g2c, 6e8, {2}));
    const SimTrace trace = simulate(g, link_hw());
    const std::uint64_t expected = serial_duration_sum_ns(g, link_hw());
    CHECK(trace.makespan_ns == expected);
    CHECK(expected == 100000000ull + 37500000ull + 37500000ull);
}

TEST_CASE("dependency cycles are reported as deadlock") {
    TaskGraph g;
    g.tasks.push_back(make_task(0, "a", ResourceId::gpu_compute, TransferDir::none, 1e9, {1}));
    g.tasks.push_back(make_task(1, "b", ResourceId::gpu_compute, TransferDir::none, 1e9, {0}));
    CHECK_THROWS_WITH_AS(simulate(g, link_hw()),
                         doctest::Contains("deadlock"), InvariantError);
}

TEST_CASE("memory capacity violations abort with the offending task") {
    TaskGraph g;
    Task t = make_task(0, "hog", ResourceId::link_c2g, TransferDir::c2g, 1e9);
    t.mem_effects.push_back({ResourceId::mem_gpu, 1ll << 60, true});
    g.tasks.push_back(t);
    CHECK_THROWS_WITH_AS(simulate(g, link_hw()), doctest::Contains("hog"), InvariantError);
}

TEST_CASE("full schedules: dominance, roofline and seriality") {
    for (const char* preset : {"13b-a100-b32", "13b-a100-b64", "175b-a100-b16"}) {
        CAPTURE(preset);
        const Scenario base = scenario_preset(preset);
        const SwapPlan plan = plan_for_scenario(base);

        std::map<ScheduleVariant, std::uint64_t> makespan;
        for (ScheduleVariant v :
             {ScheduleVariant::serial, ScheduleVariant::pipelined, ScheduleVariant::overlapped}) {
            Scenario s = base;
            s.variant = v;
            const TaskGraph graph = build_schedule(s.model, s.hardware, plan_for_scenario(s), v);
            const SimTrace trace = simulate(graph, s.hardware);
            makespan[v] = trace.makespan_ns;

            const InvariantReport report = check_trace_invariants(graph, trace, s.hardware);
            for (const auto& entry : report.entries) {
                CAPTURE(entry.name);
                CAPTURE(entry.detail);
                CHECK(entry.pass);
            }
            CHECK(trace.makespan_ns >= roofline_lower_bound_ns(graph, s.hardware));
            if (v == ScheduleVariant::serial)
                CHECK(trace.makespan_ns == serial_duration_sum_ns(graph, s.hardware));
        }
        CHECK(makespan[ScheduleVariant::overlapped] <= makespan[ScheduleVariant::pipelined]);
        CHECK(makespan[ScheduleVariant::pipelined] <= makespan[ScheduleVariant::serial]);
        (void)plan;
    }
}

TEST_CASE("gradient bytes bypass the SSD only when overlapped") {
    const Scenario base = scenario_preset("13b-a100-b32");
    for (ScheduleVariant v : {ScheduleVariant::serial, ScheduleVariant::overlapped}) {
        Scenario s = base;
        s.variant = v;
        const RunOutputs run = run_scenario(s);
        double grad_ssd = 0.0;
        for (const TraceEvent& ev : run.trace.events)
            if (ev.resource == ResourceId::link_ssd && ev.payload == Payload::grads)
                grad_ssd += ev.work;
        if (v == ScheduleVariant::overlapped) {
            CHECK(grad_ssd == 0.0);
        } else {
            // One write plus one read of the fp16 gradients.
            CHECK(grad_ssd ==
                  doctest::Approx(2.0 * static_cast<double>(
                                            footprint(s.model).fp16_param_bytes)));
        }
    }
}

TEST_CASE("pipelining beats the serial schedule when compute can overlap") {
    const Scenario base = preset_scenario("13b-a100-b32", ScheduleVariant::pipelined);
    const RunOutputs pipelined = run_scenario(base);
    Scenario serial = base;
    serial.variant = ScheduleVariant::serial;
    const RunOutputs chained = run_scenario(serial);
    CHECK(pipelined.trace.makespan_ns < chained.trace.makespan_ns);
}

TEST_CASE("analytic estimate tracks the overlapped makespan") {
    for (const char* preset : {"13b-a100-b32", "13b-a100-b64", "175b-4090-b8"}) {
        CAPTURE(preset);
        const Scenario s = preset_scenario(preset, ScheduleVariant::overlapped);
        const RunOutputs run = run_scenario(s);
        const double predicted = run.plan.predicted.t_iter;
        const double simulated = run.trace.makespan_s();
        CHECK(std::abs(predicted - simulated) / simulated <= 0.15);
    }
}

TEST_CASE("determinism: identical inputs give identical traces") {
    const Scenario s = preset_scenario("13b-a100-b32", ScheduleVariant::overlapped);
    const RunOutputs a = run_scenario(s);
    const RunOutputs b = run_scenario(s);
    CHECK(to_chrome_trace_json(a.graph, a.trace) == to_chrome_trace_json(b.graph, b.trace));
    CHECK(a.trace.makespan_ns == b.trace.makespan_ns);
}

TEST_CASE("trace checker flags hand-corrupted traces") {
    const Scenario s = preset_scenario("13b-a100-b32", ScheduleVariant::overlapped);
    RunOutputs run = run_scenario(s);
    REQUIRE(check_trace_invariants(run.graph, run.trace, s.hardware).all_pass);

    // Force two GPU computes to overlap.
    SimTrace corrupted = run.trace;
    int moved = 0;
    for (TraceEvent& ev : corrupted.events) {
        if (ev.resource == ResourceId::gpu_compute && ev.end_ns > ev.start_ns) {
            if (++moved == 2) {
                ev.start_ns = 0;
                ev.end_ns = corrupted.makespan_ns;
                break;
            }
        }
    }
    const InvariantReport report = check_trace_invariants(run.graph, corrupted, s.hardware);
    CHECK_FALSE(report.all_pass);
    bool exclusivity_failed = false;
    for (const auto& entry : report.entries)
        if (entry.name == "serial-resource-exclusive" && !entry.pass) exclusivity_failed = true;
    CHECK(exclusivity_failed);
}

TEST_CASE("forward-only serial schedule sums its transfers") {
    ModelConfig m;
    m.name = "one-block";
    m.num_layers = 1;
    m.num_heads = 1;
    m.hidden_dim = 256;
    m.batch_size = 2;
    m.seq_len = 64;
    HardwareConfig hw = link_hw();
    hw.gpu_tput = 1e30; // zero-cost compute
    SwapPlan plan; // no swaps, one checkpoint
    plan.d_start_bytes = footprint(m).total_checkpoint_bytes;
    plan.d_f_bytes = plan.d_start_bytes;
    plan.checkpoints_on_ssd = false;
    BuildOptions fwd_only;
    fwd_only.forward_only = true;
    const TaskGraph g = build_schedule(m, hw, plan, ScheduleVariant::serial, fwd_only);
    const SimTrace trace = simulate(g, hw);
    CHECK(trace.makespan_ns == serial_duration_sum_ns(g, hw));
    // Only transfers contribute.
    std::uint64_t transfer_ns = 0;
    for (const TraceEvent& ev : trace.events)
        if (ev.resource != ResourceId::gpu_compute) transfer_ns += ev.end_ns - ev.start_ns;
    CHECK(trace.makespan_ns == transfer_ns);
    CHECK(check_trace_invariants(g, trace, hw).all_pass);
}

TEST_CASE("a FIFO smaller than one prefetch unit fails naming the layer") {
    Scenario s = scenario_preset("13b-a100-b32");
    s.model.batch_size = 1;
    const SwapPlan plan = plan_for_scenario(s);
    s.hardware.gpu_mem = gpu_working_set_bytes(s.model) + 100000000ull; // < one 4h*h weight
    CHECK_THROWS_WITH_AS(
        build_schedule(s.model, s.hardware, plan, ScheduleVariant::overlapped),
        doctest::Contains("linear_hto4h"), InfeasibleError);
}

TEST_CASE("swap-coefficient sweep minimum lands on the planner's choice") {
    // Brute-force the coefficient grid and compare with the automatic plan.
    Scenario base = scenario_preset("13b-a100-b64");
    base.variant = ScheduleVariant::overlapped;
    const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    double best_makespan = std::numeric_limits<double>::infinity();
    double best_coefficient = -1.0;
    for (double coefficient : grid) {
        Scenario s = base;
        s.planner_mode = PlannerOptions::Mode::fixed_coefficient;
        s.planner_value = coefficient;
        const double makespan = run_scenario(s).trace.makespan_s();
        if (makespan < best_makespan) {
            best_makespan = makespan;
            best_coefficient = coefficient;
        }
    }
    const double star = plan_for_scenario(base).swap_coefficient;
    CHECK(std::abs(star - best_coefficient) <= 0.25 + 1e-12); // within one grid step
}

TEST_CASE("small cpu memory pushes checkpoints to the ssd") {
    Scenario s = scenario_preset("13b-a100-b32");
    s.hardware.cpu_mem = 32ull * 1000 * 1000 * 1000;
    s.hardware.cpu_opt_tput = 1e10; // keep the optimizer ahead of gradients
    REQUIRE_FALSE(checkpoints_fit_cpu(s.model, s.hardware));

    std::map<ScheduleVariant, std::uint64_t> makespan;
    for (ScheduleVariant v : {ScheduleVariant::pipelined, ScheduleVariant::overlapped}) {
        s.variant = v;
        const RunOutputs run = run_scenario(s);
        CHECK(run.graph.header.checkpoint_location == "ssd");
        CHECK(run.invariants.all_pass);
        makespan[v] = run.trace.makespan_ns;

        double act_ssd_bytes = 0.0;
        for (const TraceEvent& ev : run.trace.events)
            if (ev.resource == ResourceId::link_ssd && ev.payload == Payload::activations)
                act_ssd_bytes += ev.work;
        // Checkpoints go out and come back.
        CHECK(act_ssd_bytes >=
              2.0 * static_cast<double>(footprint(s.model).total_checkpoint_bytes));

        if (v == ScheduleVariant::overlapped) {
            const double predicted = run.plan.predicted.t_iter;
            const double simulated = run.trace.makespan_s();
            CHECK(run.plan.checkpoints_on_ssd);
            CHECK(std::abs(predicted - simulated) / simulated <= 0.15);
        }
    }
    CHECK(makespan[ScheduleVariant::overlapped] <= makespan[ScheduleVariant::pipelined]);

    // The serial baseline cannot stage its checkpoints in this little CPU
    // memory at all.
    s.variant = ScheduleVariant::serial;
    CHECK_THROWS_AS(run_scenario(s), InfeasibleError);
}

TEST_CASE("chrome trace export is sorted and self-describing") {
    const Scenario s = preset_scenario("13b-a100-b32", ScheduleVariant::overlapped);
    const RunOutputs run = run_scenario(s);
    const std::string json = to_chrome_trace_json(run.graph, run.trace);
    CHECK(json.find("\"traceEvents\"") != std::string::npos);
    CHECK(json.find("\"ph\":\"X\"") != std::string::npos);
    CHECK(json.find("thread_name") != std::string::npos);

    // Events appear in non-decreasing ts order.
    double prev = -1.0;
    std::size_t pos = 0;
    while ((pos = json.find("\"ts\":", pos)) != std::string::npos) {
        pos += 5;
        const double ts = std::stod(json.substr(pos));
        CHECK(ts >= prev);
        prev = ts;
    }
}

TEST_SUITE_END();
