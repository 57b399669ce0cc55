#include <doctest.h>

#include <cmath>

#include "dagscale/errors.hpp"
#include "dagscale/metrics.hpp"
#include "dagscale/sim.hpp"
#include "oracles.hpp"

using namespace dagscale;

namespace {

app_graph five_node_app() {
  return app_graph::build(
      {
          {"f1", 90.0, true},
          {"f2", std::nullopt, false},
          {"f3", std::nullopt, false},
          {"f4", std::nullopt, false},
          {"f5", std::nullopt, true},
      },
      {
          {"f1", "f2", 1, 1},
          {"f1", "f3", 2, 1},
          {"f2", "f4", 1, 1},
          {"f2", "f5", 2, 1},
      });
}

sim_inputs five_node_inputs(const app_graph& graph) {
  sim_inputs in;
  in.graph = &graph;
  in.perf["f1"] = {7.0, 0.99};
  in.perf["f2"] = {1.0, 0.99};
  in.perf["f3"] = {2.0, 0.99};
  in.perf["f4"] = {2.0, 0.99};
  in.perf["f5"] = {3.0, 0.99};
  in.profile = compose_nominal(
      graph, {{"f1", 7.0}, {"f2", 1.0}, {"f3", 2.0}, {"f4", 2.0}, {"f5", 3.0}});
  in.sla_ms = {{"f1", 90.0}, {"f2", 12.0}, {"f3", 12.0}, {"f4", 12.0}, {"f5", 18.0}};
  in.ctrl.gain_p = 60.0;
  in.ctrl.gain_i = 600.0;
  in.ctrl.cores_min_millicores = 100;
  in.ctrl.cores_max_millicores = 8000;
  in.alpha = 0.5;
  in.sim.duration_s = 300.0;
  in.sim.tick_ms = 100.0;
  in.sim.control_period_s = 1.0;
  in.sim.replications = 1;
  in.sim.master_seed = 1;
  return in;
}

workload_spec constant(double rps) {
  workload_spec s;
  s.kind = workload_kind::constant;
  s.rps = rps;
  return s;
}

workload_spec bottleneck(double low, double high, std::uint64_t seed) {
  workload_spec s;
  s.kind = workload_kind::bottleneck_step;
  s.period_s = 50.0;
  s.low_rps = low;
  s.high_rps = high;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("sim_config validation") {
  sim_config c;
  c.validate();
  c.control_period_s = 0.25;  // not a multiple of 100 ms
  CHECK_THROWS_AS(c.validate(), error);
  c.control_period_s = 1.0;
  c.duration_s = 1.5;
  CHECK_THROWS_AS(c.validate(), error);
  c.duration_s = 1200.0;
  c.replications = 0;
  CHECK_THROWS_AS(c.validate(), error);
}

TEST_CASE("fan-out: entrypoint rates flow down the DAG") {
  auto g = five_node_app();
  auto rates = fan_out_requests(g, {{"f1", 10.0}, {"f5", 4.0}});
  CHECK(rates.at("f1") == doctest::Approx(10.0));
  CHECK(rates.at("f2") == doctest::Approx(10.0));
  CHECK(rates.at("f3") == doctest::Approx(10.0));
  CHECK(rates.at("f4") == doctest::Approx(10.0));
  CHECK(rates.at("f5") == doctest::Approx(14.0));  // 4 direct + 10 through f2
}

TEST_CASE("fan-out: multipliers scale the forwarded rate") {
  auto g = app_graph::build({{"p", 10.0, true}, {"c", std::nullopt, true}},
                            {{"p", "c", 1, 2}});
  auto rates = fan_out_requests(g, {{"p", 5.0}, {"c", 10.0}});
  CHECK(rates.at("c") == doctest::Approx(20.0));

  auto solo = app_graph::build({{"only", 10.0, true}}, {});
  CHECK(fan_out_requests(solo, {{"only", 7.0}}).at("only") == doctest::Approx(7.0));
}

TEST_CASE("fan-out rejects rates on non-entrypoints and negative rates") {
  auto g = five_node_app();
  CHECK_THROWS_AS(fan_out_requests(g, {{"f2", 1.0}}), error);
  CHECK_THROWS_AS(fan_out_requests(g, {{"f1", -1.0}}), error);
}

TEST_CASE("compose_rt on the six-node shape") {
  auto g = app_graph::build(
      {
          {"f1", 100.0, true},
          {"f2", std::nullopt, false},
          {"f3", std::nullopt, false},
          {"f4", std::nullopt, false},
          {"f5", std::nullopt, false},
          {"f6", std::nullopt, false},
      },
      {
          {"f1", "f2", 1, 2},
          {"f1", "f3", 2, 1},
          {"f1", "f4", 2, 1},
          {"f2", "f5", 1, 1},
          {"f2", "f6", 2, 2},
      });
  auto rt = compose_rt(
      g, {{"f1", 1.0}, {"f2", 2.0}, {"f3", 3.0}, {"f4", 4.0}, {"f5", 5.0}, {"f6", 6.0}});
  CHECK(rt.at("f2") == doctest::Approx(19.0));  // 2 + 5 + 12
  CHECK(rt.at("f1") == doctest::Approx(43.0));  // 1 + 2*19 + max(3, 4)

  auto leaf = app_graph::build({{"x", 10.0, true}}, {});
  CHECK(compose_rt(leaf, {{"x", 3.0}}).at("x") == doctest::Approx(3.0));

  auto zeros = compose_rt(
      g, {{"f1", 0.0}, {"f2", 0.0}, {"f3", 0.0}, {"f4", 0.0}, {"f5", 0.0}, {"f6", 0.0}});
  for (const auto& [name, v] : zeros) CHECK(v == 0.0);
}

TEST_CASE("property: compose_rt and fan_out match brute force on random DAGs") {
  splitmix_sequence rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    auto raw = testing::make_random_dag(rng, 8);
    auto g = app_graph::build(raw.functions, raw.edges);

    auto rt = compose_rt(g, raw.nlrt_ms);
    for (const auto& f : g.functions()) {
      const double expected = testing::brute_force_compose(raw.edges, raw.nlrt_ms, f.name);
      CHECK(rt.at(f.name) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(rt.at(f.name) >= raw.nlrt_ms.at(f.name) - 1e-12);  // rt >= lrt
    }

    std::map<std::string, double> user;
    for (const auto& f : g.functions())
      if (f.entrypoint) user[f.name] = rng.next_in(0.0, 50.0);
    auto rates = fan_out_requests(g, user);
    for (const auto& f : g.functions()) {
      const double expected = testing::brute_force_rate(raw.edges, user, f.name);
      CHECK(rates.at(f.name) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed loop converges to the local set points") {
  auto g = five_node_app();
  auto in = five_node_inputs(g);
  in.workloads["f1"] = constant(20.0);
  in.workloads["f5"] = constant(10.0);

  auto run = run_once(in, sim_mode::dependency_aware, 0);
  const auto set_points = control_set_points(in, sim_mode::dependency_aware);

  // After 120 control periods every function's window-mean lrt sits within
  // 2% of its local set point, and the entrypoint meets its SLA.
  const int tpw = run.ticks_per_window;
  const int windows = static_cast<int>(run.time_s.size()) / tpw;
  REQUIRE(windows > 120);
  for (const auto& [name, series] : run.series) {
    for (int w = 120; w < windows; ++w) {
      double lrt = 0.0;
      for (int i = w * tpw; i < (w + 1) * tpw; ++i) lrt += series.lrt_ms[i];
      lrt /= tpw;
      CHECK(std::abs(lrt - set_points.at(name)) / set_points.at(name) < 0.02);
    }
  }
  for (int i = 120 * tpw; i < windows * tpw; ++i)
    CHECK(run.series.at("f1").rt_ms[i] <= 90.0);
}

TEST_CASE("zero workload: allocations settle at cores_min, zero-load response times") {
  auto g = five_node_app();
  auto in = five_node_inputs(g);
  in.workloads["f1"] = constant(0.0);
  in.sim.duration_s = 30.0;

  auto run = run_once(in, sim_mode::dependency_aware, 0);
  for (const auto& [name, series] : run.series) {
    for (std::size_t i = 0; i < series.millicores.size(); ++i) {
      CHECK(series.millicores[i] == 100);
      CHECK(series.lrt_ms[i] ==
            doctest::Approx(in.perf.at(name).demand_core_ms / 0.1));
    }
  }
  // Composed rt equals the zero-load composition.
  std::map<std::string, double> lrt0;
  for (const auto& [name, p] : in.perf) lrt0[name] = p.demand_core_ms / 0.1;
  auto rt0 = compose_rt(g, lrt0);
  CHECK(run.series.at("f1").rt_ms.back() == doctest::Approx(rt0.at("f1")));
}

TEST_CASE("a bottleneck produces SLA violations in both modes") {
  auto g = five_node_app();
  auto in = five_node_inputs(g);
  in.workloads["f1"] = constant(5.0);
  in.workloads["f5"] = bottleneck(800.0, 6000.0, 4);
  in.sim.duration_s = 300.0;

  for (auto mode : {sim_mode::dependency_aware, sim_mode::baseline}) {
    auto run = run_once(in, mode, 0);
    auto summary = summarize(run, in.sla_ms);
    CHECK(summary.at("f5").violation_pct > 0.0);
  }
}

TEST_CASE("mode isolation: only the baseline parent reacts to a slow child") {
  // Twin runs differ in the child's demand only (bottlenecked vs not). The
  // parent's arrivals never change, so in dependency-aware mode its whole
  // allocation trajectory is bit-identical; in baseline mode the child's
  // inflated rt leaks into the parent controller and the trajectories split.
  auto make_inputs = [](double child_demand, const app_graph& graph) {
    sim_inputs in;
    in.graph = &graph;
    in.perf["parent"] = {5.0, 0.99};
    in.perf["child"] = {child_demand, 0.99};
    // Nominal profile stays fixed: same set points in both twins, only the
    // runtime demand changes.
    in.profile = compose_nominal(graph, {{"parent", 5.0}, {"child", 2.0}});
    in.sla_ms = {{"parent", 60.0}, {"child", 20.0}};
    in.ctrl.gain_p = 60.0;
    in.ctrl.gain_i = 600.0;
    in.sim.duration_s = 120.0;
    in.sim.replications = 1;
    workload_spec parent_load;
    parent_load.kind = workload_kind::constant;
    parent_load.rps = 20.0;
    in.workloads["parent"] = parent_load;
    workload_spec child_load;
    child_load.kind = workload_kind::bottleneck_step;
    child_load.period_s = 50.0;
    child_load.low_rps = 800.0;
    child_load.high_rps = 6000.0;
    child_load.seed = 9;
    in.workloads["child"] = child_load;
    return in;
  };

  auto graph = app_graph::build({{"parent", 60.0, true}, {"child", 20.0, true}},
                                {{"parent", "child", 1, 1}});
  auto calm = make_inputs(0.05, graph);   // child absorbs the load easily
  auto choked = make_inputs(50.0, graph); // child hopelessly saturated

  auto dep_calm = run_once(calm, sim_mode::dependency_aware, 0);
  auto dep_choked = run_once(choked, sim_mode::dependency_aware, 0);
  CHECK(dep_calm.series.at("parent").millicores ==
        dep_choked.series.at("parent").millicores);
  CHECK(dep_calm.series.at("parent").lrt_ms == dep_choked.series.at("parent").lrt_ms);

  auto base_calm = run_once(calm, sim_mode::baseline, 0);
  auto base_choked = run_once(choked, sim_mode::baseline, 0);
  CHECK(base_calm.series.at("parent").millicores !=
        base_choked.series.at("parent").millicores);
}

TEST_CASE("replications: same seed bit-identical, different master seeds differ") {
  auto g = five_node_app();
  auto in = five_node_inputs(g);
  in.workloads["f1"] = bottleneck(20.0, 120.0, 5);
  in.workloads["f1"].kind = workload_kind::step;
  in.workloads["f5"] = constant(5.0);
  in.sim.duration_s = 120.0;

  auto a = run_once(in, sim_mode::dependency_aware, 3);
  auto b = run_once(in, sim_mode::dependency_aware, 3);
  CHECK(a.series.at("f1").arrival_rps == b.series.at("f1").arrival_rps);
  CHECK(a.series.at("f1").millicores == b.series.at("f1").millicores);
  CHECK(a.series.at("f1").lrt_ms == b.series.at("f1").lrt_ms);

  auto in2 = in;
  in2.sim.master_seed = 99;
  auto c = run_once(in2, sim_mode::dependency_aware, 3);
  CHECK(a.series.at("f1").arrival_rps != c.series.at("f1").arrival_rps);

  // Replication index shifts the stream the same way.
  auto d = run_once(in, sim_mode::dependency_aware, 4);
  CHECK(a.series.at("f1").arrival_rps != d.series.at("f1").arrival_rps);
}

TEST_CASE("run_replications merges by index regardless of parallelism") {
  auto g = five_node_app();
  auto in = five_node_inputs(g);
  in.workloads["f1"] = bottleneck(20.0, 120.0, 5);
  in.workloads["f1"].kind = workload_kind::step;
  in.sim.duration_s = 60.0;
  in.sim.replications = 4;

  auto serial = run_replications(in, sim_mode::dependency_aware, 1);
  auto parallel = run_replications(in, sim_mode::dependency_aware, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    CHECK(serial[k].series.at("f1").millicores == parallel[k].series.at("f1").millicores);
    CHECK(serial[k].series.at("f1").arrival_rps == parallel[k].series.at("f1").arrival_rps);
  }
}
