#include "dagscale/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "dagscale/errors.hpp"
#include "dagscale/rng.hpp"

namespace dagscale {

const char* to_string(sim_mode mode) noexcept {
  switch (mode) {
    case sim_mode::dependency_aware: return "dependency_aware";
    case sim_mode::baseline: return "baseline";
  }
  return "?";
}

sim_mode sim_mode_from_string(const std::string& s) {
  if (s == "dependency_aware") return sim_mode::dependency_aware;
  if (s == "baseline") return sim_mode::baseline;
  fail(errc::bad_config, "unknown mode '" + s + "' (dependency_aware | baseline)");
}

namespace {

bool divides(double inner, double outer) {
  const double ratio = outer / inner;
  return std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0;
}

}  // namespace

void sim_config::validate() const {
  if (tick_ms <= 0.0) fail(errc::invalid_value, "tick_ms must be > 0");
  if (!divides(tick_ms / 1000.0, control_period_s))
    fail(errc::invalid_value, "control_period_s must be a multiple of tick_ms");
  if (!divides(control_period_s, duration_s))
    fail(errc::invalid_value, "duration_s must be a multiple of control_period_s");
  if (replications < 1) fail(errc::invalid_value, "replications must be >= 1");
}

int sim_config::ticks_per_period() const {
  return static_cast<int>(std::llround(control_period_s / (tick_ms / 1000.0)));
}

int sim_config::total_ticks() const {
  return static_cast<int>(std::llround(duration_s / (tick_ms / 1000.0)));
}

std::map<std::string, double> fan_out_requests(const app_graph& graph,
                                               const std::map<std::string, double>& user_rates_rps) {
  for (const auto& [name, rate] : user_rates_rps) {
    if (rate < 0.0) fail(errc::invalid_value, "user rate for '" + name + "' must be >= 0");
    if (!graph.function(name).entrypoint)
      fail(errc::invalid_value, "'" + name + "' is not an entrypoint and cannot receive users");
  }

  std::map<std::string, double> rates;
  for (const auto& name : graph.topological_order()) {
    double total = 0.0;
    if (auto it = user_rates_rps.find(name); it != user_rates_rps.end()) total = it->second;
    for (const auto& e : graph.incoming_edges(name)) total += e.multiplier * rates.at(e.source);
    rates[name] = total;
  }
  return rates;
}

std::map<std::string, double> compose_rt(const app_graph& graph,
                                         const std::map<std::string, double>& lrt_ms) {
  std::map<std::string, double> rt;
  const auto& order = graph.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto lrt_it = lrt_ms.find(*it);
    if (lrt_it == lrt_ms.end())
      fail(errc::missing_profile_entry, "no lrt measurement for '" + *it + "'");
    double total = lrt_it->second;
    for (const auto& group : graph.invocation_groups(*it)) {
      double slowest = 0.0;
      for (const auto& m : group.members)
        slowest = std::max(slowest, m.multiplier * rt.at(m.child));
      total += slowest;
    }
    rt[*it] = total;
  }
  return rt;
}

std::map<std::string, double> control_set_points(const sim_inputs& inputs, sim_mode mode) {
  const app_graph& graph = *inputs.graph;
  std::map<std::string, double> points;
  if (mode == sim_mode::dependency_aware) {
    std::map<std::string, double> entry_slas;
    for (const auto& f : graph.functions())
      if (f.entrypoint && inputs.sla_ms.count(f.name)) entry_slas[f.name] = inputs.sla_ms.at(f.name);
    const auto table = propagate(graph, inputs.profile, entry_slas, inputs.alpha);
    for (const auto& [name, entry] : table.rows) points[name] = entry.lsp_ms;
  } else {
    for (const auto& f : graph.functions()) {
      auto it = inputs.sla_ms.find(f.name);
      if (it == inputs.sla_ms.end())
        fail(errc::missing_sla, "baseline mode needs an SLA for every function; '" + f.name +
                                    "' has none");
      points[f.name] = entry_set_point(it->second, inputs.alpha);
    }
  }
  return points;
}

run_result run_once(const sim_inputs& inputs, sim_mode mode, int replication) {
  const app_graph& graph = *inputs.graph;
  inputs.sim.validate();

  for (const auto& [name, spec] : inputs.workloads) {
    spec.validate();
    if (!graph.function(name).entrypoint)
      fail(errc::bad_config, "workload attached to non-entrypoint '" + name + "'");
  }

  // Shift every workload stream per replication while keeping distinct
  // per-entrypoint streams distinct.
  const std::uint64_t shift = splitmix64_mix(inputs.sim.master_seed + replication);
  std::map<std::string, workload_spec> workloads;
  for (const auto& [name, spec] : inputs.workloads)
    workloads.emplace(name, with_seed(spec, spec.seed ^ shift));

  controller_bank bank;
  if (mode == sim_mode::dependency_aware) {
    std::map<std::string, double> entry_slas;
    for (const auto& f : graph.functions())
      if (f.entrypoint && inputs.sla_ms.count(f.name)) entry_slas[f.name] = inputs.sla_ms.at(f.name);
    bank = make_local_controllers(graph, propagate(graph, inputs.profile, entry_slas, inputs.alpha),
                                  inputs.ctrl, inputs.tuning);
  } else {
    bank = make_total_controllers(graph, inputs.sla_ms, inputs.alpha, inputs.ctrl, inputs.tuning);
  }

  std::map<std::string, instance_state> instances;
  std::map<std::string, const perf_params*> perf;
  for (const auto& f : graph.functions()) {
    auto it = inputs.perf.find(f.name);
    if (it == inputs.perf.end())
      fail(errc::missing_profile_entry, "no perf params for '" + f.name + "'");
    perf[f.name] = &it->second;
    instance_state st;
    st.allocated_millicores = bank.states.at(f.name).last_output_millicores;
    instances[f.name] = st;
  }

  const double dt = inputs.sim.tick_ms / 1000.0;
  const int ticks_per_period = inputs.sim.ticks_per_period();
  const int total_ticks = inputs.sim.total_ticks();

  run_result result;
  result.tick_s = dt;
  result.ticks_per_window = ticks_per_period;
  result.replication = replication;
  result.time_s.reserve(total_ticks);
  for (const auto& f : graph.functions()) {
    auto& s = result.series[f.name];
    s.arrival_rps.reserve(total_ticks);
    s.lrt_ms.reserve(total_ticks);
    s.rt_ms.reserve(total_ticks);
    s.millicores.reserve(total_ticks);
  }

  std::map<std::string, double> window_sum;  // of the controlled measurement
  std::map<std::string, double> window_arrivals;
  for (const auto& f : graph.functions()) {
    window_sum[f.name] = 0.0;
    window_arrivals[f.name] = 0.0;
  }

  for (int tick = 0; tick < total_ticks; ++tick) {
    const double t = tick * dt;
    try {
      std::map<std::string, double> user_rates;
      for (const auto& [name, spec] : workloads) user_rates[name] = rate_at(spec, t);
      const auto rates = fan_out_requests(graph, user_rates);

      std::map<std::string, double> lrt;
      for (auto& [name, st] : instances) lrt[name] = perf_tick(st, *perf[name], rates.at(name), dt);
      auto rt = compose_rt(graph, lrt);
      for (auto& [name, st] : instances) st.last_rt_ms = rt.at(name);

      result.time_s.push_back(t);
      for (const auto& f : graph.functions()) {
        auto& s = result.series[f.name];
        s.arrival_rps.push_back(rates.at(f.name));
        s.lrt_ms.push_back(lrt.at(f.name));
        s.rt_ms.push_back(rt.at(f.name));
        s.millicores.push_back(instances.at(f.name).allocated_millicores);
        window_sum[f.name] +=
            (mode == sim_mode::dependency_aware) ? lrt.at(f.name) : rt.at(f.name);
        window_arrivals[f.name] += rates.at(f.name);
      }

      if ((tick + 1) % ticks_per_period == 0) {
        // Controllers act on the window mean; new allocations take effect
        // from the next tick. A window without any requests (and nothing
        // left in the backlog) produced no measurements, so the controller
        // holds: an idle system stays at its current allocation.
        for (const auto& f : graph.functions()) {
          const double measured = window_sum[f.name] / ticks_per_period;
          const bool idle = window_arrivals[f.name] == 0.0 &&
                            instances.at(f.name).backlog_requests == 0.0;
          window_sum[f.name] = 0.0;
          window_arrivals[f.name] = 0.0;
          if (idle) continue;
          const int allocation =
              pi_step(bank.states.at(f.name), bank.configs.at(f.name), measured);
          instances.at(f.name).allocated_millicores = allocation;
        }
      }
    } catch (const error& e) {
      std::ostringstream msg;
      msg << "replication " << replication << ", t=" << t << "s: " << e.what();
      fail(e.code(), msg.str());
    }
  }
  return result;
}

std::vector<run_result> run_replications(const sim_inputs& inputs, sim_mode mode, int jobs) {
  const int n = inputs.sim.replications;
  std::vector<run_result> results(n);
  jobs = std::clamp(jobs, 1, n);

  if (jobs == 1) {
    for (int k = 0; k < n; ++k) results[k] = run_once(inputs, mode, k);
    return results;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
      try {
        results[k] = run_once(inputs, mode, k);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (failed) fail(errc::invalid_value, first_error);
  return results;
}

}  // namespace dagscale
