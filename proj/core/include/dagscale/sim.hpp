#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dagscale/app_graph.hpp"
#include "dagscale/controller.hpp"
#include "dagscale/nominal.hpp"
#include "dagscale/perf_model.hpp"
#include "dagscale/set_points.hpp"
#include "dagscale/workload.hpp"

namespace dagscale {

enum class sim_mode { dependency_aware, baseline };

const char* to_string(sim_mode mode) noexcept;
sim_mode sim_mode_from_string(const std::string& s);

struct sim_config {
  double duration_s = 1200.0;
  double tick_ms = 100.0;
  double control_period_s = 1.0;
  int replications = 10;
  std::uint64_t master_seed = 0;
  sim_mode mode = sim_mode::dependency_aware;

  void validate() const;  // control period multiple of tick, duration multiple of period
  int ticks_per_period() const;
  int total_ticks() const;
};

// Request fan-out over the DAG (window rates, zero propagation delay):
//   r_i = user_rate(i) + sum over incoming edges (j -> i) of m_ji * r_j.
// user_rates_rps may only name entrypoints.
std::map<std::string, double> fan_out_requests(const app_graph& graph,
                                               const std::map<std::string, double>& user_rates_rps);

// Response-time composition, bottom-up:
//   rt_i = lrt_i + sum over invocation groups of max(m * rt_child).
std::map<std::string, double> compose_rt(const app_graph& graph,
                                         const std::map<std::string, double>& lrt_ms);

struct function_series {
  std::vector<double> arrival_rps;
  std::vector<double> lrt_ms;
  std::vector<double> rt_ms;
  std::vector<int> millicores;
};

struct run_result {
  double tick_s = 0.1;
  int ticks_per_window = 10;  // control period in ticks; reporting window
  int replication = 0;
  std::vector<double> time_s;
  std::map<std::string, function_series> series;
};

// Everything one closed-loop simulation needs.
struct sim_inputs {
  const app_graph* graph = nullptr;
  perf_params_map perf;
  nominal_profile profile;
  std::map<std::string, double> sla_ms;            // full SLA table (baseline control + reporting)
  std::map<std::string, workload_spec> workloads;  // per entrypoint
  controller_config ctrl;
  tuning_map tuning;
  double alpha = 0.5;
  sim_config sim;
};

// One replication: deterministic given (inputs, mode, replication index).
// Workload streams use spec.seed XOR splitmix64(master_seed + replication),
// so replications differ while per-entrypoint streams stay distinct.
run_result run_once(const sim_inputs& inputs, sim_mode mode, int replication);

// All replications; `jobs` > 1 runs them concurrently (results are merged by
// replication index, so concurrency never changes the output).
std::vector<run_result> run_replications(const sim_inputs& inputs, sim_mode mode, int jobs = 1);

// The set points a run in `mode` would attach to each controller.
std::map<std::string, double> control_set_points(const sim_inputs& inputs, sim_mode mode);

}  // namespace dagscale
