#pragma once

#include <map>
#include <optional>
#include <string>

#include "dagscale/app_graph.hpp"
#include "dagscale/set_points.hpp"

namespace dagscale {

// local: the controller regulates the function's local response time against
// its decomposed local set point (dependency-aware operation).
// total: the controller regulates the composed response time against
// alpha * SLA, dependencies ignored (the baseline).
enum class control_mode { local, total };

struct controller_config {
  double gain_p = 0.0;
  double gain_i = 0.0;
  int cores_min_millicores = 100;
  int cores_max_millicores = 8000;
  double period_s = 1.0;
  control_mode mode = control_mode::local;
};

struct controller_state {
  double integral_millicores = 0.0;  // running I term; carries the allocation
  double set_point_ms = 0.0;
  int last_output_millicores = 0;
};

// One PI update in reciprocal-time space:
//   err = 1/set_point - 1/measured      (positive when the function is slow)
//   P   = gain_p * err
//   I  += gain_i * err
//   out = clamp(P + I, cores_min, cores_max), rounded to the millicore
// Anti-windup: when the clamp binds, the integral keeps its pre-step value,
// applied identically in both modes.
// Throws non_positive_measurement for measured_ms <= 0 (a perf-model bug).
int pi_step(controller_state& state, const controller_config& config, double measured_ms);

// Optional per-function deviations from the shared controller config.
// Gains scale with a function's demand, so one pair of gains rarely suits a
// whole application; initial allocations warm-start the loop.
struct controller_tuning {
  std::optional<double> gain_p;
  std::optional<double> gain_i;
  std::optional<int> initial_millicores;
};

using tuning_map = std::map<std::string, controller_tuning>;

struct controller_bank {
  std::map<std::string, controller_config> configs;
  std::map<std::string, controller_state> states;
};

// One independent controller per function; no shared state. The integral is
// initialized so the first output equals the configured initial allocation
// (cores_min unless overridden).
controller_bank make_local_controllers(const app_graph& graph, const set_point_table& table,
                                       const controller_config& base,
                                       const tuning_map& tuning = {});

// Baseline flavour: every function must carry an SLA; the set point is
// alpha * SLA. Throws missing_sla otherwise.
controller_bank make_total_controllers(const app_graph& graph,
                                       const std::map<std::string, double>& sla_ms,
                                       double alpha, const controller_config& base,
                                       const tuning_map& tuning = {});

}  // namespace dagscale
