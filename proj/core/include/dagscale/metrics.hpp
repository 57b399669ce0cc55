#pragma once

#include <map>
#include <string>
#include <vector>

#include "dagscale/sim.hpp"

namespace dagscale {

// Per-function summary of one run, aggregated over control-period windows.
// sigma uses the population formula. violation_pct is the share of windows
// whose mean composed response time exceeds the function's SLA; functions
// without an SLA report 0 and has_sla = false.
struct function_summary {
  double rt_mean_ms = 0.0;
  double rt_std_ms = 0.0;
  double lrt_mean_ms = 0.0;
  double cores_mean = 0.0;
  double cores_std = 0.0;
  double violation_pct = 0.0;
  bool has_sla = false;
  double sla_ms = 0.0;
  int windows = 0;
};

using summary_map = std::map<std::string, function_summary>;

summary_map summarize(const run_result& run, const std::map<std::string, double>& sla_ms,
                      int skip_warmup_windows = 0);

// mu/sigma of the per-run metrics across replications, per function plus an
// `overall` row averaged over functions.
struct metric_cell {
  double rt_mu = 0.0, rt_sigma = 0.0;
  double v_mu = 0.0, v_sigma = 0.0;
  double c_mu = 0.0, c_sigma = 0.0;
  bool has_sla = false;
  double sla_ms = 0.0;
};

struct replicated_summary {
  std::map<std::string, metric_cell> rows;
  metric_cell overall;
  int replications = 0;
};

replicated_summary aggregate(const std::vector<run_result>& runs,
                             const std::map<std::string, double>& sla_ms,
                             int skip_warmup_windows = 0);

// Relative deltas of run set `a` against reference set `b` (a is typically
// the dependency-aware mode, b the baseline). Replications are paired by
// index (same seed), deltas computed per pair and then averaged.
struct comparison_row {
  double cores_reduction_pct = 0.0;  // (b - a) / b * 100
  double rt_delta_pct = 0.0;         // (a - b) / b * 100
  double violation_delta_pp = 0.0;   // a - b, percentage points
  double a_cores_mean = 0.0, b_cores_mean = 0.0;
  double a_rt_mean = 0.0, b_rt_mean = 0.0;
  double a_violation_pct = 0.0, b_violation_pct = 0.0;
};

struct comparison_report {
  std::map<std::string, comparison_row> per_function;
  comparison_row overall;
  int replications = 0;
};

comparison_report compare(const std::vector<run_result>& a, const std::vector<run_result>& b,
                          const std::map<std::string, double>& sla_ms,
                          int skip_warmup_windows = 0);

}  // namespace dagscale
