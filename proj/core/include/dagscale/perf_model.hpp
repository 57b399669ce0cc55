#pragma once

#include <map>
#include <string>

namespace dagscale {

// Fluid processor-sharing model of a single function instance. demand_core_ms
// is the CPU work per request in core-milliseconds; at the 1000-millicore
// profiling reference it equals the nominal local response time.
struct perf_params {
  double demand_core_ms = 1.0;
  double utilization_cap = 0.99;  // keeps the queueing term finite under overload
};

struct instance_state {
  int allocated_millicores = 0;
  double backlog_requests = 0.0;  // fluid queue length
  double last_lrt_ms = 0.0;
  double last_rt_ms = 0.0;
};

// Advances one simulation tick of dt seconds and returns the measured local
// response time:
//   c   = millicores / 1000 (cores), mu = c / demand (requests/s)
//   rho = arrival / mu
//   backlog <- max(0, backlog + (arrival - mu) * dt)
//   lrt = (demand / c) / (1 - min(rho, cap)) + backlog / mu * 1000
// In the zero-load limit (rho -> 0, empty backlog) lrt is demand / c, which
// is what profiling measures. Under persistent overload the backlog term
// grows without bound, which is the bottleneck behaviour the controllers
// have to cope with.
double perf_tick(instance_state& state, const perf_params& params, double arrival_rps,
                 double dt_s);

// lrt at zero load: demand / cores.
double zero_load_lrt_ms(const perf_params& params, int millicores);

// Analytic inverse of the steady-state model (no backlog): the allocation at
// which the measured lrt settles on target_lrt_ms under a constant arrival
// rate. Used by tests as an oracle and by config authors for warm starts.
double steady_state_millicores(const perf_params& params, double target_lrt_ms,
                               double arrival_rps);

using perf_params_map = std::map<std::string, perf_params>;

}  // namespace dagscale
