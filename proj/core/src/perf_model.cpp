#include "dagscale/perf_model.hpp"

#include <algorithm>
#include <cmath>

#include "dagscale/errors.hpp"

namespace dagscale {

double perf_tick(instance_state& state, const perf_params& params, double arrival_rps,
                 double dt_s) {
  if (arrival_rps < 0.0) fail(errc::invalid_value, "arrival rate must be >= 0");
  if (dt_s <= 0.0) fail(errc::invalid_value, "tick length must be > 0");
  if (state.allocated_millicores < 1) fail(errc::invalid_value, "allocation must be >= 1 millicore");

  const double cores = state.allocated_millicores / 1000.0;
  const double service_rps = cores * 1000.0 / params.demand_core_ms;
  const double rho = arrival_rps / service_rps;

  state.backlog_requests =
      std::max(0.0, state.backlog_requests + (arrival_rps - service_rps) * dt_s);

  const double queue_factor = 1.0 - std::min(rho, params.utilization_cap);
  const double lrt = (params.demand_core_ms / cores) / queue_factor +
                     (state.backlog_requests / service_rps) * 1000.0;
  state.last_lrt_ms = lrt;
  return lrt;
}

double zero_load_lrt_ms(const perf_params& params, int millicores) {
  return params.demand_core_ms / (millicores / 1000.0);
}

double steady_state_millicores(const perf_params& params, double target_lrt_ms,
                               double arrival_rps) {
  if (target_lrt_ms <= 0.0) fail(errc::invalid_value, "target lrt must be > 0");
  // Solve (d/c) / (1 - lambda d / (1000 c)) = target for millicores m = 1000 c.
  return 1000.0 * params.demand_core_ms / target_lrt_ms + arrival_rps * params.demand_core_ms;
}

}  // namespace dagscale
