#include "dagscale/controller.hpp"

#include <algorithm>
#include <cmath>

#include "dagscale/errors.hpp"

namespace dagscale {

int pi_step(controller_state& state, const controller_config& config, double measured_ms) {
  if (measured_ms <= 0.0)
    fail(errc::non_positive_measurement,
         "measured response time " + std::to_string(measured_ms) + " ms");

  const double err = 1.0 / state.set_point_ms - 1.0 / measured_ms;
  const double proportional = config.gain_p * err;
  const double integral = state.integral_millicores + config.gain_i * err;
  const double raw = proportional + integral;

  int output;
  if (raw < config.cores_min_millicores) {
    output = config.cores_min_millicores;  // clamp binds: integral stays put
  } else if (raw > config.cores_max_millicores) {
    output = config.cores_max_millicores;
  } else {
    output = static_cast<int>(std::llround(raw));
    state.integral_millicores = integral;
  }
  state.last_output_millicores = output;
  return output;
}

namespace {

controller_bank make_bank(const app_graph& graph, const controller_config& base,
                          const tuning_map& tuning, control_mode mode,
                          const std::map<std::string, double>& set_points) {
  if (base.cores_min_millicores < 1 || base.cores_max_millicores < base.cores_min_millicores)
    fail(errc::invalid_value, "controller core bounds are inconsistent");

  controller_bank bank;
  for (const auto& f : graph.functions()) {
    controller_config cfg = base;
    cfg.mode = mode;
    int initial = cfg.cores_min_millicores;
    if (auto it = tuning.find(f.name); it != tuning.end()) {
      if (it->second.gain_p) cfg.gain_p = *it->second.gain_p;
      if (it->second.gain_i) cfg.gain_i = *it->second.gain_i;
      if (it->second.initial_millicores) initial = *it->second.initial_millicores;
    }
    initial = std::clamp(initial, cfg.cores_min_millicores, cfg.cores_max_millicores);

    controller_state state;
    state.set_point_ms = set_points.at(f.name);
    state.integral_millicores = initial;  // first output equals the warm start
    state.last_output_millicores = initial;

    bank.configs.emplace(f.name, cfg);
    bank.states.emplace(f.name, state);
  }
  return bank;
}

}  // namespace

controller_bank make_local_controllers(const app_graph& graph, const set_point_table& table,
                                       const controller_config& base, const tuning_map& tuning) {
  std::map<std::string, double> set_points;
  for (const auto& f : graph.functions()) set_points[f.name] = table.at(f.name).lsp_ms;
  return make_bank(graph, base, tuning, control_mode::local, set_points);
}

controller_bank make_total_controllers(const app_graph& graph,
                                       const std::map<std::string, double>& sla_ms, double alpha,
                                       const controller_config& base, const tuning_map& tuning) {
  std::map<std::string, double> set_points;
  for (const auto& f : graph.functions()) {
    auto it = sla_ms.find(f.name);
    if (it == sla_ms.end())
      fail(errc::missing_sla, "baseline mode needs an SLA for every function; '" + f.name +
                                  "' has none");
    set_points[f.name] = entry_set_point(it->second, alpha);
  }
  return make_bank(graph, base, tuning, control_mode::total, set_points);
}

}  // namespace dagscale
