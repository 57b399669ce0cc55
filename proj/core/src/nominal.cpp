#include "dagscale/nominal.hpp"

#include <algorithm>

#include "dagscale/errors.hpp"

namespace dagscale {

namespace {

double lookup(const std::map<std::string, double>& m, std::string_view f, const char* what) {
  auto it = m.find(std::string(f));
  if (it == m.end())
    fail(errc::missing_profile_entry, std::string(what) + " missing for '" + std::string(f) + "'");
  return it->second;
}

}  // namespace

double nominal_profile::nlrt(std::string_view f) const { return lookup(nlrt_ms, f, "nlrt"); }
double nominal_profile::nrt(std::string_view f) const { return lookup(nrt_ms, f, "nrt"); }

nominal_profile compose_nominal(const app_graph& graph,
                                const std::map<std::string, double>& nlrt_ms) {
  nominal_profile profile;
  profile.nlrt_ms = nlrt_ms;

  for (const auto& f : graph.functions()) {
    double v = lookup(nlrt_ms, f.name, "nlrt");
    if (v <= 0.0)
      fail(errc::invalid_value, "nlrt of '" + f.name + "' must be > 0");
  }

  const auto& order = graph.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double total = profile.nlrt(*it);
    for (const auto& group : graph.invocation_groups(*it)) {
      double slowest = 0.0;
      for (const auto& m : group.members)
        slowest = std::max(slowest, m.multiplier * profile.nrt(m.child));
      total += slowest;
    }
    profile.nrt_ms[*it] = total;
  }
  return profile;
}

std::map<std::string, double> profile_via_simulation(const app_graph& graph,
                                                     const std::map<std::string, perf_params>& perf,
                                                     int warmup_requests, int sample_requests) {
  if (sample_requests < 1)
    fail(errc::invalid_value, "profiling needs at least one sample request");

  std::map<std::string, double> nlrt;
  for (const auto& f : graph.functions()) {
    auto it = perf.find(f.name);
    if (it == perf.end())
      fail(errc::missing_profile_entry, "no perf params for '" + f.name + "'");

    instance_state state;
    state.allocated_millicores = kProfilingReferenceMillicores;

    // One request at a time: the sustained rate is zero, each measurement is
    // the response time of an isolated request.
    double sum = 0.0;
    for (int i = 0; i < warmup_requests + sample_requests; ++i) {
      double lrt = perf_tick(state, it->second, /*arrival_rps=*/0.0, /*dt_s=*/1.0);
      if (i >= warmup_requests) sum += lrt;
    }
    nlrt[f.name] = sum / sample_requests;
  }
  return nlrt;
}

}  // namespace dagscale
