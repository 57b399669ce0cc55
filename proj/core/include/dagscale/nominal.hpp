#pragma once

#include <map>
#include <string>
#include <string_view>

#include "dagscale/app_graph.hpp"
#include "dagscale/perf_model.hpp"

namespace dagscale {

// Per-function nominal timings measured (or declared) under quiescent
// conditions: nlrt is the local response time alone, nrt the composed
// response time of the whole subtree below the function.
struct nominal_profile {
  std::map<std::string, double> nlrt_ms;
  std::map<std::string, double> nrt_ms;

  double nlrt(std::string_view f) const;
  double nrt(std::string_view f) const;
};

// Bottom-up composition over the DAG:
//   nrt_i = nlrt_i + sum over invocation groups of max(m * nrt_child).
// A sequential call is a singleton group, so its max is just m * nrt_child.
nominal_profile compose_nominal(const app_graph& graph,
                                const std::map<std::string, double>& nlrt_ms);

// Profiles each function in isolation: a static reference allocation of
// 1000 millicores, one request at a time (zero sustained arrival rate),
// `warmup_requests` discarded, mean over `sample_requests` returned. With
// the deterministic performance model the mean equals the configured
// demand exactly; warm-up exists for interface fidelity.
std::map<std::string, double> profile_via_simulation(
    const app_graph& graph, const std::map<std::string, perf_params>& perf,
    int warmup_requests, int sample_requests);

constexpr int kProfilingReferenceMillicores = 1000;

}  // namespace dagscale
