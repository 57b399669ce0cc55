#pragma once

#include <cstdint>
#include <map>

#include "dagscale/app_graph.hpp"
#include "dagscale/config_io.hpp"

namespace dagscale {

struct synth_params {
  int n_functions = 1;
  int n_entrypoints = 1;
  double avg_out_degree = 0.0;
  double parallel_fraction = 0.0;  // target share of edges inside parallel groups
  std::uint64_t seed = 0;
  double nlrt_min_ms = 2.0;
  double nlrt_max_ms = 10.0;
  double multiplier2_fraction = 0.15;  // share of edges with multiplier 2
};

struct synth_result {
  app_bundle app;                       // SLAs set to 2x composed nominal
  std::map<std::string, double> nlrt_ms;
};

// Random acyclic application with the requested statistics, deterministic
// per seed. Every non-entrypoint gets at least one caller; entrypoints are
// spread across depths so some of them have ancestors (the interesting case
// for bottleneck propagation). Throws infeasible_shape when the statistics
// cannot be met.
synth_result synthesize(const synth_params& params);

}  // namespace dagscale
