#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "dagscale/app_graph.hpp"
#include "dagscale/perf_model.hpp"
#include "dagscale/sim.hpp"

namespace dagscale {

// Application definition file: the annotated DAG plus the performance
// parameters embedded under each function. Canonical serialization is JSON;
// unknown keys are rejected.
struct app_bundle {
  std::string name;
  bool reconstructed = false;  // marks hand-reconstructed benchmark DAGs
  app_graph graph;
  perf_params_map perf;
};

app_bundle load_app(const std::filesystem::path& path);
app_bundle parse_app(const std::string& json_text);
std::string render_app(const app_bundle& bundle);
void save_app(const app_bundle& bundle, const std::filesystem::path& path);

// Profile file: {"<function>": {"nlrt_ms": <number>}}. Composed nrt is
// always recomputed, never read.
std::map<std::string, double> load_profile(const std::filesystem::path& path);
std::map<std::string, double> parse_profile(const std::string& json_text);
std::string render_profile(const std::map<std::string, double>& nlrt_ms);
void save_profile(const std::map<std::string, double>& nlrt_ms,
                  const std::filesystem::path& path);

// Experiment file: references an app file, a profile (inline or by path),
// workloads, controller settings, sim settings and an output directory.
struct experiment_file {
  std::filesystem::path source_path;
  app_bundle app;
  std::map<std::string, double> nlrt_ms;
  std::map<std::string, workload_spec> workloads;
  controller_config ctrl;
  tuning_map tuning;
  double alpha = 0.5;
  sim_config sim;
  std::filesystem::path output_dir;
  int skip_warmup_windows = 0;

  sim_inputs inputs() const;
};

experiment_file load_experiment(const std::filesystem::path& path);

}  // namespace dagscale
