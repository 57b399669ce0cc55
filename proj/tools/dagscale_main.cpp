// dagscale command-line front end: validate app definitions, derive set
// points, run closed-loop experiments, compare the two control modes,
// profile apps and synthesize random DAGs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dagscale/config_io.hpp"
#include "dagscale/errors.hpp"
#include "dagscale/metrics.hpp"
#include "dagscale/nominal.hpp"
#include "dagscale/report.hpp"
#include "dagscale/set_points.hpp"
#include "dagscale/sim.hpp"
#include "dagscale/synth.hpp"

namespace fs = std::filesystem;
using namespace dagscale;

namespace {

struct global_options {
  std::string out_dir;         // --out, falls back to DAGSCALE_OUT, then experiment file
  std::string format = "table";  // csv | table | json
  int jobs = 1;
  bool seed_set = false;
  std::uint64_t seed = 0;
  double skip_warmup_s = -1.0;  // <0: use experiment file value
};

fs::path resolve_out_dir(const global_options& opts, const experiment_file& exp) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv("DAGSCALE_OUT")) {
    if (*env) return fs::path(env);
  }
  if (!exp.output_dir.empty()) return exp.output_dir;
  fail(errc::bad_config, "no output directory: use --out, DAGSCALE_OUT or 'output_dir'");
}

void apply_overrides(const global_options& opts, experiment_file& exp) {
  if (opts.seed_set) exp.sim.master_seed = opts.seed;
  if (opts.skip_warmup_s >= 0.0)
    exp.skip_warmup_windows = static_cast<int>(opts.skip_warmup_s / exp.sim.control_period_s);
}

std::ofstream must_open(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(errc::io_error, "cannot write '" + path.string() + "'");
  return os;
}

int cmd_validate(const std::string& app_file) {
  const auto bundle = load_app(app_file);
  std::cout << "OK: " << (bundle.name.empty() ? app_file : bundle.name) << ": "
            << bundle.graph.size() << " functions, " << bundle.graph.edges().size() << " edges, "
            << bundle.graph.entrypoint_names().size() << " entrypoints\n";
  return 0;
}

int cmd_setpoints(const std::string& app_file, const std::string& profile_file, double alpha,
                  const global_options& opts) {
  const auto bundle = load_app(app_file);
  const auto nlrt = profile_file.empty()
                        ? profile_via_simulation(bundle.graph, bundle.perf, 0, 1)
                        : load_profile(profile_file);
  const auto profile = compose_nominal(bundle.graph, nlrt);

  std::map<std::string, double> entry_slas;
  for (const auto& f : bundle.graph.functions())
    if (f.entrypoint && f.sla_ms) entry_slas[f.name] = *f.sla_ms;

  const auto table = propagate(bundle.graph, profile, entry_slas, alpha);
  if (opts.format == "json")
    std::cout << render_set_point_json(bundle.graph, table);
  else
    write_set_point_table(std::cout, bundle.graph, table);
  return 0;
}

int cmd_run(const std::string& experiment_path, const global_options& opts) {
  auto exp = load_experiment(experiment_path);
  apply_overrides(opts, exp);
  const auto out_dir = resolve_out_dir(opts, exp);

  const auto inputs = exp.inputs();
  const auto mode = exp.sim.mode;
  std::cerr << "running " << exp.sim.replications << " replication(s), mode "
            << to_string(mode) << "\n";
  const auto runs = run_replications(inputs, mode, opts.jobs);
  const auto summary = aggregate(runs, inputs.sla_ms, exp.skip_warmup_windows);

  write_run_outputs(out_dir, runs, summary, to_string(mode));
  if (opts.format == "json")
    std::cout << render_summary_json(summary, to_string(mode));
  else if (opts.format == "csv")
    write_summary_csv(std::cout, summary, to_string(mode));
  else
    write_summary_table(std::cout, summary, to_string(mode));
  std::cerr << "outputs in " << out_dir.string() << "\n";
  return 0;
}

int cmd_compare(const std::string& experiment_path, const global_options& opts) {
  auto exp = load_experiment(experiment_path);
  apply_overrides(opts, exp);
  const auto out_dir = resolve_out_dir(opts, exp);
  const auto inputs = exp.inputs();

  std::cerr << "running both modes, " << exp.sim.replications << " replication(s) each\n";
  const auto dep_runs = run_replications(inputs, sim_mode::dependency_aware, opts.jobs);
  const auto base_runs = run_replications(inputs, sim_mode::baseline, opts.jobs);

  const auto dep_summary = aggregate(dep_runs, inputs.sla_ms, exp.skip_warmup_windows);
  const auto base_summary = aggregate(base_runs, inputs.sla_ms, exp.skip_warmup_windows);
  const auto report = compare(dep_runs, base_runs, inputs.sla_ms, exp.skip_warmup_windows);

  write_run_outputs(out_dir / "dependency_aware", dep_runs, dep_summary, "dependency_aware");
  write_run_outputs(out_dir / "baseline", base_runs, base_summary, "baseline");
  {
    auto os = must_open(out_dir / "comparison.csv");
    write_comparison_csv(os, report);
  }
  {
    auto os = must_open(out_dir / "comparison.txt");
    write_comparison_table(os, report, dep_summary, base_summary, "dependency_aware",
                           "baseline");
  }
  {
    auto os = must_open(out_dir / "comparison.json");
    os << render_comparison_json(report);
  }

  if (opts.format == "json")
    std::cout << render_comparison_json(report);
  else if (opts.format == "csv")
    write_comparison_csv(std::cout, report);
  else
    write_comparison_table(std::cout, report, dep_summary, base_summary, "dependency_aware",
                           "baseline");
  std::cerr << "outputs in " << out_dir.string() << "\n";
  return 0;
}

int cmd_profile(const std::string& app_file, const std::string& out_file, int warmup,
                int samples) {
  const auto bundle = load_app(app_file);
  const auto nlrt = profile_via_simulation(bundle.graph, bundle.perf, warmup, samples);
  if (out_file.empty()) {
    std::cout << render_profile(nlrt);
  } else {
    save_profile(nlrt, out_file);
    std::cerr << "profile written to " << out_file << "\n";
  }
  return 0;
}

int cmd_synth(int n_functions, int n_entrypoints, double avg_out_degree,
              double parallel_fraction, std::uint64_t seed, double nlrt_min, double nlrt_max,
              const std::string& app_out, const std::string& profile_out) {
  synth_params params;
  params.n_functions = n_functions;
  params.n_entrypoints = n_entrypoints;
  params.avg_out_degree = avg_out_degree;
  params.parallel_fraction = parallel_fraction;
  params.seed = seed;
  params.nlrt_min_ms = nlrt_min;
  params.nlrt_max_ms = nlrt_max;

  const auto result = synthesize(params);
  save_app(result.app, app_out);
  save_profile(result.nlrt_ms, profile_out);
  std::cerr << "wrote " << app_out << " and " << profile_out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependency-aware CPU allocation simulator for serverless DAGs"};
  app.require_subcommand(1);

  global_options opts;
  app.add_option("--out", opts.out_dir, "output directory (overrides DAGSCALE_OUT and config)");
  app.add_option("--format", opts.format, "report format: csv | table | json")
      ->check(CLI::IsMember({"csv", "table", "json"}));
  app.add_option("--jobs", opts.jobs, "max concurrent replications")->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "override the experiment's master seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  app.add_option("--skip-warmup-s", opts.skip_warmup_s,
                 "drop the first N seconds from reported statistics");

  std::string app_file, profile_file, experiment_path, out_file;
  double alpha = 0.5;
  int warmup = 0, samples = 1;

  auto* validate = app.add_subcommand("validate", "validate an application definition file");
  validate->add_option("app", app_file, "application JSON file")->required();

  auto* setpoints =
      app.add_subcommand("setpoints", "derive per-function set points from SLAs");
  setpoints->add_option("app", app_file, "application JSON file")->required();
  setpoints->add_option("--profile", profile_file,
                        "nominal profile JSON (default: profile via simulation)");
  setpoints->add_option("--alpha", alpha, "SLA scaling factor in (0,1]");

  auto* run = app.add_subcommand("run", "run one experiment (one mode, all replications)");
  run->add_option("experiment", experiment_path, "experiment JSON file")->required();

  auto* cmp =
      app.add_subcommand("compare", "run both modes on the same grid and compare them");
  cmp->add_option("experiment", experiment_path, "experiment JSON file")->required();

  auto* profile = app.add_subcommand("profile", "measure nominal local response times");
  profile->add_option("app", app_file, "application JSON file")->required();
  profile->add_option("--out-file", out_file, "profile JSON output (default: stdout)");
  profile->add_option("--warmup", warmup, "requests to discard per function");
  profile->add_option("--samples", samples, "requests to average per function");

  int n_functions = 25, n_entrypoints = 6;
  double avg_out_degree = 2.0, parallel_fraction = 0.5;
  std::uint64_t synth_seed = 42;
  double nlrt_min = 2.0, nlrt_max = 10.0;
  std::string synth_app_out = "synth.app.json", synth_profile_out = "synth.profile.json";

  auto* synth = app.add_subcommand("synth", "synthesize a random application DAG");
  synth->add_option("--functions", n_functions, "number of functions");
  synth->add_option("--entrypoints", n_entrypoints, "number of entrypoints");
  synth->add_option("--avg-out-degree", avg_out_degree, "average out-degree");
  synth->add_option("--parallel-fraction", parallel_fraction,
                    "share of edges inside parallel groups");
  synth->add_option("--synth-seed", synth_seed, "generator seed");
  synth->add_option("--nlrt-min", nlrt_min, "lower bound of random nominal times (ms)");
  synth->add_option("--nlrt-max", nlrt_max, "upper bound of random nominal times (ms)");
  synth->add_option("--app-out", synth_app_out, "application file to write");
  synth->add_option("--profile-out", synth_profile_out, "profile file to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(app_file);
    if (setpoints->parsed()) return cmd_setpoints(app_file, profile_file, alpha, opts);
    if (run->parsed()) return cmd_run(experiment_path, opts);
    if (cmp->parsed()) return cmd_compare(experiment_path, opts);
    if (profile->parsed()) return cmd_profile(app_file, out_file, warmup, samples);
    if (synth->parsed())
      return cmd_synth(n_functions, n_entrypoints, avg_out_degree, parallel_fraction,
                       synth_seed, nlrt_min, nlrt_max, synth_app_out, synth_profile_out);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
