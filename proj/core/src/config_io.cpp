#include "dagscale/config_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dagscale/errors.hpp"

namespace dagscale {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(errc::bad_config, what + ": malformed JSON");
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(errc::io_error, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_json(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(errc::io_error, "cannot write '" + path.string() + "'");
  os << text;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok) fail(errc::bad_config, context + ": unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) fail(errc::bad_config, context + ": missing key '" + key + "'");
  if (!obj[key].is_number()) fail(errc::bad_config, context + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

double get_number_or(const json& obj, const char* key, double fallback,
                     const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(errc::bad_config, context + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) fail(errc::bad_config, context + ": missing key '" + key + "'");
  if (!obj[key].is_string()) fail(errc::bad_config, context + ": '" + key + "' must be a string");
  return obj[key].get<std::string>();
}

bool get_bool_or(const json& obj, const char* key, bool fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean())
    fail(errc::bad_config, context + ": '" + key + "' must be a boolean");
  return obj[key].get<bool>();
}

std::uint64_t get_seed_or(const json& obj, const char* key, std::uint64_t fallback,
                          const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned())
    fail(errc::bad_config, context + ": '" + key + "' must be a non-negative integer");
  return obj[key].get<std::uint64_t>();
}

}  // namespace

app_bundle parse_app(const std::string& json_text) {
  const json j = parse_json(json_text, "app file");
  if (!j.is_object()) fail(errc::bad_config, "app file: top level must be an object");
  check_keys(j, {"name", "reconstructed", "functions", "edges"}, "app file");

  app_bundle bundle;
  bundle.name = j.contains("name") ? get_string(j, "name", "app file") : "";
  bundle.reconstructed = get_bool_or(j, "reconstructed", false, "app file");

  if (!j.contains("functions") || !j["functions"].is_array())
    fail(errc::bad_config, "app file: 'functions' must be an array");
  std::vector<function_spec> functions;
  perf_params_map perf;
  for (const auto& item : j["functions"]) {
    if (!item.is_object()) fail(errc::bad_config, "app file: function entries must be objects");
    check_keys(item, {"name", "sla_ms", "entrypoint", "demand_core_ms", "utilization_cap"},
               "function entry");
    function_spec f;
    f.name = get_string(item, "name", "function entry");
    if (item.contains("sla_ms")) f.sla_ms = get_number(item, "sla_ms", "function '" + f.name + "'");
    f.entrypoint = get_bool_or(item, "entrypoint", false, "function '" + f.name + "'");
    if (item.contains("demand_core_ms")) {
      perf_params p;
      p.demand_core_ms = get_number(item, "demand_core_ms", "function '" + f.name + "'");
      p.utilization_cap =
          get_number_or(item, "utilization_cap", 0.99, "function '" + f.name + "'");
      if (p.demand_core_ms <= 0.0)
        fail(errc::bad_config, "function '" + f.name + "': demand_core_ms must be > 0");
      if (!(p.utilization_cap > 0.0) || !(p.utilization_cap < 1.0))
        fail(errc::bad_config, "function '" + f.name + "': utilization_cap must be in (0,1)");
      perf[f.name] = p;
    }
    functions.push_back(std::move(f));
  }

  std::vector<dependency_edge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) fail(errc::bad_config, "app file: 'edges' must be an array");
    for (const auto& item : j["edges"]) {
      if (!item.is_object()) fail(errc::bad_config, "app file: edge entries must be objects");
      check_keys(item, {"from", "to", "group_id", "multiplier"}, "edge entry");
      dependency_edge e;
      e.source = get_string(item, "from", "edge entry");
      e.target = get_string(item, "to", "edge entry");
      e.group_id = static_cast<int>(get_number(item, "group_id", "edge entry"));
      e.multiplier = static_cast<int>(get_number_or(item, "multiplier", 1.0, "edge entry"));
      edges.push_back(std::move(e));
    }
  }

  bundle.graph = app_graph::build(std::move(functions), std::move(edges));
  bundle.perf = std::move(perf);
  return bundle;
}

app_bundle load_app(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(errc::io_error, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_app(buf.str());
}

std::string render_app(const app_bundle& bundle) {
  ordered_json j;
  if (!bundle.name.empty()) j["name"] = bundle.name;
  if (bundle.reconstructed) j["reconstructed"] = true;
  j["functions"] = ordered_json::array();
  for (const auto& f : bundle.graph.functions()) {
    ordered_json item;
    item["name"] = f.name;
    if (f.sla_ms) item["sla_ms"] = *f.sla_ms;
    item["entrypoint"] = f.entrypoint;
    if (auto it = bundle.perf.find(f.name); it != bundle.perf.end()) {
      item["demand_core_ms"] = it->second.demand_core_ms;
      if (it->second.utilization_cap != 0.99)
        item["utilization_cap"] = it->second.utilization_cap;
    }
    j["functions"].push_back(item);
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : bundle.graph.edges()) {
    ordered_json item;
    item["from"] = e.source;
    item["to"] = e.target;
    item["group_id"] = e.group_id;
    item["multiplier"] = e.multiplier;
    j["edges"].push_back(item);
  }
  return j.dump(2) + "\n";
}

void save_app(const app_bundle& bundle, const std::filesystem::path& path) {
  write_text_file(path, render_app(bundle));
}

std::map<std::string, double> parse_profile(const std::string& json_text) {
  const json j = parse_json(json_text, "profile file");
  if (!j.is_object()) fail(errc::bad_config, "profile file: top level must be an object");
  std::map<std::string, double> nlrt;
  for (const auto& [name, value] : j.items()) {
    if (!value.is_object())
      fail(errc::bad_config, "profile file: entry '" + name + "' must be an object");
    check_keys(value, {"nlrt_ms"}, "profile entry '" + name + "'");
    const double v = get_number(value, "nlrt_ms", "profile entry '" + name + "'");
    if (v <= 0.0) fail(errc::bad_config, "profile entry '" + name + "': nlrt_ms must be > 0");
    nlrt[name] = v;
  }
  return nlrt;
}

std::map<std::string, double> load_profile(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(errc::io_error, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_profile(buf.str());
}

std::string render_profile(const std::map<std::string, double>& nlrt_ms) {
  ordered_json j;
  for (const auto& [name, value] : nlrt_ms) j[name] = {{"nlrt_ms", value}};
  return j.dump(2) + "\n";
}

void save_profile(const std::map<std::string, double>& nlrt_ms,
                  const std::filesystem::path& path) {
  write_text_file(path, render_profile(nlrt_ms));
}

namespace {

workload_spec parse_workload(const json& j, const std::string& context) {
  check_keys(j, {"kind", "params", "seed"}, context);
  workload_spec spec;
  spec.kind = workload_kind_from_string(get_string(j, "kind", context));
  spec.seed = get_seed_or(j, "seed", 0, context);
  if (!j.contains("params") || !j["params"].is_object())
    fail(errc::bad_config, context + ": missing 'params' object");
  const json& p = j["params"];
  switch (spec.kind) {
    case workload_kind::constant:
      check_keys(p, {"rps"}, context);
      spec.rps = get_number(p, "rps", context);
      break;
    case workload_kind::ramp:
      check_keys(p, {"start_rps", "increment_rps_per_s", "max_rps"}, context);
      spec.start_rps = get_number(p, "start_rps", context);
      spec.increment_rps_per_s = get_number(p, "increment_rps_per_s", context);
      spec.max_rps = get_number(p, "max_rps", context);
      break;
    case workload_kind::step:
    case workload_kind::bottleneck_step:
      check_keys(p, {"period_s", "low_rps", "high_rps"}, context);
      spec.period_s = get_number(p, "period_s", context);
      spec.low_rps = get_number(p, "low_rps", context);
      spec.high_rps = get_number(p, "high_rps", context);
      break;
  }
  spec.validate();
  return spec;
}

}  // namespace

sim_inputs experiment_file::inputs() const {
  sim_inputs in;
  in.graph = &app.graph;
  in.perf = app.perf;
  in.profile = compose_nominal(app.graph, nlrt_ms);
  for (const auto& f : app.graph.functions())
    if (f.sla_ms) in.sla_ms[f.name] = *f.sla_ms;
  in.workloads = workloads;
  in.ctrl = ctrl;
  in.tuning = tuning;
  in.alpha = alpha;
  in.sim = sim;
  return in;
}

experiment_file load_experiment(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) fail(errc::bad_config, "experiment file: top level must be an object");
  check_keys(j,
             {"app", "profile", "workloads", "controller", "sim", "output_dir",
              "skip_warmup_s"},
             "experiment file");

  experiment_file exp;
  exp.source_path = path;
  const auto base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  const auto app_path = base_dir / get_string(j, "app", "experiment file");
  exp.app = load_app(app_path);

  if (!j.contains("profile")) fail(errc::bad_config, "experiment file: missing 'profile'");
  if (j["profile"].is_string()) {
    exp.nlrt_ms = load_profile(base_dir / j["profile"].get<std::string>());
  } else if (j["profile"].is_object()) {
    exp.nlrt_ms = parse_profile(j["profile"].dump());
  } else {
    fail(errc::bad_config, "experiment file: 'profile' must be a path or an inline object");
  }

  if (!j.contains("workloads") || !j["workloads"].is_object())
    fail(errc::bad_config, "experiment file: 'workloads' must be an object");
  for (const auto& [name, spec] : j["workloads"].items())
    exp.workloads.emplace(name, parse_workload(spec, "workload '" + name + "'"));

  if (!j.contains("controller") || !j["controller"].is_object())
    fail(errc::bad_config, "experiment file: 'controller' must be an object");
  const json& c = j["controller"];
  check_keys(c,
             {"gain_p", "gain_i", "cores_min_millicores", "cores_max_millicores", "period_s",
              "alpha", "initial_millicores", "per_function"},
             "controller block");
  exp.ctrl.gain_p = get_number(c, "gain_p", "controller block");
  exp.ctrl.gain_i = get_number(c, "gain_i", "controller block");
  exp.ctrl.cores_min_millicores =
      static_cast<int>(get_number_or(c, "cores_min_millicores", 100, "controller block"));
  exp.ctrl.cores_max_millicores =
      static_cast<int>(get_number_or(c, "cores_max_millicores", 8000, "controller block"));
  exp.alpha = get_number_or(c, "alpha", 0.5, "controller block");
  const int default_initial = static_cast<int>(get_number_or(
      c, "initial_millicores", exp.ctrl.cores_min_millicores, "controller block"));
  if (c.contains("per_function")) {
    if (!c["per_function"].is_object())
      fail(errc::bad_config, "controller block: 'per_function' must be an object");
    for (const auto& [name, t] : c["per_function"].items()) {
      const std::string ctx = "controller tuning for '" + name + "'";
      check_keys(t, {"gain_p", "gain_i", "initial_millicores"}, ctx);
      controller_tuning tuning;
      if (t.contains("gain_p")) tuning.gain_p = get_number(t, "gain_p", ctx);
      if (t.contains("gain_i")) tuning.gain_i = get_number(t, "gain_i", ctx);
      if (t.contains("initial_millicores"))
        tuning.initial_millicores = static_cast<int>(get_number(t, "initial_millicores", ctx));
      exp.tuning[name] = tuning;
    }
  }
  // Every function falls back to the default warm start unless overridden.
  for (const auto& f : exp.app.graph.functions()) {
    auto& t = exp.tuning[f.name];
    if (!t.initial_millicores) t.initial_millicores = default_initial;
  }

  if (!j.contains("sim") || !j["sim"].is_object())
    fail(errc::bad_config, "experiment file: 'sim' must be an object");
  const json& s = j["sim"];
  check_keys(s,
             {"duration_s", "tick_ms", "control_period_s", "replications", "master_seed",
              "mode"},
             "sim block");
  exp.sim.duration_s = get_number_or(s, "duration_s", 1200.0, "sim block");
  exp.sim.tick_ms = get_number_or(s, "tick_ms", 100.0, "sim block");
  exp.sim.control_period_s = get_number_or(s, "control_period_s", 1.0, "sim block");
  exp.sim.replications = static_cast<int>(get_number_or(s, "replications", 10, "sim block"));
  exp.sim.master_seed = get_seed_or(s, "master_seed", 0, "sim block");
  if (s.contains("mode")) exp.sim.mode = sim_mode_from_string(get_string(s, "mode", "sim block"));
  exp.sim.validate();
  exp.ctrl.period_s = exp.sim.control_period_s;
  if (c.contains("period_s") &&
      get_number(c, "period_s", "controller block") != exp.sim.control_period_s)
    fail(errc::bad_config, "controller period_s disagrees with sim control_period_s");

  if (j.contains("output_dir"))
    exp.output_dir = base_dir / get_string(j, "output_dir", "experiment file");

  const double skip_s = get_number_or(j, "skip_warmup_s", 0.0, "experiment file");
  if (skip_s < 0.0) fail(errc::bad_config, "skip_warmup_s must be >= 0");
  exp.skip_warmup_windows = static_cast<int>(skip_s / exp.sim.control_period_s);

  // Cross-references: workloads must name entrypoints, perf must cover every
  // function, profile must cover every function.
  for (const auto& [name, spec] : exp.workloads) {
    if (!exp.app.graph.contains(name))
      fail(errc::bad_config, "workload references unknown function '" + name + "'");
    if (!exp.app.graph.function(name).entrypoint)
      fail(errc::bad_config, "workload attached to non-entrypoint '" + name + "'");
  }
  for (const auto& f : exp.app.graph.functions()) {
    if (!exp.app.perf.count(f.name))
      fail(errc::bad_config, "function '" + f.name + "' has no demand_core_ms in the app file");
    if (!exp.nlrt_ms.count(f.name))
      fail(errc::bad_config, "profile is missing function '" + f.name + "'");
  }

  return exp;
}

}  // namespace dagscale
