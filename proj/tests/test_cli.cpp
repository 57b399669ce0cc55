#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dagscale/errors.hpp"

namespace fs = std::filesystem;

namespace {

struct cli_result {
  int exit_code;
  std::string output;  // stdout + stderr
};

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "dagscale-cli-test";
  fs::create_directories(dir);
  return dir;
}

cli_result run_cli(const std::string& args) {
  const auto log = work_dir() / "cli.log";
  const std::string cmd = std::string(DAGSCALE_CLI_PATH) + " " + args + " > " + log.string() +
                          " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream is(log);
  std::ostringstream buf;
  buf << is.rdbuf();
  return {WEXITSTATUS(status), buf.str()};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

const char* kFiveNodeApp = R"({
  "functions": [
    {"name": "f1", "sla_ms": 90, "entrypoint": true, "demand_core_ms": 7},
    {"name": "f2", "entrypoint": false, "demand_core_ms": 1},
    {"name": "f3", "entrypoint": false, "demand_core_ms": 2},
    {"name": "f4", "entrypoint": false, "demand_core_ms": 2},
    {"name": "f5", "entrypoint": true, "demand_core_ms": 3}
  ],
  "edges": [
    {"from": "f1", "to": "f2", "group_id": 1, "multiplier": 1},
    {"from": "f1", "to": "f3", "group_id": 2, "multiplier": 1},
    {"from": "f2", "to": "f4", "group_id": 1, "multiplier": 1},
    {"from": "f2", "to": "f5", "group_id": 2, "multiplier": 1}
  ]
})";

}  // namespace

TEST_CASE("validate: exit codes distinguish success from validation failures") {
  auto dir = work_dir();
  write_file(dir / "ok.json", kFiveNodeApp);
  auto ok = run_cli("validate " + (dir / "ok.json").string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("OK") != std::string::npos);

  write_file(dir / "cycle.json", R"({
    "functions": [
      {"name": "a", "sla_ms": 10, "entrypoint": true},
      {"name": "b", "entrypoint": false}
    ],
    "edges": [
      {"from": "a", "to": "b", "group_id": 1},
      {"from": "b", "to": "a", "group_id": 1}
    ]
  })");
  auto cycle = run_cli("validate " + (dir / "cycle.json").string());
  CHECK(cycle.exit_code == 1);
  CHECK(cycle.output.find("CycleDetected") != std::string::npos);

  write_file(dir / "nosla.json", R"({
    "functions": [{"name": "a", "entrypoint": true}],
    "edges": []
  })");
  auto nosla = run_cli("validate " + (dir / "nosla.json").string());
  CHECK(nosla.exit_code == 1);
  CHECK(nosla.output.find("MissingSla") != std::string::npos);

  auto missing = run_cli("validate /nonexistent/app.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("setpoints: reproduces the five-node decomposition from the CLI") {
  auto dir = work_dir();
  write_file(dir / "app.json", kFiveNodeApp);
  write_file(dir / "profile.json", R"({
    "f1": {"nlrt_ms": 7}, "f2": {"nlrt_ms": 1}, "f3": {"nlrt_ms": 2},
    "f4": {"nlrt_ms": 2}, "f5": {"nlrt_ms": 3}
  })");
  auto result = run_cli("setpoints " + (dir / "app.json").string() + " --profile " +
                        (dir / "profile.json").string() + " --alpha 0.5");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("45.0000") != std::string::npos);
  CHECK(result.output.find("21.0000") != std::string::npos);
  CHECK(result.output.find("user-SLA") != std::string::npos);
}

TEST_CASE("setpoints: profile defaults to simulated measurements") {
  auto dir = work_dir();
  write_file(dir / "app.json", kFiveNodeApp);
  // demand values equal the explicit profile, so results match.
  auto result = run_cli("setpoints " + (dir / "app.json").string() + " --alpha 0.5");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("45.0000") != std::string::npos);
}

TEST_CASE("profile command measures the configured demands") {
  auto dir = work_dir();
  write_file(dir / "app.json", kFiveNodeApp);
  auto result = run_cli("profile " + (dir / "app.json").string() + " --samples 10");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"f1\"") != std::string::npos);
  CHECK(result.output.find("7.0") != std::string::npos);
}

TEST_CASE("run: produces deterministic outputs and honors --out") {
  auto dir = work_dir();
  write_file(dir / "app.json", kFiveNodeApp);
  write_file(dir / "profile.json", R"({
    "f1": {"nlrt_ms": 7}, "f2": {"nlrt_ms": 1}, "f3": {"nlrt_ms": 2},
    "f4": {"nlrt_ms": 2}, "f5": {"nlrt_ms": 3}
  })");
  write_file(dir / "exp.json", R"({
    "app": "app.json",
    "profile": "profile.json",
    "workloads": {
      "f1": {"kind": "step", "params": {"period_s": 10, "low_rps": 10, "high_rps": 30}, "seed": 3}
    },
    "controller": {"gain_p": 60, "gain_i": 600, "cores_min_millicores": 100,
                   "cores_max_millicores": 8000, "alpha": 0.5},
    "sim": {"duration_s": 30, "tick_ms": 100, "control_period_s": 1,
            "replications": 2, "master_seed": 11, "mode": "dependency_aware"}
  })");

  auto first = run_cli("--out " + (dir / "out1").string() + " run " + (dir / "exp.json").string());
  REQUIRE(first.exit_code == 0);
  auto second = run_cli("--out " + (dir / "out2").string() + " run " + (dir / "exp.json").string());
  REQUIRE(second.exit_code == 0);

  for (const char* file : {"ticks.csv", "summary.csv", "summary.txt"}) {
    std::ifstream a(dir / "out1" / file), b(dir / "out2" / file);
    REQUIRE(a.good());
    REQUIRE(b.good());
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK_FALSE(sa.str().empty());
  }
}

TEST_CASE("synth: deterministic per seed and valid output") {
  auto dir = work_dir();
  const std::string base = "synth --functions 25 --entrypoints 6 --avg-out-degree 2 "
                           "--parallel-fraction 0.5 --synth-seed 42 ";
  auto a = run_cli(base + "--app-out " + (dir / "a.app.json").string() + " --profile-out " +
                   (dir / "a.profile.json").string());
  REQUIRE(a.exit_code == 0);
  auto b = run_cli(base + "--app-out " + (dir / "b.app.json").string() + " --profile-out " +
                   (dir / "b.profile.json").string());
  REQUIRE(b.exit_code == 0);

  std::ifstream fa(dir / "a.app.json"), fb(dir / "b.app.json");
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());

  auto check = run_cli("validate " + (dir / "a.app.json").string());
  CHECK(check.exit_code == 0);
}
