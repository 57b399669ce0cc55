#pragma once

#include <cstdint>
#include <string>

namespace dagscale {

enum class workload_kind { constant, ramp, step, bottleneck_step };

const char* to_string(workload_kind kind) noexcept;
workload_kind workload_kind_from_string(const std::string& s);

// Per-entrypoint request-rate generator. Rates are fluid requests/second.
// step and bottleneck_step share the same mechanics and differ only in the
// ranges experiments configure them with.
struct workload_spec {
  workload_kind kind = workload_kind::constant;
  // constant
  double rps = 0.0;
  // ramp
  double start_rps = 0.0;
  double increment_rps_per_s = 0.0;
  double max_rps = 0.0;
  // step / bottleneck_step
  double period_s = 50.0;
  double low_rps = 0.0;
  double high_rps = 0.0;

  std::uint64_t seed = 0;

  void validate() const;  // throws invalid_value
};

// Pure function of (spec, t). Step levels are drawn counter-based from the
// stream position floor(t / period), so the value at any time is independent
// of the order and number of queries.
double rate_at(const workload_spec& spec, double t_s);

// Same spec evaluated under a replication-shifted seed.
workload_spec with_seed(workload_spec spec, std::uint64_t seed);

}  // namespace dagscale
