#include "dagscale/workload.hpp"

#include <algorithm>
#include <cmath>

#include "dagscale/errors.hpp"
#include "dagscale/rng.hpp"

namespace dagscale {

const char* to_string(workload_kind kind) noexcept {
  switch (kind) {
    case workload_kind::constant: return "constant";
    case workload_kind::ramp: return "ramp";
    case workload_kind::step: return "step";
    case workload_kind::bottleneck_step: return "bottleneck_step";
  }
  return "?";
}

workload_kind workload_kind_from_string(const std::string& s) {
  if (s == "constant") return workload_kind::constant;
  if (s == "ramp") return workload_kind::ramp;
  if (s == "step") return workload_kind::step;
  if (s == "bottleneck_step") return workload_kind::bottleneck_step;
  fail(errc::bad_config, "unknown workload kind '" + s + "'");
}

void workload_spec::validate() const {
  switch (kind) {
    case workload_kind::constant:
      if (rps < 0.0) fail(errc::invalid_value, "constant rate must be >= 0");
      break;
    case workload_kind::ramp:
      if (start_rps < 0.0 || increment_rps_per_s < 0.0 || max_rps < 0.0)
        fail(errc::invalid_value, "ramp rates must be >= 0");
      break;
    case workload_kind::step:
    case workload_kind::bottleneck_step:
      if (period_s <= 0.0) fail(errc::invalid_value, "step period must be > 0");
      if (low_rps < 0.0) fail(errc::invalid_value, "step low must be >= 0");
      if (low_rps > high_rps) fail(errc::invalid_value, "step low must be <= high");
      break;
  }
}

double rate_at(const workload_spec& spec, double t_s) {
  if (t_s < 0.0) fail(errc::invalid_value, "time must be >= 0");
  switch (spec.kind) {
    case workload_kind::constant:
      return spec.rps;
    case workload_kind::ramp:
      return std::min(spec.max_rps, spec.start_rps + spec.increment_rps_per_s * std::floor(t_s));
    case workload_kind::step:
    case workload_kind::bottleneck_step: {
      // Level of interval k depends only on (seed, k): random access, no
      // sequential generator state.
      const auto interval = static_cast<std::uint64_t>(std::floor(t_s / spec.period_s));
      return spec.low_rps + unit_draw(spec.seed, interval) * (spec.high_rps - spec.low_rps);
    }
  }
  fail(errc::invalid_value, "unhandled workload kind");
}

workload_spec with_seed(workload_spec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}

}  // namespace dagscale
