#pragma once

#include <stdexcept>
#include <string>

namespace dagscale {

enum class errc {
  duplicate_name,
  unknown_function,
  cycle_detected,
  missing_sla,
  unreachable_function,
  invalid_value,
  missing_profile_entry,
  invalid_alpha,
  non_positive_set_point,
  non_positive_measurement,
  empty_series,
  grid_mismatch,
  infeasible_shape,
  bad_config,
  io_error,
};

const char* to_string(errc code) noexcept;

// True for errors caused by bad user input (configs, graphs, CLI arguments),
// false for failures that indicate an internal or environmental problem.
// The CLI maps the former to exit code 1 and the latter to exit code 2.
bool is_validation_error(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace dagscale
