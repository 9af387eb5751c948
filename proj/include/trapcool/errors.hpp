#pragma once

#include <stdexcept>
#include <string>

namespace trapcool {

enum class ErrorKind {
  config,
  dimension_mismatch,
  tail_too_heavy,
  invalid_feedback_phase,
  not_unique,
  unstable,
  step_too_large,
  grid_mismatch,
  non_positive_covariance,
  unsweepable_key,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers (notably the
/// CLI exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Numerical failures (as opposed to bad input) map to CLI exit code 2.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::tail_too_heavy || kind_ == ErrorKind::not_unique ||
           kind_ == ErrorKind::unstable || kind_ == ErrorKind::step_too_large ||
           kind_ == ErrorKind::non_positive_covariance ||
           kind_ == ErrorKind::invalid_feedback_phase;
  }

 private:
  ErrorKind kind_;
};

}  // namespace trapcool
