#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace nhqfi {

enum class ErrorKind {
  invalid_input,
  metric_invalid,
  singular_matrix,
  not_quasi_hermitian,
  metric_degenerate,
  hermitization_failure,
  invalid_metric_trace,
  invalid_rate,
  nonphysical_state,
  contract_violation,
  norm_collapse,
  integrator_failure,
  non_unique_steady_state,
  degenerate_step,
  pure_state_limit,
  step_adjustment,
  unknown_formula,
  constraint_violation,
  missing_metric,
  config_error,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library. `payload` carries the one number
/// some errors are specified to report: the failure time for
/// norm_collapse / metric_degenerate, the largest feasible step for
/// step_adjustment.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> payload = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        payload_(payload) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> payload() const noexcept { return payload_; }

 private:
  ErrorKind kind_;
  std::optional<double> payload_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::metric_invalid: return "metric-invalid";
    case ErrorKind::singular_matrix: return "singular-matrix";
    case ErrorKind::not_quasi_hermitian: return "not-quasi-hermitian";
    case ErrorKind::metric_degenerate: return "metric-degenerate";
    case ErrorKind::hermitization_failure: return "hermitization-failure";
    case ErrorKind::invalid_metric_trace: return "invalid-metric-trace";
    case ErrorKind::invalid_rate: return "invalid-rate";
    case ErrorKind::nonphysical_state: return "nonphysical-state";
    case ErrorKind::contract_violation: return "contract-violation";
    case ErrorKind::norm_collapse: return "norm-collapse";
    case ErrorKind::integrator_failure: return "integrator-failure";
    case ErrorKind::non_unique_steady_state: return "non-unique-steady-state";
    case ErrorKind::degenerate_step: return "degenerate-step";
    case ErrorKind::pure_state_limit: return "pure-state-limit";
    case ErrorKind::step_adjustment: return "step-adjustment";
    case ErrorKind::unknown_formula: return "unknown-formula";
    case ErrorKind::constraint_violation: return "constraint-violation";
    case ErrorKind::missing_metric: return "missing-metric";
    case ErrorKind::config_error: return "config-error";
  }
  return "unknown";
}

}  // namespace nhqfi
