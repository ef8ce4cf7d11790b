#pragma once

// Expectation values per formalism, closed-form decaying-qubit expectations,
// and Bloch vectors.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nhqfi/dynamics.hpp"
#include "nhqfi/matcore.hpp"
#include "nhqfi/metric.hpp"

namespace nhqfi {

/// A = a0 1 + a1 sigma_x + a2 sigma_y + a3 sigma_z.
struct Observable {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  ComplexMatrix matrix() const;
  /// a_l = Tr[A sigma_l] / 2. Throws contract_violation for non-Hermitian A.
  static Observable from_matrix(const ComplexMatrix& a);
};

enum class Formalism { metric, norm, nj, me };

const char* to_string(Formalism f);
/// Throws config_error for anything other than metric|norm|nj|me.
Formalism formalism_from_string(const std::string& s);

/// Expectation series. `tilde_frame` marks a trajectory whose states are the
/// normalized rho~ with raw traces recorded (as produced by evolve_normalized);
/// the metric formalism then needs `eta` and evaluates the eta-weighted value
/// on rho~ = state * raw_trace. Otherwise metric, me give Tr[rho A] and
/// norm, nj give Tr[rho A] / Tr[rho].
std::vector<double> expect(Formalism f, const StateTrajectory& traj, const Observable& a,
                           const MetricTrajectory* eta = nullptr, bool tilde_frame = false);

struct ExpectationTriple {
  double metric = 0.0;
  double norm = 0.0;
  double me = 0.0;
};

/// Decaying-qubit expectations for the input state (theta, x), with
/// coefficients that agree with direct evolution (jump 2 sqrt(gamma) sigma_-).
ExpectationTriple closed_form_expectations(const Observable& a, double theta, double x, double omega, double gamma,
                                           double t);

/// The same expressions with the printed coefficients: a [1 - cos] factor on
/// a1, a positive alpha1, and no a0 term.
ExpectationTriple printed_expectations(const Observable& a, double theta, double x, double omega, double gamma,
                                       double t);

/// (Tr[rho sigma_x], Tr[rho sigma_y], Tr[rho sigma_z]).
std::array<double, 3> bloch_vector(const ComplexMatrix& rho);
inline std::array<double, 3> bloch_vector(const DensityState& s) { return bloch_vector(s.matrix); }

}  // namespace nhqfi
