#pragma once

// Metric operators for non-Hermitian generators: construction from the
// biorthogonal eigenbasis or by integrating i d(eta)/dt = H^dagger eta - eta H,
// vielbein factorization eta = E^dagger E with E = sqrt(eta), Hermitization
// h = E H E^-1 + i (dE/dt) E^-1, and eta-weighted expectation values.

#include <optional>
#include <vector>

#include "nhqfi/matcore.hpp"
#include "nhqfi/models.hpp"

namespace nhqfi {

class MetricOperator {
 public:
  /// Validates eta (Hermitian within 1e-12 relative, positive definite)
  /// and computes the vielbein. `time` is empty for a static metric.
  explicit MetricOperator(const ComplexMatrix& eta, std::optional<double> time = std::nullopt);

  const ComplexMatrix& eta() const { return eta_; }
  const ComplexMatrix& vielbein() const { return vielbein_; }
  std::optional<double> time() const { return time_; }
  bool is_static() const { return !time_.has_value(); }

 private:
  ComplexMatrix eta_;
  ComplexMatrix vielbein_;
  std::optional<double> time_;
};

struct MetricTrajectory {
  std::vector<double> grid;
  std::vector<MetricOperator> metrics;
  /// Set for trajectories built from a single time-independent metric.
  bool constant = false;

  static MetricTrajectory from_static(const MetricOperator& eta, const std::vector<double>& grid);
};

struct MetricOdeOptions {
  /// Relative agreement required between n and 2n RK4 substeps per interval.
  double step_tol = 1e-12;
  /// Positive-definiteness floor: smallest eigenvalue > pd_tol * ||eta||.
  double pd_tol = 1e-10;
  int max_substeps = 1 << 16;
};

/// ||eta H eta^-1 - H^dagger||_F / ||H||_F.
double pseudo_hermiticity_residual(const ComplexMatrix& h, const MetricOperator& eta);

/// eta = sum_n |phi_n><phi_n| from the dual left eigenvectors, with unit-norm
/// right eigenvectors and the overall scale fixed by Tr eta = dim.
MetricOperator biorthogonal_metric(const ComplexMatrix& h, double tol = 1e-10);

MetricTrajectory solve_metric_ode(const ComplexMatrix& h, const MetricOperator& eta0,
                                  const std::vector<double>& grid,
                                  const MetricOdeOptions& options = {});

/// One RK4-integrated propagation of eta over [t, t + dt]; dt may be negative.
ComplexMatrix propagate_metric(const ComplexMatrix& h, const ComplexMatrix& eta, double dt,
                               const MetricOdeOptions& options = {});

struct HermitizeOptions {
  double hermiticity_tol = 1e-9;
  int max_halvings = 30;
};

/// Hermitized generator at grid point `index`. Static metrics skip the
/// derivative term; time-dependent ones differentiate E by central
/// differences (one-sided at the grid ends), halving the step until
/// ||h - h^dagger|| / ||h|| <= hermiticity_tol.
ComplexMatrix hermitize(const ComplexMatrix& h, const MetricTrajectory& traj, std::size_t index = 0,
                        const HermitizeOptions& options = {});
ComplexMatrix hermitize(const ComplexMatrix& h, const MetricOperator& eta,
                        const HermitizeOptions& options = {});

/// Tr[eta A~ rho~] / Tr[eta rho~] with A~ = E^-1 A E; equals Tr[rho A] in the
/// Hermitized frame.
double eta_expectation(const ComplexMatrix& rho_tilde, const MetricOperator& eta, const ComplexMatrix& a);
inline double eta_expectation(const DensityState& state, const MetricOperator& eta, const ComplexMatrix& a) {
  return eta_expectation(state.matrix, eta, a);
}

/// E rho~ E^dagger: the state seen in the Hermitized frame.
ComplexMatrix to_hermitized_frame(const ComplexMatrix& rho_tilde, const MetricOperator& eta);

/// Angle alpha of the sec/tan metric form [[sec a, i tan a], [-i tan a, sec a]]
/// reproducing the biorthogonal metric of the general 2x2 family up to a
/// positive scale. Requires |s| < |tau|.
double general_metric_angle(const General2x2Params& p);
ComplexMatrix sec_tan_metric(double alpha);
/// [[r+, -i r-], [i r-, r+]] with r+- = (sqrt(sec - tan) +- sqrt(sec + tan)) / 2.
ComplexMatrix sec_tan_vielbein(double alpha);

}  // namespace nhqfi
