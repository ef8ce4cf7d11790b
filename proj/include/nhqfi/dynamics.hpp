#pragma once

// Propagators for the Hermitized (metric), trace-normalized and Lindblad
// formalisms, the Liouvillian steady state, and the one-step Kraus split
// into no-jump and jump branches.

#include <cstddef>
#include <vector>

#include "nhqfi/matcore.hpp"
#include "nhqfi/models.hpp"

namespace nhqfi {

struct StateTrajectory {
  std::vector<double> grid;
  std::vector<DensityState> states;
  /// Tr rho~(t) before normalization; all ones for trace-preserving propagators.
  std::vector<double> raw_traces;

  std::size_t size() const { return grid.size(); }
};

/// `points` equally spaced times on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t points);

/// Checks a grid is non-empty, finite and strictly increasing.
void validate_grid(const std::vector<double>& grid);

StateTrajectory evolve_metric(const ComplexMatrix& h, const DensityState& rho0, const std::vector<double>& grid);

struct NormalizedOptions {
  double trace_floor = 1e-12;
};

StateTrajectory evolve_normalized(const ComplexMatrix& h_tilde, const DensityState& rho0,
                                  const std::vector<double>& grid, const NormalizedOptions& options = {});

/// Unnormalized e^{-iHt} rho e^{iH^dagger t}.
ComplexMatrix propagate_tilde(const ComplexMatrix& h_tilde, const ComplexMatrix& rho, double t);

/// Right-hand side -i[H_H, rho] - {H_S, rho} + 2 Tr(H_S rho) rho with
/// H_H = (H + H^dagger)/2 and H_S = i(H - H^dagger)/2.
ComplexMatrix nonlinear_rhs(const ComplexMatrix& h_tilde, const ComplexMatrix& rho);

/// Max over interior grid points of ||central difference - nonlinear_rhs||.
double nonlinear_eom_residual(const ComplexMatrix& h_tilde, const StateTrajectory& traj);

/// Vectorized Lindblad generator acting on row-major vec(rho).
ComplexMatrix liouvillian(const OpenModel& m);
ComplexMatrix vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexMatrix& v, Eigen::Index dim);

enum class LindbladMethod { exponential, rk4 };

struct LindbladOptions {
  LindbladMethod method = LindbladMethod::exponential;
  /// Substeps per grid interval for the RK4 cross-check.
  int rk4_substeps = 64;
  double positivity_tol = 1e-8;
};

StateTrajectory evolve_lindblad(const OpenModel& m, const DensityState& rho0, const std::vector<double>& grid,
                                const LindbladOptions& options = {});

/// Single propagation of rho over time t via exp(L t).
ComplexMatrix lindblad_propagate(const OpenModel& m, const ComplexMatrix& rho, double t);

DensityState steady_state(const OpenModel& m, double tol = 1e-9);

struct KrausStep {
  double dt = 0.0;
  ComplexMatrix m0;
  std::vector<ComplexMatrix> jumps;

  /// ||M0^dagger M0 + sum_l M_l^dagger M_l - 1||_F.
  double completeness_defect() const;
  /// completeness_defect() / dt^2.
  double defect_constant() const;
};

KrausStep jump_step_operators(const OpenModel& m, double dt);

struct Branch {
  std::size_t channel = 0;
  double probability = 0.0;
  DensityState state;
};

struct ConditionalDecomposition {
  double p0 = 0.0;
  DensityState rho_nj;
  std::vector<Branch> branches;
  /// Channels whose probability was zero and which were left out.
  std::vector<std::size_t> dropped;
};

ConditionalDecomposition conditional_split(const KrausStep& k, const DensityState& rho, double zero_tol = 0.0);

DensityState reconstruct_step(const ConditionalDecomposition& d);

}  // namespace nhqfi
