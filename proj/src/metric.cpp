#include "nhqfi/metric.hpp"

#include <cmath>

#include "nhqfi/error.hpp"

namespace nhqfi {

namespace {

// d(eta)/dt = -i (H^dagger eta - eta H)
ComplexMatrix metric_rhs(const ComplexMatrix& h, const ComplexMatrix& hd, const ComplexMatrix& eta) {
  return -kI * (hd * eta - eta * h);
}

ComplexMatrix rk4(const ComplexMatrix& h, const ComplexMatrix& hd, ComplexMatrix eta, double dt, int steps) {
  const double step = dt / steps;
  for (int k = 0; k < steps; ++k) {
    const ComplexMatrix k1 = metric_rhs(h, hd, eta);
    const ComplexMatrix k2 = metric_rhs(h, hd, eta + 0.5 * step * k1);
    const ComplexMatrix k3 = metric_rhs(h, hd, eta + 0.5 * step * k2);
    const ComplexMatrix k4 = metric_rhs(h, hd, eta + step * k3);
    eta += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return eta;
}

double relative_antihermitian(const ComplexMatrix& m) {
  const double n = norm(m);
  return n == 0.0 ? 0.0 : norm(m - m.adjoint()) / n;
}

ComplexMatrix vielbein_at(const ComplexMatrix& h, const ComplexMatrix& eta, double offset,
                          const MetricOdeOptions& opts) {
  if (offset == 0.0) return mat_sqrt_pd(eta, 1e-15);
  return mat_sqrt_pd(hermitian_part(propagate_metric(h, eta, offset, opts)), 1e-15);
}

}  // namespace

MetricOperator::MetricOperator(const ComplexMatrix& eta, std::optional<double> time) : time_(time) {
  if (eta.rows() != eta.cols() || eta.rows() < 1 || !all_finite(eta)) {
    throw Error(ErrorKind::metric_invalid, "metric must be a finite square matrix");
  }
  const double scale = norm(eta);
  if (hermiticity_defect(eta) > 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorKind::metric_invalid, "metric is not Hermitian");
  }
  eta_ = hermitian_part(eta);
  // Relative floor near machine precision: exponentially growing metrics
  // reach condition numbers of 1e14 on ordinary time grids.
  vielbein_ = mat_sqrt_pd(eta_, 1e-15);
}

MetricTrajectory MetricTrajectory::from_static(const MetricOperator& eta, const std::vector<double>& grid) {
  MetricTrajectory traj;
  traj.grid = grid;
  traj.metrics.assign(grid.size(), eta);
  traj.constant = true;
  return traj;
}

double pseudo_hermiticity_residual(const ComplexMatrix& h, const MetricOperator& eta) {
  if (h.rows() != eta.eta().rows() || h.cols() != eta.eta().cols()) {
    throw Error(ErrorKind::invalid_input, "pseudo_hermiticity_residual: dimension mismatch");
  }
  ComplexMatrix inv;
  try {
    inv = mat_inv(eta.eta());
  } catch (const Error&) {
    throw Error(ErrorKind::metric_invalid, "pseudo_hermiticity_residual: singular metric");
  }
  const double hn = norm(h);
  if (hn == 0.0) return 0.0;
  return norm(eta.eta() * h * inv - h.adjoint()) / hn;
}

MetricOperator biorthogonal_metric(const ComplexMatrix& h, double tol) {
  const Spectrum s = eig_general(h, tol);
  const double scale = std::max(norm(h), std::numeric_limits<double>::min());
  if (s.defective) {
    throw Error(ErrorKind::not_quasi_hermitian, "biorthogonal_metric: eigenvectors coalesce (exceptional point)");
  }
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (std::abs(s.eigenvalues(i).imag()) > tol * scale) {
      throw Error(ErrorKind::not_quasi_hermitian, "biorthogonal_metric: complex eigenvalue");
    }
    for (Eigen::Index j = i + 1; j < s.eigenvalues.size(); ++j) {
      if (std::abs(s.eigenvalues(i) - s.eigenvalues(j)) <= tol * scale) {
        throw Error(ErrorKind::not_quasi_hermitian, "biorthogonal_metric: eigenvalues are not simple");
      }
    }
  }
  ComplexMatrix eta = s.left * s.left.adjoint();
  eta *= static_cast<double>(h.rows()) / eta.trace().real();
  return MetricOperator(hermitian_part(eta));
}

ComplexMatrix propagate_metric(const ComplexMatrix& h, const ComplexMatrix& eta, double dt,
                               const MetricOdeOptions& options) {
  const ComplexMatrix hd = h.adjoint();
  int n = 1;
  ComplexMatrix coarse = rk4(h, hd, eta, dt, n);
  while (true) {
    const ComplexMatrix fine = rk4(h, hd, eta, dt, 2 * n);
    if (norm(fine - coarse) <= options.step_tol * std::max(norm(fine), 1e-300)) return fine;
    n *= 2;
    if (n > options.max_substeps) {
      throw Error(ErrorKind::metric_degenerate, "metric ODE: step refinement did not converge");
    }
    coarse = fine;
  }
}

MetricTrajectory solve_metric_ode(const ComplexMatrix& h, const MetricOperator& eta0,
                                  const std::vector<double>& grid, const MetricOdeOptions& options) {
  if (grid.empty()) throw Error(ErrorKind::invalid_input, "solve_metric_ode: empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw Error(ErrorKind::invalid_input, "solve_metric_ode: grid must be strictly increasing");
  }
  MetricTrajectory traj;
  traj.grid = grid;
  traj.metrics.reserve(grid.size());
  traj.metrics.emplace_back(eta0.eta(), grid.front());

  ComplexMatrix eta = eta0.eta();
  for (std::size_t k = 1; k < grid.size(); ++k) {
    eta = hermitian_part(propagate_metric(h, eta, grid[k] - grid[k - 1], options));
    const double lmin = eig_hermitian(eta).eigenvalues.minCoeff();
    if (!(lmin > options.pd_tol * norm(eta))) {
      throw Error(ErrorKind::metric_degenerate, "metric ODE: positive-definiteness lost", grid[k]);
    }
    traj.metrics.emplace_back(eta, grid[k]);
  }
  return traj;
}

ComplexMatrix hermitize(const ComplexMatrix& h, const MetricOperator& eta, const HermitizeOptions& options) {
  const ComplexMatrix& e = eta.vielbein();
  const ComplexMatrix out = e * h * mat_inv(e);
  if (relative_antihermitian(out) > options.hermiticity_tol) {
    throw Error(ErrorKind::hermitization_failure, "hermitize: E H E^-1 is not Hermitian; metric does not match H");
  }
  return hermitian_part(out);
}

ComplexMatrix hermitize(const ComplexMatrix& h, const MetricTrajectory& traj, std::size_t index,
                        const HermitizeOptions& options) {
  if (index >= traj.metrics.size()) throw Error(ErrorKind::invalid_input, "hermitize: index outside trajectory");
  const MetricOperator& m = traj.metrics[index];
  if (traj.constant || traj.metrics.size() == 1 || m.is_static()) return hermitize(h, m, options);

  const ComplexMatrix& e = m.vielbein();
  const ComplexMatrix e_inv = mat_inv(e);
  const ComplexMatrix frame = e * h * e_inv;

  const std::size_t n = traj.grid.size();
  double step = index + 1 < n ? traj.grid[index + 1] - traj.grid[index] : traj.grid[index] - traj.grid[index - 1];
  const MetricOdeOptions ode;
  double best = std::numeric_limits<double>::infinity();
  for (int halving = 0; halving <= options.max_halvings; ++halving, step *= 0.5) {
    ComplexMatrix de;
    if (index == 0) {
      const ComplexMatrix e1 = vielbein_at(h, m.eta(), step, ode);
      const ComplexMatrix e2 = vielbein_at(h, m.eta(), 2.0 * step, ode);
      de = (-3.0 * e + 4.0 * e1 - e2) / (2.0 * step);
    } else if (index + 1 == n) {
      const ComplexMatrix e1 = vielbein_at(h, m.eta(), -step, ode);
      const ComplexMatrix e2 = vielbein_at(h, m.eta(), -2.0 * step, ode);
      de = (3.0 * e - 4.0 * e1 + e2) / (2.0 * step);
    } else {
      const ComplexMatrix ep = vielbein_at(h, m.eta(), step, ode);
      const ComplexMatrix em = vielbein_at(h, m.eta(), -step, ode);
      de = (ep - em) / (2.0 * step);
    }
    const ComplexMatrix out = frame + kI * de * e_inv;
    const double residual = relative_antihermitian(out);
    best = std::min(best, residual);
    if (residual <= options.hermiticity_tol) return hermitian_part(out);
  }
  throw Error(ErrorKind::hermitization_failure,
              "hermitize: Hermiticity residual " + std::to_string(best) + " above tolerance");
}

ComplexMatrix to_hermitized_frame(const ComplexMatrix& rho_tilde, const MetricOperator& eta) {
  return eta.vielbein() * rho_tilde * eta.vielbein().adjoint();
}

double eta_expectation(const ComplexMatrix& rho_tilde, const MetricOperator& eta, const ComplexMatrix& a) {
  if (!is_hermitian(a, 1e-12 * std::max(1.0, norm(a)))) {
    throw Error(ErrorKind::contract_violation, "eta_expectation: observable is not Hermitian");
  }
  const double weight = (eta.eta() * rho_tilde).trace().real();
  if (!(weight > 0.0)) throw Error(ErrorKind::invalid_metric_trace, "eta_expectation: Tr[eta rho] <= 0");
  const ComplexMatrix& e = eta.vielbein();
  const ComplexMatrix a_tilde = mat_inv(e) * a * e;
  return (eta.eta() * a_tilde * rho_tilde).trace().real() / weight;
}

double general_metric_angle(const General2x2Params& p) {
  if (!(std::abs(p.s) < std::abs(p.tau))) {
    throw Error(ErrorKind::not_quasi_hermitian, "general_metric_angle: requires |s| < |tau|");
  }
  const MetricOperator eta = biorthogonal_metric(model_matrix(p));
  // eta is proportional to [[sec, i tan], [-i tan, sec]]: sin(alpha) = Im(eta01) / eta00.
  return std::asin(eta.eta()(0, 1).imag() / eta.eta()(0, 0).real());
}

ComplexMatrix sec_tan_metric(double alpha) {
  const double sec = 1.0 / std::cos(alpha), tan = std::tan(alpha);
  ComplexMatrix m(2, 2);
  m << sec, kI * tan, -kI * tan, sec;
  return m;
}

ComplexMatrix sec_tan_vielbein(double alpha) {
  const double sec = 1.0 / std::cos(alpha), tan = std::tan(alpha);
  const double a = std::sqrt(sec - tan), b = std::sqrt(sec + tan);
  const double rp = 0.5 * (a + b), rm = 0.5 * (a - b);
  ComplexMatrix m(2, 2);
  m << rp, -kI * rm, kI * rm, rp;
  return m;
}

}  // namespace nhqfi
