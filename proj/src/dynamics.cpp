#include "nhqfi/dynamics.hpp"

#include <cmath>
#include <map>
#include <string>

#include "nhqfi/error.hpp"

namespace nhqfi {

namespace {

DensityState make_state(const ComplexMatrix& m, double t) {
  DensityState s;
  s.matrix = m;
  s.convention = TraceConvention::standard;
  s.time = t;
  return s;
}

// e^{-iht} for Hermitian h via its eigenbasis.
ComplexMatrix unitary(const HermitianSpectrum& spec, double t) {
  ComplexVector phases(spec.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * spec.eigenvalues(k) * t);
  return spec.vectors * phases.asDiagonal() * spec.vectors.adjoint();
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& l, const ComplexMatrix& v) { return l * v; }

}  // namespace

std::vector<double> uniform_grid(double t_max, std::size_t points) {
  if (points < 1 || !std::isfinite(t_max) || t_max < 0.0 || (points > 1 && t_max == 0.0)) {
    throw Error(ErrorKind::invalid_input, "uniform_grid: need points >= 1 and t_max > 0");
  }
  std::vector<double> grid(points, 0.0);
  if (points == 1) return grid;
  const double step = t_max / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = step * static_cast<double>(k);
  grid.back() = t_max;
  return grid;
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::invalid_input, "time grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) throw Error(ErrorKind::invalid_input, "time grid has a non-finite entry");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw Error(ErrorKind::invalid_input, "time grid must be strictly increasing");
  }
}

StateTrajectory evolve_metric(const ComplexMatrix& h, const DensityState& rho0, const std::vector<double>& grid) {
  validate_grid(grid);
  if (!is_hermitian(h, 1e-12 * std::max(1.0, norm(h)))) {
    throw Error(ErrorKind::contract_violation, "evolve_metric: generator is not Hermitian");
  }
  const HermitianSpectrum spec = eig_hermitian(hermitian_part(h));
  StateTrajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.size());
  for (double t : grid) {
    const ComplexMatrix u = unitary(spec, t);
    traj.states.push_back(make_state(hermitian_part(u * rho0.matrix * u.adjoint()), t));
    traj.raw_traces.push_back(1.0);
  }
  return traj;
}

ComplexMatrix propagate_tilde(const ComplexMatrix& h_tilde, const ComplexMatrix& rho, double t) {
  const ComplexMatrix u = mat_exp(-kI * t * h_tilde);
  return u * rho * u.adjoint();
}

StateTrajectory evolve_normalized(const ComplexMatrix& h_tilde, const DensityState& rho0,
                                  const std::vector<double>& grid, const NormalizedOptions& options) {
  validate_grid(grid);
  StateTrajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.size());
  for (double t : grid) {
    const ComplexMatrix raw = hermitian_part(propagate_tilde(h_tilde, rho0.matrix, t));
    const double tr = raw.trace().real();
    if (!(tr > options.trace_floor) || !std::isfinite(tr)) {
      throw Error(ErrorKind::norm_collapse, "evolve_normalized: Tr rho~ fell below the trace floor", t);
    }
    traj.states.push_back(make_state(raw / tr, t));
    traj.raw_traces.push_back(tr);
  }
  return traj;
}

ComplexMatrix nonlinear_rhs(const ComplexMatrix& h_tilde, const ComplexMatrix& rho) {
  const ComplexMatrix hh = 0.5 * (h_tilde + h_tilde.adjoint());
  const ComplexMatrix hs = 0.5 * kI * (h_tilde - h_tilde.adjoint());
  const Complex expect = (hs * rho).trace();
  return -kI * (hh * rho - rho * hh) - (hs * rho + rho * hs) + 2.0 * expect.real() * rho;
}

double nonlinear_eom_residual(const ComplexMatrix& h_tilde, const StateTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double span = traj.grid[k + 1] - traj.grid[k - 1];
    const ComplexMatrix drho = (traj.states[k + 1].matrix - traj.states[k - 1].matrix) / span;
    worst = std::max(worst, norm(drho - nonlinear_rhs(h_tilde, traj.states[k].matrix)));
  }
  return worst;
}

ComplexMatrix liouvillian(const OpenModel& m) {
  const Eigen::Index n = m.hamiltonian.rows();
  const ComplexMatrix id = identity(n);
  ComplexMatrix l = -kI * (kron(m.hamiltonian, id) - kron(id, m.hamiltonian.transpose()));
  for (const auto& g : m.jumps) {
    const ComplexMatrix gg = g.adjoint() * g;
    l += kron(g, g.conjugate()) - 0.5 * kron(gg, id) - 0.5 * kron(id, gg.transpose());
  }
  return l;
}

ComplexMatrix vectorize(const ComplexMatrix& rho) {
  const Eigen::Index n = rho.rows();
  ComplexMatrix v(n * n, 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j, 0) = rho(i, j);
  return v;
}

ComplexMatrix unvectorize(const ComplexMatrix& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw Error(ErrorKind::invalid_input, "unvectorize: size mismatch");
  ComplexMatrix rho(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) rho(i, j) = v(i * dim + j);
  return rho;
}

ComplexMatrix lindblad_propagate(const OpenModel& m, const ComplexMatrix& rho, double t) {
  const ComplexMatrix prop = mat_exp(liouvillian(m) * t);
  return hermitian_part(unvectorize(prop * vectorize(rho), rho.rows()));
}

StateTrajectory evolve_lindblad(const OpenModel& m, const DensityState& rho0, const std::vector<double>& grid,
                                const LindbladOptions& options) {
  validate_grid(grid);
  if (rho0.matrix.rows() != m.hamiltonian.rows()) {
    throw Error(ErrorKind::invalid_input, "evolve_lindblad: state and model dimensions differ");
  }
  const Eigen::Index n = rho0.matrix.rows();
  const ComplexMatrix l = liouvillian(m);

  StateTrajectory traj;
  traj.grid = grid;
  ComplexMatrix v = vectorize(rho0.matrix);
  // t0 may be nonzero: the first point is exp(L t0) rho0.
  if (grid.front() != 0.0) v = mat_exp(l * grid.front()) * v;

  std::map<double, ComplexMatrix> cache;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) {
      const double dt = grid[k] - grid[k - 1];
      if (options.method == LindbladMethod::exponential) {
        // Keys rounded to 1e-12 relative so a uniform grid reuses one propagator.
        const double key = std::round(dt * 1e12) / 1e12;
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, mat_exp(l * dt)).first;
        v = it->second * v;
      } else {
        const int steps = std::max(1, options.rk4_substeps);
        const double h = dt / steps;
        for (int s = 0; s < steps; ++s) {
          const ComplexMatrix k1 = lindblad_rhs(l, v);
          const ComplexMatrix k2 = lindblad_rhs(l, v + 0.5 * h * k1);
          const ComplexMatrix k3 = lindblad_rhs(l, v + 0.5 * h * k2);
          const ComplexMatrix k4 = lindblad_rhs(l, v + h * k3);
          v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
      }
    }
    const ComplexMatrix rho = hermitian_part(unvectorize(v, n));
    const double lmin = eig_hermitian(rho).eigenvalues.minCoeff();
    if (lmin < -options.positivity_tol) {
      throw Error(ErrorKind::integrator_failure,
                  "evolve_lindblad: negative eigenvalue " + std::to_string(lmin), grid[k]);
    }
    traj.states.push_back(make_state(rho, grid[k]));
    traj.raw_traces.push_back(rho.trace().real());
  }
  return traj;
}

DensityState steady_state(const OpenModel& m, double tol) {
  const ComplexMatrix l = liouvillian(m);
  const ComplexMatrix kernel = null_space(l, tol);
  if (kernel.cols() != 1) {
    throw Error(ErrorKind::non_unique_steady_state,
                "steady_state: Liouvillian kernel has dimension " + std::to_string(kernel.cols()),
                static_cast<double>(kernel.cols()));
  }
  ComplexMatrix rho = unvectorize(kernel.col(0), m.hamiltonian.rows());
  const Complex tr = rho.trace();
  if (std::abs(tr) == 0.0) {
    throw Error(ErrorKind::non_unique_steady_state, "steady_state: kernel vector is traceless");
  }
  rho = hermitian_part(rho / tr);
  return make_state(rho, std::numeric_limits<double>::infinity());
}

double KrausStep::completeness_defect() const {
  ComplexMatrix sum = m0.adjoint() * m0;
  for (const auto& j : jumps) sum += j.adjoint() * j;
  return norm(sum - identity(m0.rows()));
}

double KrausStep::defect_constant() const { return completeness_defect() / (dt * dt); }

KrausStep jump_step_operators(const OpenModel& m, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::invalid_input, "jump_step_operators: dt must be positive");
  KrausStep k;
  k.dt = dt;
  k.m0 = mat_exp(-kI * dt * effective_hamiltonian(m));
  for (const auto& g : m.jumps) k.jumps.push_back(std::sqrt(dt) * g);
  return k;
}

ConditionalDecomposition conditional_split(const KrausStep& k, const DensityState& rho, double zero_tol) {
  ConditionalDecomposition d;
  const ComplexMatrix nj = k.m0 * rho.matrix * k.m0.adjoint();
  d.p0 = nj.trace().real();
  if (!(d.p0 > 0.0)) throw Error(ErrorKind::degenerate_step, "conditional_split: no-jump probability is zero", d.p0);
  d.rho_nj = make_state(hermitian_part(nj / d.p0), rho.time + k.dt);
  for (std::size_t l = 0; l < k.jumps.size(); ++l) {
    const ComplexMatrix jm = k.jumps[l] * rho.matrix * k.jumps[l].adjoint();
    const double p = jm.trace().real();
    if (p <= zero_tol) {
      d.dropped.push_back(l);
      continue;
    }
    d.branches.push_back(Branch{l, p, make_state(hermitian_part(jm / p), rho.time + k.dt)});
  }
  return d;
}

DensityState reconstruct_step(const ConditionalDecomposition& d) {
  ComplexMatrix rho = d.p0 * d.rho_nj.matrix;
  for (const auto& b : d.branches) rho += b.probability * b.state.matrix;
  return make_state(rho, d.rho_nj.time);
}

}  // namespace nhqfi
