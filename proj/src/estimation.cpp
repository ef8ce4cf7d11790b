#include "nhqfi/estimation.hpp"

#include <cmath>

#include "nhqfi/dynamics.hpp"
#include "nhqfi/error.hpp"

namespace nhqfi {

namespace {

void require_hermitian_derivative(const ComplexMatrix& d) {
  if (!is_hermitian(d, 1e-10 * std::max(1.0, norm(d)))) {
    throw Error(ErrorKind::contract_violation, "QFI: derivative matrix is not Hermitian");
  }
}

ComplexMatrix unitary_conjugate(const ComplexMatrix& h, const ComplexMatrix& rho, double t) {
  const HermitianSpectrum spec = eig_hermitian(hermitian_part(h));
  ComplexVector phases(spec.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * spec.eigenvalues(k) * t);
  const ComplexMatrix u = spec.vectors * phases.asDiagonal() * spec.vectors.adjoint();
  return u * rho * u.adjoint();
}

// Derivative with the trace constraint imposed on the dominant diagonal entry.
void impose_traceless(ComplexMatrix& d, const ComplexMatrix& rho) {
  Eigen::Index big = 0;
  for (Eigen::Index k = 1; k < rho.rows(); ++k) {
    if (rho(k, k).real() > rho(big, big).real()) big = k;
  }
  double others = 0.0;
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    if (k != big) others += d(k, k).real();
  }
  d(big, big) = -others;
}

}  // namespace

double QfiMatrix::at(const std::string& a, const std::string& b) const {
  auto index = [&](const std::string& n) {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == n) return static_cast<Eigen::Index>(k);
    throw Error(ErrorKind::invalid_input, "QfiMatrix: unknown parameter '" + n + "'");
  };
  return entries(index(a), index(b));
}

QfiMatrix sld_qfi(const DensityState& rho, const std::vector<ComplexMatrix>& drho, std::vector<std::string> names,
                  double eps) {
  const HermitianSpectrum spec = eig_hermitian(hermitian_part(rho.matrix));
  std::vector<ComplexMatrix> rotated;
  rotated.reserve(drho.size());
  for (const auto& d : drho) {
    require_hermitian_derivative(d);
    rotated.push_back(spec.vectors.adjoint() * d * spec.vectors);
  }
  const auto n = static_cast<Eigen::Index>(drho.size());
  const Eigen::Index dim = rho.matrix.rows();
  QfiMatrix q;
  q.entries = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double f = 0.0;
      for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
          const double denom = spec.eigenvalues(a) + spec.eigenvalues(b);
          if (denom <= eps) continue;
          f += 2.0 * (rotated[i](a, b) * rotated[j](b, a)).real() / denom;
        }
      }
      q.entries(i, j) = q.entries(j, i) = f;
    }
  }
  if (names.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  }
  q.names = std::move(names);
  q.provenance = Provenance::numeric;
  return q;
}

double sld_qfi(const ComplexMatrix& rho, const ComplexMatrix& drho, double eps) {
  DensityState s;
  s.matrix = rho;
  return sld_qfi(s, {drho}, {"p"}, eps).entries(0, 0);
}

double qubit_qfi_closed(const DensityState& rho, const ComplexMatrix& di, const ComplexMatrix& dj,
                        double det_threshold) {
  if (rho.matrix.rows() != 2) throw Error(ErrorKind::invalid_input, "qubit_qfi_closed: state must be 2x2");
  require_hermitian_derivative(di);
  require_hermitian_derivative(dj);
  const ComplexMatrix& r = rho.matrix;
  const double det = (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real();
  if (!(det > det_threshold)) {
    throw Error(ErrorKind::pure_state_limit, "qubit_qfi_closed: det(rho) too small, use sld_qfi", det);
  }
  return (di * dj).trace().real() + (r * di * r * dj).trace().real() / det;
}

double qfi_scalar(const ComplexMatrix& rho, const ComplexMatrix& drho, double purity_switch) {
  if (rho.rows() == 2) {
    const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
    // Below the switch the closed form is still used while det is resolved
    // far above its own rounding error: states a few 1e-14 from pure, as
    // produced by long decays, would otherwise lose the dominant term to the
    // eigen-sum cutoff.
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() *
                            (std::abs(rho(0, 0) * rho(1, 1)) + std::abs(rho(0, 1) * rho(1, 0)));
    if (det >= purity_switch || det > 1e6 * rounding) {
      DensityState s;
      s.matrix = rho;
      return qubit_qfi_closed(s, drho, drho, 0.0);
    }
  }
  return sld_qfi(rho, drho);
}

ComplexMatrix sld_operator(const ComplexMatrix& rho, const ComplexMatrix& drho, double eps) {
  const HermitianSpectrum spec = eig_hermitian(hermitian_part(rho));
  ComplexMatrix d = spec.vectors.adjoint() * drho * spec.vectors;
  for (Eigen::Index a = 0; a < d.rows(); ++a) {
    for (Eigen::Index b = 0; b < d.cols(); ++b) {
      const double denom = spec.eigenvalues(a) + spec.eigenvalues(b);
      d(a, b) = denom > eps ? 2.0 * d(a, b) / denom : Complex(0.0);
    }
  }
  return hermitian_part(spec.vectors * d * spec.vectors.adjoint());
}

Povm::Povm(std::vector<ComplexMatrix> effects, double tol) : effects_(std::move(effects)) {
  if (effects_.empty()) throw Error(ErrorKind::invalid_input, "Povm: no effects");
  const Eigen::Index dim = effects_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& e : effects_) {
    if (e.rows() != dim || e.cols() != dim) throw Error(ErrorKind::invalid_input, "Povm: effect dimension mismatch");
    if (!is_hermitian(e, tol)) throw Error(ErrorKind::invalid_input, "Povm: effect is not Hermitian");
    if (eig_hermitian(e).eigenvalues.minCoeff() < -tol) {
      throw Error(ErrorKind::invalid_input, "Povm: effect is not positive semidefinite");
    }
    sum += e;
  }
  if (norm(sum - identity(dim)) > tol) throw Error(ErrorKind::invalid_input, "Povm: effects do not sum to identity");
}

Povm Povm::projective(const ComplexMatrix& observable) {
  const HermitianSpectrum spec = eig_hermitian(hermitian_part(observable));
  std::vector<ComplexMatrix> effects;
  for (Eigen::Index k = 0; k < spec.vectors.cols(); ++k) {
    effects.push_back(spec.vectors.col(k) * spec.vectors.col(k).adjoint());
  }
  return Povm(std::move(effects));
}

ClassicalFi classical_fi(const DensityState& rho, const ComplexMatrix& drho, const Povm& povm,
                         double probability_floor) {
  ClassicalFi out;
  for (std::size_t k = 0; k < povm.effects().size(); ++k) {
    const ComplexMatrix& e = povm.effects()[k];
    const double p = (e * rho.matrix).trace().real();
    const double dp = (e * drho).trace().real();
    if (p <= probability_floor) {
      out.excluded.push_back(k);
      continue;
    }
    out.value += dp * dp / p;
  }
  return out;
}

Povm sld_eigenbasis_povm(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  return Povm::projective(sld_operator(rho, drho));
}

ComplexMatrix apply_channel(const Channel& channel, const ComplexMatrix& rho0, double t) {
  if (const auto* m = std::get_if<MetricChannel>(&channel)) {
    return hermitian_part(unitary_conjugate(m->h, rho0, t));
  }
  if (const auto* n = std::get_if<NormalizedChannel>(&channel)) {
    const ComplexMatrix raw = hermitian_part(propagate_tilde(n->h_tilde, rho0, t));
    const double tr = raw.trace().real();
    if (!(tr > 1e-12)) throw Error(ErrorKind::norm_collapse, "normalized channel: trace collapsed", t);
    return raw / tr;
  }
  if (const auto* l = std::get_if<LindbladChannel>(&channel)) {
    return t == 0.0 ? rho0 : lindblad_propagate(l->model, rho0, t);
  }
  const auto& nj = std::get<NoJumpChannel>(channel);
  if (!(nj.dt > 0.0)) throw Error(ErrorKind::invalid_input, "no-jump channel: dt must be positive");
  const double step = std::min(nj.dt, t);
  if (step == 0.0) return rho0;
  const double base = t - step;
  const ComplexMatrix rho_me = base > 0.0 ? lindblad_propagate(nj.model, rho0, base) : rho0;
  const ComplexMatrix m0 = mat_exp(-kI * step * effective_hamiltonian(nj.model));
  const ComplexMatrix out = hermitian_part(m0 * rho_me * m0.adjoint());
  const double p0 = out.trace().real();
  if (!(p0 > 0.0)) throw Error(ErrorKind::degenerate_step, "no-jump channel: zero no-jump probability", t);
  return out / p0;
}

ComplexMatrix ParamPipeline::apply(const InputStateParams& p) const {
  return apply_channel(channel, make_input_state(p).matrix, time);
}

const char* to_string(StateParam p) { return p == StateParam::theta ? "theta" : "x"; }

double max_feasible_step(const InputStateParams& params, StateParam which) {
  const double theta = params.theta, x = params.x;
  if (which == StateParam::theta) {
    const double disc = 1.0 - 4.0 * x * x;
    if (disc < 0.0) return 0.0;
    const double lo = 0.5 * (1.0 - std::sqrt(disc)), hi = 0.5 * (1.0 + std::sqrt(disc));
    return std::max(0.0, std::min(theta - lo, hi - theta));
  }
  const double prod = theta * (1.0 - theta);
  if (prod < 0.0) return 0.0;
  return std::max(0.0, std::sqrt(prod) - std::abs(x));
}

ComplexMatrix central_derivative(const std::function<ComplexMatrix(double)>& f, double p, double h) {
  auto diff = [&](double step) { return ComplexMatrix((f(p + step) - f(p - step)) / (2.0 * step)); };
  const ComplexMatrix coarse = diff(h);
  const ComplexMatrix fine = diff(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

ComplexMatrix param_derivative(const ParamPipeline& pipeline, const InputStateParams& params, StateParam which,
                               std::optional<double> h) {
  const double value = which == StateParam::theta ? params.theta : params.x;
  const double step = h.value_or(1e-5 * std::max(1.0, std::abs(value)));
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_input, "param_derivative: step must be positive");
  const double feasible = max_feasible_step(params, which);
  if (step > feasible) {
    throw Error(ErrorKind::step_adjustment,
                std::string("param_derivative: step leaves the state domain for ") + to_string(which), feasible);
  }
  auto f = [&](double v) {
    InputStateParams q = params;
    (which == StateParam::theta ? q.theta : q.x) = v;
    return pipeline.apply(q);
  };
  ComplexMatrix d = hermitian_part(central_derivative(f, value, step));
  impose_traceless(d, pipeline.apply(params));
  return d;
}

std::vector<double> qfi_vs_time(const Channel& channel, const InputStateParams& params, StateParam which,
                                const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const ParamPipeline pipe{channel, t};
    const ComplexMatrix d = param_derivative(pipe, params, which);
    out.push_back(qfi_scalar(pipe.apply(params), d));
  }
  return out;
}

QfiSeries qfi_series(const std::string& label, const Channel& channel, const InputStateParams& params,
                     StateParam which, const std::vector<double>& grid, double tau_divisor) {
  if (!(tau_divisor > 0.0)) throw Error(ErrorKind::invalid_input, "qfi_series: tau divisor must be positive");
  QfiSeries s;
  s.label = label;
  s.t = grid;
  for (double t : grid) s.tau.push_back(t / tau_divisor);
  s.values = qfi_vs_time(channel, params, which, grid);
  return s;
}

QfiMatrix hamiltonian_qfi_numeric(const General2x2Params& hp, const InputStateParams& sp, double t, double h) {
  const ComplexMatrix rho0 = make_input_state(sp).matrix;
  auto evolve = [&](const General2x2Params& p) {
    return unitary_conjugate(hermitian_counterpart_general(p.r, p.s, p.tau, p.phi), rho0, t);
  };
  std::vector<ComplexMatrix> derivs;
  for (int k = 0; k < 4; ++k) {
    auto f = [&](double v) {
      General2x2Params p = hp;
      double* field[] = {&p.r, &p.s, &p.tau, &p.phi};
      *field[k] = v;
      return evolve(p);
    };
    const double values[] = {hp.r, hp.s, hp.tau, hp.phi};
    const double step = h * std::max(1.0, std::abs(values[k]));
    derivs.push_back(hermitian_part(central_derivative(f, values[k], step)));
  }
  DensityState st;
  st.matrix = evolve(hp);
  return sld_qfi(st, derivs, {"r", "s", "tau", "phi"});
}

namespace catalog {

namespace {

void require_mixed(const InputStateParams& sp) {
  sp.validate();
  if (!(sp.theta * (1.0 - sp.theta) - sp.x * sp.x > 0.0)) {
    throw Error(ErrorKind::constraint_violation, "closed-form QFI: input state must be mixed");
  }
}

void require_real_gain_loss(const GainLossParams& m) {
  if (!(m.g * m.g > m.gamma * m.gamma)) {
    throw Error(ErrorKind::constraint_violation, "gain-loss closed forms require g^2 > gamma^2");
  }
}

}  // namespace

QfiMatrix hamiltonian_block(const General2x2Params& hp, const InputStateParams& sp, double t) {
  sp.validate();
  if (hp.s == 0.0) throw Error(ErrorKind::constraint_violation, "hamiltonian_block: requires s != 0");
  const double theta = sp.theta, x = sp.x, s = hp.s, tau = hp.tau, phi = hp.phi;
  const double rad2 = s * s + tau * tau, rad = std::sqrt(rad2);
  const double alpha = 2.0 * t * rad;
  const double kp = (1.0 - 2.0 * theta) * (1.0 - 2.0 * theta) + 4.0 * x * x;
  const double km = (1.0 - 2.0 * theta) * (1.0 - 2.0 * theta) - 4.0 * x * x;
  const double lam = 4.0 * (2.0 * theta - 1.0) * x;
  const double sa = std::sin(alpha), ca = std::cos(alpha), sh = std::sin(0.5 * alpha);

  const double lin = (2.0 * theta - 1.0) * std::sin(phi) + 2.0 * x * std::cos(phi);
  const double f_ss = 4.0 * s * s * t * t * lin * lin / rad2;
  const double f_sp = s * t * sa * (km * std::sin(2.0 * phi) + lam * std::cos(2.0 * phi)) / rad;
  const double f_pp = 0.5 * sa * sa * (km * std::cos(2.0 * phi) - lam * std::sin(2.0 * phi)) - kp * sh * sh * (ca - 3.0);
  const double ratio = tau / s;

  QfiMatrix q;
  q.names = {"r", "s", "tau", "phi"};
  q.provenance = Provenance::closed_form;
  q.entries = RealMatrix::Zero(4, 4);
  q.entries(1, 1) = f_ss;
  q.entries(1, 2) = q.entries(2, 1) = ratio * f_ss;
  q.entries(2, 2) = ratio * ratio * f_ss;
  q.entries(1, 3) = q.entries(3, 1) = f_sp;
  q.entries(2, 3) = q.entries(3, 2) = ratio * f_sp;
  q.entries(3, 3) = f_pp;
  return q;
}

QfiMatrix state_block(const InputStateParams& sp) {
  require_mixed(sp);
  const double theta = sp.theta, x = sp.x;
  const double det = theta * (1.0 - theta) - x * x;
  QfiMatrix q;
  q.names = {"theta", "x"};
  q.provenance = Provenance::closed_form;
  q.entries.resize(2, 2);
  q.entries(0, 0) = (1.0 - 4.0 * x * x) / det;
  q.entries(1, 1) = 4.0 * theta * (1.0 - theta) / det;
  q.entries(0, 1) = q.entries(1, 0) = 2.0 * x * (2.0 * theta - 1.0) / det;
  return q;
}

double metric(const InputStateParams& sp) {
  require_mixed(sp);
  return (1.0 - 4.0 * sp.x * sp.x) / (sp.theta * (1.0 - sp.theta) - sp.x * sp.x);
}

double gain_loss_trace(const GainLossParams& m, const InputStateParams& sp, double t) {
  require_real_gain_loss(m);
  const double w2 = m.g * m.g - m.gamma * m.gamma, w = std::sqrt(w2);
  const double beta = 2.0 * t * w;
  return m.gamma * (2.0 * sp.theta - 1.0) / w * std::sin(beta) - m.gamma * m.gamma / w2 * std::cos(beta) +
         m.g * m.g / w2;
}

double gain_loss_norm_printed(const GainLossParams& m, const InputStateParams& sp, double t) {
  require_real_gain_loss(m);
  const double w2 = m.g * m.g - m.gamma * m.gamma, w = std::sqrt(w2);
  const double beta = 2.0 * t * w;
  const double denom = m.g * m.g + m.gamma * (2.0 * sp.theta - 1.0) * w * std::sin(beta) -
                       m.gamma * m.gamma * std::cos(beta);
  return w2 * w2 * metric(sp) / denom;
}

double gain_loss_norm(const GainLossParams& m, const InputStateParams& sp, double t) {
  const double tr = gain_loss_trace(m, sp, t);
  return metric(sp) / (tr * tr);
}

double decaying_trace(const DecayingQubitParams& m, const InputStateParams& sp, double t) {
  return std::exp(-2.0 * m.gamma * t) * (sp.theta * (std::exp(4.0 * m.gamma * t) - 1.0) + 1.0);
}

double decaying_norm(const DecayingQubitParams& m, const InputStateParams& sp, double t) {
  require_mixed(sp);
  const double e4 = std::exp(4.0 * m.gamma * t);
  const double d = sp.theta * (e4 - 1.0) + 1.0;
  return (1.0 - 4.0 * sp.x * sp.x) * e4 / ((sp.theta * (1.0 - sp.theta) - sp.x * sp.x) * d * d);
}

double decaying_me_printed(const DecayingQubitParams& m, const InputStateParams& sp, double t) {
  sp.validate();
  const double e2 = std::exp(2.0 * m.gamma * t);
  const double theta = sp.theta, x = sp.x;
  return std::exp(-2.0 * m.gamma * t) * (4.0 * x * x - e2) /
         ((1.0 - theta) * (1.0 - theta) + e2 * (theta + x * x - 1.0));
}

double decaying_me(const DecayingQubitParams& m, const InputStateParams& sp, double t) {
  return decaying_me_printed(DecayingQubitParams{m.omega, 2.0 * m.gamma}, sp, t);
}

double evaluate(const std::string& id, const ModelParams& model, const InputStateParams& sp, double t) {
  if (id == "metric") return metric(sp);
  const auto* gl = std::get_if<GainLossParams>(&model);
  const auto* dq = std::get_if<DecayingQubitParams>(&model);
  if (id.rfind("gain_loss.", 0) == 0) {
    if (!gl) throw Error(ErrorKind::constraint_violation, "formula " + id + " needs gain-loss parameters");
    if (id == "gain_loss.trace") return gain_loss_trace(*gl, sp, t);
    if (id == "gain_loss.norm") return gain_loss_norm(*gl, sp, t);
    if (id == "gain_loss.norm_printed") return gain_loss_norm_printed(*gl, sp, t);
  } else if (id.rfind("decaying.", 0) == 0) {
    if (!dq) throw Error(ErrorKind::constraint_violation, "formula " + id + " needs decaying-qubit parameters");
    if (id == "decaying.trace") return decaying_trace(*dq, sp, t);
    if (id == "decaying.norm") return decaying_norm(*dq, sp, t);
    if (id == "decaying.me") return decaying_me(*dq, sp, t);
    if (id == "decaying.me_printed") return decaying_me_printed(*dq, sp, t);
  }
  throw Error(ErrorKind::unknown_formula, "unknown closed-form formula '" + id + "'");
}

}  // namespace catalog

}  // namespace nhqfi
