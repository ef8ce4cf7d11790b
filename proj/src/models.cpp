#include "nhqfi/models.hpp"

#include <cmath>

#include "nhqfi/error.hpp"

namespace nhqfi {

OpenModel::OpenModel(ComplexMatrix h, std::vector<ComplexMatrix> jump_ops)
    : hamiltonian(std::move(h)), jumps(std::move(jump_ops)) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() < 1) {
    throw Error(ErrorKind::invalid_input, "OpenModel: Hamiltonian must be square");
  }
  if (!is_hermitian(hamiltonian, 1e-12 * std::max(1.0, norm(hamiltonian)))) {
    throw Error(ErrorKind::contract_violation, "OpenModel: Hamiltonian is not Hermitian");
  }
  for (const auto& j : jumps) {
    if (j.rows() != hamiltonian.rows() || j.cols() != hamiltonian.cols()) {
      throw Error(ErrorKind::invalid_input, "OpenModel: jump operator dimension mismatch");
    }
  }
}

std::string to_string(Region region) {
  switch (region) {
    case Region::hermitian_real: return "Omega_H^R";
    case Region::nonhermitian_real: return "Omega_NH^R";
    case Region::nonhermitian_complex: return "Omega_NH^C";
  }
  return "unknown";
}

void InputStateParams::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(x) || theta < 0.0 || theta > 1.0) {
    throw Error(ErrorKind::nonphysical_state, "input state: theta must lie in [0, 1]");
  }
  if (x * x > theta * (1.0 - theta)) {
    throw Error(ErrorKind::nonphysical_state, "input state: x^2 > theta (1 - theta)");
  }
}

ComplexMatrix model_matrix(const ModelParams& params) {
  ComplexMatrix m(2, 2);
  if (const auto* p = std::get_if<General2x2Params>(&params)) {
    const double c = std::cos(p->phi), s = std::sin(p->phi);
    const Complex off = kI * p->s * c + p->tau * s;
    m << p->r + p->tau * c - kI * p->s * s, off,
         off, p->r - p->tau * c + kI * p->s * s;
  } else if (const auto* q = std::get_if<GainLossParams>(&params)) {
    m << q->omega0 - kI * q->gamma, q->g,
         q->g, q->omega0 + kI * q->gamma;
  } else {
    const auto& d = std::get<DecayingQubitParams>(params);
    m = (d.omega - kI * d.gamma) * pauli::z();
  }
  return m;
}

NhModel make_general2x2(double r, double s, double tau, double phi) {
  NhModel m;
  m.params = General2x2Params{r, s, tau, phi};
  m.matrix = model_matrix(m.params);
  m.real_spectrum = std::abs(s) <= std::abs(tau);
  return m;
}

ComplexMatrix hermitian_counterpart_general(double r, double s, double tau, double phi) {
  const double radius = std::hypot(tau, s);
  if (radius == 0.0) {
    throw Error(ErrorKind::invalid_input, "hermitian_counterpart_general: requires s^2 + tau^2 > 0");
  }
  const double c = std::cos(phi), sn = std::sin(phi);
  ComplexMatrix h(2, 2);
  h << r + radius * c, radius * sn,
       radius * sn, r - radius * c;
  return h;
}

NhModel make_gain_loss(double omega0, double g, double gamma) {
  NhModel m;
  m.params = GainLossParams{omega0, g, gamma};
  m.matrix = model_matrix(m.params);
  m.real_spectrum = std::abs(gamma) <= std::abs(g);
  return m;
}

OpenModel make_gain_loss_open(double omega0, double g, double gamma, double rate_scale) {
  if (gamma < 0.0 || rate_scale < 0.0) {
    throw Error(ErrorKind::invalid_rate, "gain-loss master equation: rate must be non-negative");
  }
  const ComplexMatrix h = omega0 * pauli::identity() + g * pauli::x();
  return OpenModel(h, {std::sqrt(rate_scale * 2.0 * gamma) * pauli::minus()});
}

std::pair<NhModel, OpenModel> make_decaying_qubit(double omega, double gamma, double rate_scale) {
  if (!(gamma >= 0.0) || rate_scale < 0.0) {
    throw Error(ErrorKind::invalid_rate, "decaying qubit: gamma must be non-negative");
  }
  NhModel nh;
  nh.params = DecayingQubitParams{omega, gamma};
  nh.matrix = model_matrix(nh.params);
  nh.real_spectrum = gamma == 0.0;
  OpenModel open(omega * pauli::z(), {std::sqrt(rate_scale * gamma) * pauli::minus()});
  return {std::move(nh), std::move(open)};
}

ComplexMatrix effective_hamiltonian(const OpenModel& model) {
  ComplexMatrix h = model.hamiltonian;
  for (const auto& j : model.jumps) h -= 0.5 * kI * (j.adjoint() * j);
  return h;
}

Region classify_region(const ComplexMatrix& h, double tol) {
  const double scale = std::max(norm(h), std::numeric_limits<double>::min());
  if (hermiticity_defect(h) <= tol * scale) return Region::hermitian_real;
  const Spectrum s = eig_general(h);
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    if (std::abs(s.eigenvalues(k).imag()) > tol * scale) return Region::nonhermitian_complex;
  }
  return Region::nonhermitian_real;
}

DensityState make_input_state(const InputStateParams& p) {
  p.validate();
  DensityState st;
  st.matrix.resize(2, 2);
  st.matrix << 1.0 - p.theta, p.x,
               p.x, p.theta;
  st.convention = TraceConvention::standard;
  st.time = 0.0;
  return st;
}

}  // namespace nhqfi
