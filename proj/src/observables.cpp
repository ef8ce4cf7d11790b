#include "nhqfi/observables.hpp"

#include <cmath>

#include "nhqfi/error.hpp"

namespace nhqfi {

ComplexMatrix Observable::matrix() const {
  ComplexMatrix m(2, 2);
  m << a0 + a3, Complex(a1, -a2),
       Complex(a1, a2), a0 - a3;
  return m;
}

Observable Observable::from_matrix(const ComplexMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw Error(ErrorKind::invalid_input, "Observable: matrix must be 2x2");
  if (!is_hermitian(a, 1e-12 * std::max(1.0, norm(a)))) {
    throw Error(ErrorKind::contract_violation, "Observable: matrix is not Hermitian");
  }
  Observable o;
  o.a0 = 0.5 * a.trace().real();
  o.a1 = 0.5 * (a * pauli::x()).trace().real();
  o.a2 = 0.5 * (a * pauli::y()).trace().real();
  o.a3 = 0.5 * (a * pauli::z()).trace().real();
  return o;
}

const char* to_string(Formalism f) {
  switch (f) {
    case Formalism::metric: return "metric";
    case Formalism::norm: return "norm";
    case Formalism::nj: return "nj";
    case Formalism::me: return "me";
  }
  return "unknown";
}

Formalism formalism_from_string(const std::string& s) {
  if (s == "metric") return Formalism::metric;
  if (s == "norm") return Formalism::norm;
  if (s == "nj") return Formalism::nj;
  if (s == "me") return Formalism::me;
  throw Error(ErrorKind::config_error, "unknown formalism '" + s + "' (expected metric|norm|nj|me)");
}

std::vector<double> expect(Formalism f, const StateTrajectory& traj, const Observable& a,
                           const MetricTrajectory* eta, bool tilde_frame) {
  const ComplexMatrix am = a.matrix();
  std::vector<double> out;
  out.reserve(traj.size());
  if (f == Formalism::metric && tilde_frame) {
    if (eta == nullptr) throw Error(ErrorKind::missing_metric, "expect: metric formalism on tilde states needs a metric");
    if (eta->metrics.size() != traj.size()) {
      throw Error(ErrorKind::invalid_input, "expect: metric trajectory and state trajectory differ in length");
    }
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double raw = k < traj.raw_traces.size() ? traj.raw_traces[k] : 1.0;
      out.push_back(eta_expectation(traj.states[k].matrix * raw, eta->metrics[k], am));
    }
    return out;
  }
  const bool divide = f == Formalism::norm || f == Formalism::nj;
  for (const auto& s : traj.states) {
    const double v = (s.matrix * am).trace().real();
    out.push_back(divide ? v / s.matrix.trace().real() : v);
  }
  return out;
}

namespace {

struct Coefficients {
  double alpha0, alpha1, beta0, beta1;
};

Coefficients coefficients(double theta, double gamma, double t) {
  const double e2 = std::exp(2.0 * gamma * t), e4 = std::exp(4.0 * gamma * t);
  const double d = theta * (e4 - 1.0) + 1.0;
  Coefficients c;
  c.alpha0 = e2 / d;
  c.alpha1 = (e2 - 1.0) * (theta * (e2 - 1.0) + 1.0) / d;
  c.beta0 = theta + (1.0 - theta) * std::exp(-4.0 * gamma * t);
  c.beta1 = -(1.0 - theta) * (1.0 - std::exp(-4.0 * gamma * t));
  return c;
}

// Large gamma*t overflows the exponentials; the limits are finite.
bool saturated(double gamma, double t) { return 4.0 * gamma * t > 600.0; }

}  // namespace

ExpectationTriple closed_form_expectations(const Observable& a, double theta, double x, double omega, double gamma,
                                           double t) {
  ExpectationTriple r;
  const double m = (1.0 - 2.0 * theta) * a.a3 + 2.0 * x * std::cos(2.0 * omega * t) * a.a1 +
                   2.0 * x * std::sin(2.0 * omega * t) * a.a2;
  r.metric = a.a0 + m;
  if (saturated(gamma, t)) {
    r.norm = r.me = a.a0 - a.a3;
    return r;
  }
  const Coefficients c = coefficients(theta, gamma, t);
  const double n = c.alpha0 * m - c.alpha1 * a.a3;
  r.norm = a.a0 + n;
  r.me = a.a0 + c.beta0 * n + c.beta1 * a.a3;
  return r;
}

ExpectationTriple printed_expectations(const Observable& a, double theta, double x, double omega, double gamma,
                                       double t) {
  ExpectationTriple r;
  r.metric = (1.0 - 2.0 * theta) * a.a3 + 2.0 * x * (1.0 - std::cos(2.0 * omega * t)) * a.a1 +
             2.0 * x * std::sin(2.0 * omega * t) * a.a2;
  const Coefficients c = coefficients(theta, gamma, t);
  r.norm = c.alpha0 * r.metric + c.alpha1 * a.a3;
  r.me = c.beta0 * r.norm + c.beta1 * a.a3;
  return r;
}

std::array<double, 3> bloch_vector(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw Error(ErrorKind::invalid_input, "bloch_vector: state must be 2x2");
  return {(rho * pauli::x()).trace().real(), (rho * pauli::y()).trace().real(), (rho * pauli::z()).trace().real()};
}

}  // namespace nhqfi
