#include <doctest.h>

#include <cmath>
#include <random>

#include "nhqfi/dynamics.hpp"
#include "nhqfi/error.hpp"
#include "nhqfi/metric.hpp"
#include "nhqfi/models.hpp"
#include "nhqfi/observables.hpp"
#include "test_util.hpp"

using namespace nhqfi;
using testutil::kind_of;
using testutil::m2;
using testutil::max_abs_diff;

TEST_CASE("observable coefficients") {
  const Observable a{0.5, -1.0, 2.0, 0.25};
  const ComplexMatrix m = a.matrix();
  CHECK(max_abs_diff(m, 0.5 * identity(2) - pauli::x() + 2.0 * pauli::y() + 0.25 * pauli::z()) < 1e-15);
  const Observable b = Observable::from_matrix(m);
  CHECK(b.a0 == doctest::Approx(0.5));
  CHECK(b.a1 == doctest::Approx(-1.0));
  CHECK(b.a2 == doctest::Approx(2.0));
  CHECK(b.a3 == doctest::Approx(0.25));
  CHECK(kind_of([] { Observable::from_matrix(pauli::minus()); }) == ErrorKind::contract_violation);
  CHECK(kind_of([] { Observable::from_matrix(identity(3)); }) == ErrorKind::invalid_input);
}

TEST_CASE("formalism names") {
  for (auto f : {Formalism::metric, Formalism::norm, Formalism::nj, Formalism::me}) {
    CHECK(formalism_from_string(to_string(f)) == f);
  }
  CHECK(kind_of([] { formalism_from_string("lindblad"); }) == ErrorKind::config_error);
}

TEST_CASE("Bloch vectors") {
  const auto b = bloch_vector(make_input_state({0.6, 0.24}));
  CHECK(b[0] == doctest::Approx(0.48));
  CHECK(std::abs(b[1]) < 1e-16);
  CHECK(b[2] == doctest::Approx(-0.2));
  const auto mixed = bloch_vector(identity(2) / 2.0);
  CHECK(std::abs(mixed[0]) + std::abs(mixed[1]) + std::abs(mixed[2]) < 1e-16);
  const auto excited = bloch_vector(m2(1.0, 0.0, 0.0, 0.0));
  CHECK(excited[2] == 1.0);
  CHECK(kind_of([] { bloch_vector(identity(3)); }) == ErrorKind::invalid_input);
}

TEST_CASE("identity expectation is one in every formalism") {
  const ComplexMatrix h = make_gain_loss(0.0, 0.5, 0.4).matrix;
  const DensityState rho0 = make_input_state({0.6, 0.24});
  const auto grid = uniform_grid(5.0, 11);
  const auto traj = evolve_normalized(h, rho0, grid);
  const Observable one{1.0, 0.0, 0.0, 0.0};
  const auto eta = MetricTrajectory::from_static(biorthogonal_metric(h), grid);
  for (auto f : {Formalism::metric, Formalism::norm, Formalism::nj, Formalism::me}) {
    for (double v : expect(f, traj, one, &eta, f == Formalism::metric)) CHECK(v == doctest::Approx(1.0));
  }
  CHECK(kind_of([&] { expect(Formalism::metric, traj, one, nullptr, true); }) == ErrorKind::missing_metric);
  const auto short_eta = MetricTrajectory::from_static(biorthogonal_metric(h), {0.0, 1.0});
  CHECK(kind_of([&] { expect(Formalism::metric, traj, one, &short_eta, true); }) == ErrorKind::invalid_input);
}

TEST_CASE("metric expectation on tilde states equals the Hermitized-frame value") {
  const ComplexMatrix h = make_gain_loss(0.0, 0.5, 0.4).matrix;
  const MetricOperator eta = biorthogonal_metric(h);
  const ComplexMatrix hh = hermitize(h, eta);
  const DensityState rho0 = make_input_state({0.6, 0.24});
  const auto grid = uniform_grid(12.0, 25);
  const auto tilde = evolve_normalized(h, rho0, grid);
  DensityState frame0;
  frame0.matrix = eta.vielbein() * rho0.matrix * eta.vielbein().adjoint();
  frame0.matrix /= trace(frame0.matrix).real();
  const auto frame = evolve_metric(hh, frame0, grid);
  const auto eta_traj = MetricTrajectory::from_static(eta, grid);
  for (const Observable& a : {Observable{0, 1, 0, 0}, Observable{0, 0, 1, 0}, Observable{0.3, 0, 0, 1}}) {
    const auto via_eta = expect(Formalism::metric, tilde, a, &eta_traj, true);
    const auto direct = expect(Formalism::metric, frame, a);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(via_eta[k] - direct[k]) < 1e-10);
  }
}

TEST_CASE("decaying qubit closed-form expectations match evolution") {
  const double omega = 0.5, gamma = 0.4;
  const auto [nh, open] = make_decaying_qubit(omega, gamma);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto sp : {InputStateParams{0.4, 0.24}, InputStateParams{0.4, 0.0}, InputStateParams{0.8, -0.3}}) {
    const DensityState rho0 = make_input_state(sp);
    const auto grid = uniform_grid(10.0, 51);
    const auto metric = evolve_metric(omega * pauli::z(), rho0, grid);
    const auto norm = evolve_normalized(nh.matrix, rho0, grid);
    const auto me = evolve_lindblad(open, rho0, grid);
    for (int trial = 0; trial < 5; ++trial) {
      const Observable a{u(rng), u(rng), u(rng), u(rng)};
      const auto vm = expect(Formalism::metric, metric, a);
      const auto vn = expect(Formalism::norm, norm, a);
      const auto ve = expect(Formalism::me, me, a);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const ExpectationTriple c = closed_form_expectations(a, sp.theta, sp.x, omega, gamma, grid[k]);
        CHECK(std::abs(c.metric - vm[k]) < 1e-12);
        CHECK(std::abs(c.norm - vn[k]) < 1e-12);
        CHECK(std::abs(c.me - ve[k]) < 1e-12);
      }
    }
  }
}

TEST_CASE("closed-form expectations at long times") {
  const Observable sz{0.0, 0.0, 0.0, 1.0};
  const ExpectationTriple late = closed_form_expectations(sz, 0.4, 0.0, 0.5, 0.4, 5.0 / 0.4);
  CHECK(std::abs(late.norm + 1.0) < 1e-3);
  CHECK(std::abs(late.me + 1.0) < 1e-3);
  // Past the overflow guard the limits are exact.
  const Observable a{0.2, 0.3, -0.1, 0.7};
  const ExpectationTriple inf = closed_form_expectations(a, 0.4, 0.24, 0.5, 0.4, 1e4);
  CHECK(inf.norm == doctest::Approx(0.2 - 0.7));
  CHECK(inf.me == doctest::Approx(0.2 - 0.7));
  CHECK(std::isfinite(inf.metric));
}

TEST_CASE("printed expectation coefficients") {
  // They agree with the evolution at t = 0 for traceless, sigma_x-free observables.
  const Observable a{0.0, 0.0, 0.4, 1.0};
  const ExpectationTriple p = printed_expectations(a, 0.4, 0.24, 0.5, 0.4, 0.0);
  const ExpectationTriple c = closed_form_expectations(a, 0.4, 0.24, 0.5, 0.4, 0.0);
  CHECK(p.metric == doctest::Approx(c.metric));
  CHECK(p.norm == doctest::Approx(c.norm));
  CHECK(p.me == doctest::Approx(c.me));
  // Later the positive alpha1 sends <sigma_z>_norm to +1 instead of the ground-state -1.
  const Observable sz{0.0, 0.0, 0.0, 1.0};
  const ExpectationTriple late = printed_expectations(sz, 0.4, 0.0, 0.5, 0.4, 20.0);
  CHECK(late.norm == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(closed_form_expectations(sz, 0.4, 0.0, 0.5, 0.4, 20.0).norm == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("Bloch length is conserved by metric evolution") {
  const DensityState rho0 = make_input_state({0.6, 0.24});
  const auto traj = evolve_metric(0.3 * pauli::x(), rho0, uniform_grid(20.0, 101));
  const auto b0 = bloch_vector(rho0);
  const double r0 = std::hypot(b0[0], b0[1], b0[2]);
  for (const auto& s : traj.states) {
    const auto b = bloch_vector(s);
    CHECK(std::abs(std::hypot(b[0], b[1], b[2]) - r0) < 1e-12);
  }
}
