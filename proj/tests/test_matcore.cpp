#include <doctest.h>

#include <random>
#include <sstream>

#include "nhqfi/error.hpp"
#include "nhqfi/matcore.hpp"
#include "test_util.hpp"

using namespace nhqfi;
using testutil::m2;
using testutil::kind_of;
using testutil::max_abs_diff;

TEST_CASE("pauli algebra") {
  const auto x = pauli::x(), y = pauli::y(), z = pauli::z(), one = pauli::identity();
  CHECK(max_abs_diff(x * y, kI * z) < 1e-15);
  CHECK(max_abs_diff(z * z, one) < 1e-15);
  CHECK(z(0, 0) == Complex(1.0));
  CHECK(z(1, 1) == Complex(-1.0));
  // sigma_- takes the excited level (index 0) to the ground level (index 1).
  ComplexVector excited(2);
  excited << 1.0, 0.0;
  const ComplexVector lowered = pauli::minus() * excited;
  CHECK(std::abs(lowered(1) - 1.0) < 1e-15);
  CHECK(std::abs(lowered(0)) < 1e-15);
  CHECK(max_abs_diff(pauli::plus(), pauli::minus().adjoint()) == 0.0);
}

TEST_CASE("basic helpers") {
  const ComplexMatrix a = m2(1.0, Complex(2, 1), Complex(0, 3), -1.0);
  CHECK(std::abs(trace(a)) < 1e-15);
  CHECK(norm(a) == doctest::Approx(std::sqrt(1 + 5 + 9 + 1.0)));
  CHECK(is_hermitian(hermitian_part(a)));
  CHECK_FALSE(is_hermitian(a));
  CHECK(hermiticity_defect(a) == doctest::Approx(std::abs(Complex(2, 1) - Complex(0, -3))));
  CHECK(is_positive_definite(m2(2.0, 0.5, 0.5, 1.0)));
  CHECK_FALSE(is_positive_definite(m2(1.0, 2.0, 2.0, 1.0)));
  ComplexMatrix bad = a;
  bad(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_FALSE(all_finite(bad));
  CHECK(max_abs_diff(identity(3), ComplexMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("mat_exp closed forms") {
  CHECK(max_abs_diff(mat_exp(ComplexMatrix::Zero(2, 2)), identity(2)) < 1e-15);

  const ComplexMatrix d = m2(Complex(0.3, -1.2), 0.0, 0.0, -2.0);
  const ComplexMatrix ed = mat_exp(d);
  CHECK(std::abs(ed(0, 0) - std::exp(Complex(0.3, -1.2))) < 1e-14);
  CHECK(std::abs(ed(1, 1) - std::exp(-2.0)) < 1e-14);

  for (double th : {0.1, 1.0, 3.0, 10.0}) {
    const ComplexMatrix u = mat_exp(-kI * th * pauli::x());
    const ComplexMatrix expected = std::cos(th) * pauli::identity() - kI * std::sin(th) * pauli::x();
    CHECK(max_abs_diff(u, expected) < 1e-13);
  }

  // Jordan block: exp([[a,1],[0,a]]) = e^a [[1,1],[0,1]].
  const Complex a(0.2, -0.7);
  const ComplexMatrix jb = mat_exp(m2(a, 1.0, 0.0, a));
  const ComplexMatrix expected = std::exp(a) * m2(1.0, 1.0, 0.0, 1.0);
  CHECK(max_abs_diff(jb, expected) < 1e-13);
}

TEST_CASE("mat_exp agrees with a Taylor oracle on random matrices") {
  std::mt19937_64 rng(7);
  for (int n : {2, 4}) {
    for (int k = 0; k < 50; ++k) {
      const ComplexMatrix m = testutil::random_matrix(rng, n, 0.8);
      const ComplexMatrix ref = testutil::taylor_exp(m);
      CHECK(max_abs_diff(mat_exp(m), ref) < 1e-11 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("mat_exp group property") {
  std::mt19937_64 rng(11);
  const ComplexMatrix m = testutil::random_matrix(rng, 2);
  CHECK(max_abs_diff(mat_exp(m) * mat_exp(-m), identity(2)) < 1e-12);
  CHECK(max_abs_diff(mat_exp(m) * mat_exp(m), mat_exp(2.0 * m)) < 1e-11 * mat_exp(2.0 * m).norm());
}

TEST_CASE("mat_sqrt_pd") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix b = testutil::random_matrix(rng, 2);
    const ComplexMatrix pd = b.adjoint() * b + 0.1 * identity(2);
    const ComplexMatrix r = mat_sqrt_pd(pd);
    CHECK(is_hermitian(r, 1e-12));
    CHECK(is_positive_definite(r));
    CHECK(max_abs_diff(r * r, pd) < 1e-12 * pd.norm());
  }
  CHECK(kind_of([] { mat_sqrt_pd(m2(1.0, 2.0, 2.0, 1.0)); }) == ErrorKind::metric_invalid);
  CHECK(kind_of([] { mat_sqrt_pd(m2(1.0, 1.0, 0.0, 1.0)); }) == ErrorKind::metric_invalid);
  // A wide but positive spectrum passes with a relaxed floor.
  const ComplexMatrix wide = m2(1.0, 0.0, 0.0, 1e-13);
  CHECK_NOTHROW(mat_sqrt_pd(wide, 1e-15));
  CHECK(std::abs(mat_sqrt_pd(wide, 1e-15)(1, 1) - std::sqrt(1e-13)) < 1e-20);
}

TEST_CASE("mat_inv") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix m = testutil::random_matrix(rng, 3) + 3.0 * identity(3);
    CHECK(max_abs_diff(m * mat_inv(m), identity(3)) < 1e-12);
  }
  CHECK(kind_of([] { mat_inv(m2(1.0, 2.0, 2.0, 4.0)); }) == ErrorKind::singular_matrix);
}

TEST_CASE("eig_general: trace and determinant of the spectrum") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix m = testutil::random_matrix(rng, 2);
    const Spectrum s = eig_general(m);
    REQUIRE_FALSE(s.defective);
    const Complex tr = m(0, 0) + m(1, 1);
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    CHECK(std::abs(s.eigenvalues(0) + s.eigenvalues(1) - tr) < 1e-12);
    CHECK(std::abs(s.eigenvalues(0) * s.eigenvalues(1) - det) < 1e-12);
    for (int n = 0; n < 2; ++n) {
      const ComplexVector v = s.right.col(n);
      CHECK((m * v - s.eigenvalues(n) * v).norm() < 1e-12);
      CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    }
    // Biorthonormal dual basis.
    CHECK(max_abs_diff(s.left.adjoint() * s.right, identity(2)) < 1e-11);
  }
}

TEST_CASE("eig_general flags an exceptional point") {
  const double g = 0.4;
  const ComplexMatrix ep = m2(-kI * g, g, g, kI * g);
  const Spectrum s = eig_general(ep);
  CHECK(s.defective);
  CHECK(std::abs(s.eigenvalues(0)) < 1e-7);
  CHECK_FALSE(eig_general(2.0 * identity(2)).defective);
}

TEST_CASE("eig_hermitian keeps the small eigenvalue of a nearly pure state") {
  const double small = 1e-14;
  const ComplexMatrix u = mat_exp(-kI * 0.37 * pauli::y());
  const ComplexMatrix rho = u * m2(1.0 - small, 0.0, 0.0, small) * u.adjoint();
  const HermitianSpectrum s = eig_hermitian(rho);
  CHECK(s.eigenvalues(0) <= s.eigenvalues(1));
  CHECK(std::abs(s.eigenvalues(0) - small) < 1e-3 * small);
  CHECK(max_abs_diff(s.vectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.vectors.adjoint(), rho) < 1e-15);
}

TEST_CASE("null_space") {
  ComplexMatrix m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  const ComplexMatrix ns = null_space(m, 1e-12);
  REQUIRE(ns.cols() == 1);
  CHECK((m * ns).norm() < 1e-12);
  CHECK(null_space(identity(3), 1e-12).cols() == 0);
}

TEST_CASE("kron") {
  const ComplexMatrix k = kron(pauli::z(), pauli::x());
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1.0));
  CHECK(k(2, 3) == Complex(-1.0));
  CHECK(k(0, 0) == Complex(0.0));
}

TEST_CASE("matrix text round trip and errors") {
  std::mt19937_64 rng(17);
  const ComplexMatrix m = testutil::random_matrix(rng, 2);
  std::stringstream ss;
  write_matrix_text(ss, m);
  CHECK(max_abs_diff(read_matrix_text(ss), m) == 0.0);

  std::istringstream empty("");
  CHECK(kind_of([&] { read_matrix_text(empty); }) == ErrorKind::invalid_input);
  std::istringstream short_body("2\n1 0\n0 0\n");
  CHECK(kind_of([&] { read_matrix_text(short_body); }) == ErrorKind::invalid_input);
}

TEST_CASE("error what() carries the kind") {
  const Error e(ErrorKind::norm_collapse, "trace fell", 3.5);
  CHECK(std::string(e.what()) == "norm-collapse: trace fell");
  CHECK(e.payload().value() == 3.5);
}
