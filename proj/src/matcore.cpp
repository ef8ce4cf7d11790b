#include "nhqfi/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "nhqfi/error.hpp"

namespace nhqfi {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorKind::invalid_input, std::string(what) + ": matrix must be square with dim >= 1");
  }
}

// Descending real part, then descending imaginary part.
bool eigen_order(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

double condition_number(const ComplexMatrix& v) {
  Eigen::JacobiSVD<ComplexMatrix> svd(v);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

// Eigenvector of a 2x2 matrix for eigenvalue lambda, picking the better
// conditioned of the two row-derived candidates.
ComplexVector eigvec2(const ComplexMatrix& m, Complex lambda) {
  ComplexVector c1(2), c2(2);
  c1 << m(0, 1), lambda - m(0, 0);
  c2 << lambda - m(1, 1), m(1, 0);
  ComplexVector v = c1.norm() >= c2.norm() ? c1 : c2;
  if (v.norm() == 0.0) {
    v = ComplexVector::Zero(2);
    v(0) = 1.0;
  }
  return v / v.norm();
}

Spectrum eig_2x2(const ComplexMatrix& m, double degeneracy_tol) {
  const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const Complex half_tr = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  Complex l1 = half_tr + disc, l2 = half_tr - disc;
  if (!eigen_order(l1, l2) && l1 != l2) std::swap(l1, l2);

  Spectrum s;
  s.eigenvalues.resize(2);
  s.eigenvalues << l1, l2;
  s.right.resize(2, 2);

  const double scale = std::max(norm(m), std::numeric_limits<double>::min());
  const bool coalesced = std::abs(l1 - l2) <= degeneracy_tol * scale;
  if (coalesced) {
    const ComplexMatrix shifted = m - half_tr * identity(2);
    if (norm(shifted) <= degeneracy_tol * scale) {
      // Scalar matrix: every vector is an eigenvector.
      s.right = identity(2);
      s.left = identity(2);
      return s;
    }
    const ComplexVector v = eigvec2(m, half_tr);
    s.right.col(0) = v;
    s.right.col(1) = v;
    const ComplexMatrix ad = m.adjoint();
    const ComplexVector w = eigvec2(ad, std::conj(half_tr));
    s.left.resize(2, 2);
    s.left.col(0) = w;
    s.left.col(1) = w;
    s.defective = true;
    return s;
  }

  s.right.col(0) = eigvec2(m, l1);
  s.right.col(1) = eigvec2(m, l2);
  s.left = mat_inv(s.right, 0.0).adjoint();
  return s;
}

Spectrum eig_dense(const ComplexMatrix& m, double degeneracy_tol) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_input, "eig_general: eigensolver did not converge");
  }
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return eigen_order(ev(i), ev(j)); });

  Spectrum s;
  s.eigenvalues.resize(n);
  s.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues(k) = ev(order[static_cast<std::size_t>(k)]);
    ComplexVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    s.right.col(k) = v / v.norm();
  }

  const double scale = std::max(norm(m), std::numeric_limits<double>::min());
  bool coalesced = false;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(s.eigenvalues(i) - s.eigenvalues(j)) <= degeneracy_tol * scale) coalesced = true;

  const double cond = condition_number(s.right);
  if (coalesced && !(cond < 1e12)) {
    s.defective = true;
    Eigen::ComplexEigenSolver<ComplexMatrix> adj(m.adjoint(), true);
    s.left = adj.eigenvectors();
    for (Eigen::Index k = 0; k < n; ++k) s.left.col(k) /= s.left.col(k).norm();
    return s;
  }
  s.left = mat_inv(s.right, 0.0).adjoint();
  return s;
}

}  // namespace

double norm(const ComplexMatrix& m) { return m.norm(); }

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

bool is_positive_definite(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol * std::max(1.0, norm(m)))) return false;
  return eig_hermitian(hermitian_part(m)).eigenvalues.minCoeff() > tol;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

Complex trace(const ComplexMatrix& m) { return m.trace(); }

ComplexMatrix mat_exp(const ComplexMatrix& m, double cond_limit) {
  require_square(m, "mat_exp");
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "mat_exp: non-finite entries");
  if (m.isZero(0.0)) return identity(m.rows());

  const Spectrum s = eig_general(m);
  if (!s.defective && condition_number(s.right) < cond_limit) {
    ComplexVector e(s.eigenvalues.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = std::exp(s.eigenvalues(k));
    // right * diag(e) * right^-1, with right^-1 = left^dagger.
    return s.right * e.asDiagonal() * s.left.adjoint();
  }
  // Scaling and squaring with a Pade core.
  return m.exp();
}

ComplexMatrix mat_sqrt_pd(const ComplexMatrix& m, double tol) {
  require_square(m, "mat_sqrt_pd");
  const double scale = std::max(1.0, norm(m));
  if (!all_finite(m) || hermiticity_defect(m) > tol * scale) {
    throw Error(ErrorKind::metric_invalid, "mat_sqrt_pd: matrix is not Hermitian");
  }
  const HermitianSpectrum h = eig_hermitian(hermitian_part(m));
  if (!(h.eigenvalues.minCoeff() > tol * scale)) {
    throw Error(ErrorKind::metric_invalid, "mat_sqrt_pd: matrix is not positive definite");
  }
  const Eigen::VectorXd root = h.eigenvalues.cwiseSqrt();
  const ComplexMatrix r = h.vectors * root.cast<Complex>().asDiagonal() * h.vectors.adjoint();
  return hermitian_part(r);
}

ComplexMatrix mat_inv(const ComplexMatrix& m, double singular_tol) {
  require_square(m, "mat_inv");
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "mat_inv: non-finite entries");
  const Eigen::Index n = m.rows();
  const double scale = norm(m);
  const double det = std::abs(m.determinant());
  if (scale == 0.0 || det <= singular_tol * std::pow(scale, static_cast<double>(n))) {
    throw Error(ErrorKind::singular_matrix, "mat_inv: matrix is singular within threshold");
  }
  if (n == 2) {
    const Complex d = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    ComplexMatrix inv(2, 2);
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / d;
  }
  return m.fullPivLu().inverse();
}

Spectrum eig_general(const ComplexMatrix& m, double degeneracy_tol) {
  require_square(m, "eig_general");
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "eig_general: non-finite entries");
  if (m.rows() > 8) throw Error(ErrorKind::invalid_input, "eig_general: dim > 8 is out of scope");
  if (m.rows() == 1) {
    Spectrum s;
    s.eigenvalues = ComplexVector::Constant(1, m(0, 0));
    s.right = identity(1);
    s.left = identity(1);
    return s;
  }
  if (m.rows() == 2) return eig_2x2(m, degeneracy_tol);
  return eig_dense(m, degeneracy_tol);
}

HermitianSpectrum eig_hermitian(const ComplexMatrix& m) {
  require_square(m, "eig_hermitian");
  HermitianSpectrum out;
  if (m.rows() == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double half_tr = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(b));
    const double det = a * d - std::norm(b);
    double hi = half_tr + radius, lo = half_tr - radius;
    // Recover whichever eigenvalue suffers cancellation from the determinant.
    if (half_tr > 0.0 && hi != 0.0) lo = det / hi;
    else if (half_tr < 0.0 && lo != 0.0) hi = det / lo;

    out.eigenvalues.resize(2);
    out.eigenvalues << lo, hi;
    out.vectors.resize(2, 2);
    if (radius == 0.0) {
      out.vectors = identity(2);
      return out;
    }
    // Eigenvector of the eigenvalue farther from each diagonal entry is
    // taken from the row with the larger pivot.
    ComplexVector v(2);
    if (a >= d) v << hi - d, std::conj(b);
    else v << b, hi - a;
    v /= v.norm();
    ComplexVector w(2);
    w << -std::conj(v(1)), std::conj(v(0));
    out.vectors.col(0) = w;
    out.vectors.col(1) = v;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  out.eigenvalues = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

ComplexMatrix null_space(const ComplexMatrix& m, double tol) {
  require_square(m, "null_space");
  const Eigen::Index n = m.cols();
  const double scale = norm(m);
  if (scale == 0.0) return identity(n);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double sv = k < s.size() ? s(k) : 0.0;
    if (sv <= tol * scale) keep.push_back(k);
  }
  ComplexMatrix basis(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    basis.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(keep[k]);
  }
  return basis;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace pauli {
ComplexMatrix identity() { return nhqfi::identity(2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
ComplexMatrix minus() {
  ComplexMatrix m(2, 2);
  m << 0, 0, 1, 0;
  return m;
}
ComplexMatrix plus() { return minus().adjoint(); }
}  // namespace pauli

ComplexMatrix read_matrix_text(std::istream& in) {
  long long dim = 0;
  if (!(in >> dim) || dim < 1 || dim > 64) {
    throw Error(ErrorKind::invalid_input, "matrix text: expected a positive dimension on the first line");
  }
  ComplexMatrix m(dim, dim);
  for (long long i = 0; i < dim; ++i) {
    for (long long j = 0; j < dim; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        throw Error(ErrorKind::invalid_input, "matrix text: expected " + std::to_string(dim * dim) + " 're im' lines");
      }
      m(i, j) = Complex(re, im);
    }
  }
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "matrix text: non-finite entry");
  return m;
}

void write_matrix_text(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
}

}  // namespace nhqfi
