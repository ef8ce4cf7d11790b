#pragma once

// Dense complex linear algebra for 2x2 system matrices and 4x4
// superoperators. All functions are pure; tolerances are explicit
// arguments with the library defaults.

#include <complex>
#include <iosfwd>

#include <Eigen/Dense>

namespace nhqfi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Eigen-decomposition of a general square matrix.
///
/// `right` holds unit-norm right eigenvectors as columns. When the spectrum
/// is simple, `left` holds the dual basis (eigenvectors of M^dagger for the
/// conjugate eigenvalues) scaled so that left(:,m)^dagger right(:,n) = delta_mn.
/// For a defective matrix (coalesced eigenvalues with a single eigenvector,
/// e.g. an exceptional point) `defective` is set, the coalesced right
/// columns repeat the same vector and `left` is only unit-normalized.
struct Spectrum {
  ComplexVector eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;
  bool defective = false;
};

/// Frobenius norm; used as ||M|| throughout the library.
double norm(const ComplexMatrix& m);

ComplexMatrix identity(Eigen::Index dim);

/// (M + M^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// max_ij |M - M^dagger|_ij.
double hermiticity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);
bool is_positive_definite(const ComplexMatrix& m, double tol = 1e-12);
bool all_finite(const ComplexMatrix& m);

ComplexMatrix mat_exp(const ComplexMatrix& m, double cond_limit = 1e6);
ComplexMatrix mat_sqrt_pd(const ComplexMatrix& m, double tol = 1e-12);
ComplexMatrix mat_inv(const ComplexMatrix& m, double singular_tol = 1e-14);

/// Eigenvalues within `degeneracy_tol * ||M||` count as coalesced.
Spectrum eig_general(const ComplexMatrix& m, double degeneracy_tol = 1e-10);

/// Eigen-decomposition of a Hermitian matrix, ascending eigenvalues.
/// The 2x2 path obtains the small eigenvalue as det / large eigenvalue,
/// which keeps full relative precision for nearly pure states.
struct HermitianSpectrum {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix vectors;
};
HermitianSpectrum eig_hermitian(const ComplexMatrix& m);

/// Orthonormal basis (as columns) of { v : ||M v|| <= tol * ||M|| }.
ComplexMatrix null_space(const ComplexMatrix& m, double tol);

/// Kronecker product, used for row-major vectorized superoperators.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

Complex trace(const ComplexMatrix& m);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// |1><0|: lowers the excited level (index 0) to the ground level (index 1).
ComplexMatrix minus();
ComplexMatrix plus();
}  // namespace pauli

/// Matrix text format: first line "dim", then dim^2 lines "re im", row-major.
ComplexMatrix read_matrix_text(std::istream& in);
void write_matrix_text(std::ostream& out, const ComplexMatrix& m);

}  // namespace nhqfi
