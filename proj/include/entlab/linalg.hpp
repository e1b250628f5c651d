#pragma once

// Small dense helpers shared by the quantum, locc and embezzle modules.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace entlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// non-increasing. Columns of `vectors` are phase-fixed so that their
/// largest-magnitude component (first on ties) is real positive.
struct SortedEigen {
  RealVector values;
  Matrix vectors;
};

template <typename Derived>
SortedEigen sorted_eigen(const Eigen::MatrixBase<Derived>& hermitian);

SortedEigen sorted_eigen_impl(const Matrix& hermitian);

template <typename Derived>
SortedEigen sorted_eigen(const Eigen::MatrixBase<Derived>& hermitian) {
  return sorted_eigen_impl(Matrix(hermitian));
}

/// f applied to the eigenvalues of a Hermitian matrix.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  const SortedEigen e = sorted_eigen_impl(h);
  RealVector fv = e.values.unaryExpr(std::forward<F>(f));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

/// Square root of a positive semidefinite matrix; eigenvalues at roundoff
/// level relative to the largest are treated as zero.
Matrix sqrt_psd(const Matrix& p);

/// Pseudo-inverse square root: eigenvalues below rel_cut * largest dropped.
Matrix pinv_sqrt_psd(const Matrix& p, double rel_cut = 1e-12);

/// Projection onto the span of eigenvectors with eigenvalue above
/// rel_cut * largest.
Matrix support_projection(const Matrix& p, double rel_cut = 1e-12);

/// Trace norm (sum of singular values).
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m) {
  return Eigen::JacobiSVD<Matrix>(Matrix(m)).singularValues().sum();
}

/// Spectral norm.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(Matrix(m)).singularValues()(0);
}

/// Unitary factor W of the polar decomposition m = W |m| restricted to the
/// support: W = U V* over the singular vectors with singular value above
/// rel_cut * largest. Result has the shape of m.
Matrix polar_partial_isometry(const Matrix& m, double rel_cut = 1e-12);

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre
/// matrix, with the R-diagonal phase fixed.
Matrix haar_unitary(int d, std::mt19937_64& rng);
Matrix haar_unitary(int d, std::uint64_t seed);

/// Standard complex Gaussian vector (unnormalized).
Vector gaussian_vector(int n, std::mt19937_64& rng);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace entlab
