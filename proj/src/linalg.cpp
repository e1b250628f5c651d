#include "entlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace entlab {

SortedEigen sorted_eigen_impl(const Matrix& hermitian) {
  const Matrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const RealVector& ev = solver.eigenvalues();
  const Matrix& evec = solver.eigenvectors();
  const Eigen::Index n = ev.size();

  // Eigen returns ascending order; reverse while keeping the solver's order
  // inside exactly-degenerate clusters.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });

  SortedEigen out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = ev(src);
    Vector col = evec.col(src);
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(col(i));
      if (a > best + 1e-12) {
        best = a;
        pivot = i;
      }
    }
    if (best > 0.0) col *= std::conj(col(pivot)) / std::abs(col(pivot));
    out.vectors.col(j) = col;
  }
  return out;
}

Matrix sqrt_psd(const Matrix& p) {
  const SortedEigen e = sorted_eigen_impl(p);
  const double top = e.values.size() ? std::max(e.values(0), 0.0) : 0.0;
  // Eigenvalues at roundoff level are zero; their square roots would not be.
  const double cut = 4.0 * static_cast<double>(p.rows()) * std::numeric_limits<double>::epsilon() * top;
  RealVector r(e.values.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = e.values(i) > cut ? std::sqrt(e.values(i)) : 0.0;
  return e.vectors * r.asDiagonal() * e.vectors.adjoint();
}

Matrix pinv_sqrt_psd(const Matrix& p, double rel_cut) {
  const SortedEigen e = sorted_eigen_impl(p);
  const double top = e.values.size() ? std::max(e.values(0), 0.0) : 0.0;
  RealVector inv(e.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = (top > 0.0 && e.values(i) > rel_cut * top) ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  }
  return e.vectors * inv.asDiagonal() * e.vectors.adjoint();
}

Matrix support_projection(const Matrix& p, double rel_cut) {
  const SortedEigen e = sorted_eigen_impl(p);
  const double top = e.values.size() ? std::max(e.values(0), 0.0) : 0.0;
  RealVector ind(e.values.size());
  for (Eigen::Index i = 0; i < ind.size(); ++i) {
    ind(i) = (top > 0.0 && e.values(i) > rel_cut * top) ? 1.0 : 0.0;
  }
  return e.vectors * ind.asDiagonal() * e.vectors.adjoint();
}

Matrix polar_partial_isometry(const Matrix& m, double rel_cut) {
  if (m.size() == 0) return Matrix::Zero(m.rows(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && top > 0.0 && s(r) > rel_cut * top) ++r;
  return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
}

Vector gaussian_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

Matrix haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0.0) q.col(j) *= rjj / a;
  }
  return q;
}

Matrix haar_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(d, rng);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace entlab
