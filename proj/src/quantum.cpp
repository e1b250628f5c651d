#include "entlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entlab/error.hpp"

namespace entlab {

namespace {

double hermitian_trace_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

void require_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    fail(ErrorKind::invalid_input,
         "dimension mismatch: " + std::to_string(rho.dim()) + " vs " +
             std::to_string(sigma.dim()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorKind::invalid_input, "density matrix must be square and nonempty");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
    fail(ErrorKind::invalid_input, "density matrix is not Hermitian");
  }
  const SortedEigen e = sorted_eigen(m);
  RealVector ev = e.values;
  bool clipped = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) {
      fail(ErrorKind::invalid_input, "density matrix is not positive semidefinite");
    }
    if (ev(i) < 0.0) {
      ev(i) = 0.0;
      clipped = true;
    }
  }
  const double tr = ev.sum();
  if (std::abs(tr - 1.0) > tol) {
    fail(ErrorKind::invalid_input, "density matrix trace is not 1");
  }
  if (clipped) {
    m_ = e.vectors * (ev / tr).asDiagonal() * e.vectors.adjoint();
  } else {
    m_ = 0.5 * (m + m.adjoint());
  }
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(probs.size()),
                          static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probs[i];
  }
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) fail(ErrorKind::invalid_input, "zero vector");
  const Vector u = v / n;
  return DensityMatrix(u * u.adjoint());
}

// ---------------------------------------------------------------------------
// PureBipartiteState

PureBipartiteState::PureBipartiteState(int d_A, int d_B, Vector amplitudes, double tol)
    : d_A_(d_A), d_B_(d_B), amps_(std::move(amplitudes)) {
  if (d_A < 1 || d_B < 1) fail(ErrorKind::invalid_input, "dims must be positive");
  if (amps_.size() != static_cast<Eigen::Index>(d_A) * d_B) {
    fail(ErrorKind::invalid_input, "amplitude count does not match dims");
  }
  if (std::abs(amps_.norm() - 1.0) > tol) {
    fail(ErrorKind::invalid_input, "bipartite state is not a unit vector");
  }
}

PureBipartiteState PureBipartiteState::normalized(int d_A, int d_B, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) fail(ErrorKind::invalid_input, "zero vector");
  return PureBipartiteState(d_A, d_B, amplitudes / n);
}

PureBipartiteState PureBipartiteState::from_schmidt(std::span<const double> coeffs) {
  const int d = static_cast<int>(coeffs.size());
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = coeffs[static_cast<std::size_t>(i)];
  return normalized(d, d, std::move(v));
}

PureBipartiteState PureBipartiteState::product(int d_A, int d_B, int i, int j) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d_A) * d_B);
  v(i * d_B + j) = 1.0;
  return PureBipartiteState(d_A, d_B, std::move(v));
}

PureBipartiteState PureBipartiteState::maximally_entangled(int n) {
  return from_schmidt(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

Matrix PureBipartiteState::coefficients() const {
  return to_coefficients(amps_, d_A_, d_B_);
}

Matrix to_coefficients(const Vector& v, int d_A, int d_B) {
  Matrix c(d_A, d_B);
  for (int i = 0; i < d_A; ++i)
    for (int j = 0; j < d_B; ++j) c(i, j) = v(i * d_B + j);
  return c;
}

Vector from_coefficients(const Matrix& c) {
  Vector v(c.size());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) v(i * c.cols() + j) = c(i, j);
  return v;
}

Vector apply_local(const Matrix& op_A, const Matrix& op_B, const Vector& v,
                   int d_A, int d_B) {
  if (op_A.cols() != d_A || op_B.cols() != d_B) {
    fail(ErrorKind::invalid_input, "local operator does not match state dims");
  }
  return from_coefficients(op_A * to_coefficients(v, d_A, d_B) * op_B.transpose());
}

PureBipartiteState tensor(const PureBipartiteState& x, const PureBipartiteState& y) {
  const int dA = x.dim_A() * y.dim_A();
  const int dB = x.dim_B() * y.dim_B();
  // C[(a1,a2),(b1,b2)] = Cx[a1,b1] * Cy[a2,b2]
  const Matrix cx = x.coefficients();
  const Matrix cy = y.coefficients();
  Matrix c(dA, dB);
  for (int a1 = 0; a1 < x.dim_A(); ++a1)
    for (int b1 = 0; b1 < x.dim_B(); ++b1)
      c.block(a1 * y.dim_A(), b1 * y.dim_B(), y.dim_A(), y.dim_B()) = cx(a1, b1) * cy;
  return PureBipartiteState::normalized(dA, dB, from_coefficients(c));
}

// ---------------------------------------------------------------------------
// Schmidt decomposition and marginals

Vector SchmidtDecomposition::reconstruct() const {
  Matrix c = Matrix::Zero(basis_A.rows(), basis_B.rows());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    c += coefficients[i] * basis_A.col(k) * basis_B.col(k).transpose();
  }
  return from_coefficients(c);
}

SchmidtDecomposition schmidt(const PureBipartiteState& psi) {
  const Matrix c = psi.coefficients();
  if (c.norm() == 0.0) fail(ErrorKind::invalid_input, "zero vector");
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > kSchmidtCut) ++r;

  SchmidtDecomposition out;
  std::vector<double> sq;
  for (Eigen::Index i = 0; i < r; ++i) {
    out.coefficients.push_back(s(i));
    sq.push_back(s(i) * s(i));
  }
  out.spectrum = Spectrum(std::move(sq));
  out.basis_A = svd.matrixU().leftCols(r);
  // C = sum s_i u_i v_i^*  <=>  psi = sum s_i u_i (x) conj(v_i)
  out.basis_B = svd.matrixV().leftCols(r).conjugate();
  return out;
}

Spectrum schmidt_spectrum(const PureBipartiteState& psi) {
  return schmidt(psi).spectrum;
}

DensityMatrix marginal(const PureBipartiteState& psi, Party party) {
  const Matrix c = psi.coefficients();
  if (party == Party::A) return DensityMatrix(c * c.adjoint());
  // rho_B[j, j'] = sum_i C[i, j] conj(C[i, j'])
  return DensityMatrix(c.transpose() * c.conjugate());
}

Spectrum spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double x = solver.eigenvalues()(i);
    ev.push_back(x > 1e-14 ? x : 0.0);
  }
  return Spectrum(std::move(ev));
}

// ---------------------------------------------------------------------------
// Distances

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  return hermitian_trace_norm(rho.matrix() - sigma.matrix());
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const Matrix x = sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix());
  const double f = trace_norm(x);
  return std::clamp(f * f, 0.0, 1.0);
}

double overlap_squared(const Vector& psi, const Vector& phi) {
  return std::norm(psi.dot(phi));
}

double lu_orbit_fidelity(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  const SchmidtDecomposition a = schmidt(psi);
  const SchmidtDecomposition b = schmidt(phi);
  const std::size_t n = std::min(a.rank(), b.rank());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a.coefficients[i] * b.coefficients[i];
  return std::clamp(acc * acc, 0.0, 1.0);
}

std::pair<Matrix, Matrix> lu_aligning_unitaries(const PureBipartiteState& psi,
                                                const PureBipartiteState& phi) {
  Eigen::JacobiSVD<Matrix> sp(psi.coefficients(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::JacobiSVD<Matrix> sf(phi.coefficients(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index nA = std::min(psi.dim_A(), phi.dim_A());
  const Eigen::Index nB = std::min(psi.dim_B(), phi.dim_B());
  Matrix uA = sp.matrixU().leftCols(nA) * sf.matrixU().leftCols(nA).adjoint();
  Matrix uB = (sp.matrixV().leftCols(nB) * sf.matrixV().leftCols(nB).adjoint()).conjugate();
  return {std::move(uA), std::move(uB)};
}

Matrix align_unitary(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const SortedEigen v = sorted_eigen(rho.matrix());
  const SortedEigen w = sorted_eigen(sigma.matrix());
  return v.vectors * w.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// Purifications

Matrix connect_coefficients(const Matrix& c1, const Matrix& c2, double tol) {
  if (c1.rows() != c2.rows()) {
    fail(ErrorKind::no_connector, "A dimensions differ");
  }
  const Matrix r1 = c1 * c1.adjoint();
  const Matrix r2 = c2 * c2.adjoint();
  if (hermitian_trace_norm(r1 - r2) > tol) {
    fail(ErrorKind::no_connector, "A-marginals differ");
  }
  const Matrix w1 = polar_partial_isometry(c1);
  const Matrix w2 = polar_partial_isometry(c2);
  return (w2.adjoint() * w1).transpose();
}

LocalIsometryPair connect_purifications(const PureBipartiteState& phi1,
                                        const PureBipartiteState& phi2, double tol) {
  return {Matrix::Identity(phi1.dim_A(), phi1.dim_A()),
          connect_coefficients(phi1.coefficients(), phi2.coefficients(), tol)};
}

double coupling_constant(int d_A, int d_B) {
  if (d_A < 1 || d_B < 1) fail(ErrorKind::invalid_input, "dims must be positive");
  return static_cast<double>(d_A) / static_cast<double>(d_B);
}

PureBipartiteState purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  return PureBipartiteState::normalized(d, d, from_coefficients(sqrt_psd(rho.matrix())));
}

Matrix uhlmann_unitary(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  // <purify(rho)|(1 (x) u) purify(sigma)> = tr(sqrt(rho) sqrt(sigma) u^T)
  const Matrix x = sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix());
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return (svd.matrixV() * svd.matrixU().adjoint()).transpose();
}

PureBipartiteState random_state(int d_A, int d_B, std::mt19937_64& rng) {
  return PureBipartiteState::normalized(d_A, d_B, gaussian_vector(d_A * d_B, rng));
}

DensityMatrix random_density(int d, std::mt19937_64& rng) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) g.col(j) = gaussian_vector(d, rng);
  Matrix r = g * g.adjoint();
  r /= r.trace().real();
  return DensityMatrix(r);
}

}  // namespace entlab
