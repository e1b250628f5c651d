#pragma once

// Finite-dimensional states: density matrices, bipartite pure vectors,
// Schmidt decompositions, distances and the witnesses that attain them.
//
// Amplitude layout is A-index major: amplitude (i, j) lives at i * d_B + j,
// so the coefficient matrix of a vector is its row-major d_A x d_B reshape.
// With that convention (X (x) Y) psi corresponds to X * C * Y^T.

#include <cstdint>
#include <utility>
#include <vector>

#include "entlab/linalg.hpp"
#include "entlab/spectra.hpp"

namespace entlab {

enum class Party { A, B };

/// Hermitian PSD unit-trace matrix. Eigenvalues in [-1e-10, 0) are clipped
/// to zero and the matrix renormalized; anything more negative is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& m, double tol = 1e-10);

  static DensityMatrix diagonal(std::span<const double> probs);
  static DensityMatrix pure(const Vector& v);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Unit vector in C^{d_A} (x) C^{d_B}.
class PureBipartiteState {
 public:
  /// Validates unit norm within tol.
  PureBipartiteState(int d_A, int d_B, Vector amplitudes, double tol = 1e-10);
  /// Rescales a nonzero vector to unit norm.
  static PureBipartiteState normalized(int d_A, int d_B, Vector amplitudes);
  /// sum_i coeffs[i] |i>|i> in C^d (x) C^d with d = coeffs.size(), normalized.
  static PureBipartiteState from_schmidt(std::span<const double> coeffs);
  /// |i>|j>.
  static PureBipartiteState product(int d_A, int d_B, int i = 0, int j = 0);
  /// n^{-1/2} sum_i |i>|i>.
  static PureBipartiteState maximally_entangled(int n);

  int dim_A() const noexcept { return d_A_; }
  int dim_B() const noexcept { return d_B_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  /// d_A x d_B coefficient matrix.
  Matrix coefficients() const;

 private:
  int d_A_;
  int d_B_;
  Vector amps_;
};

/// Row-major reshape helpers for unnormalized bipartite vectors.
Matrix to_coefficients(const Vector& v, int d_A, int d_B);
Vector from_coefficients(const Matrix& c);

/// (op_A (x) op_B) applied to a vector of shape (d_A, d_B); op_A/op_B may be
/// rectangular (output x input).
Vector apply_local(const Matrix& op_A, const Matrix& op_B, const Vector& v,
                   int d_A, int d_B);

/// Tensor product with grouping (A1 A2) (x) (B1 B2).
PureBipartiteState tensor(const PureBipartiteState& x, const PureBipartiteState& y);

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // s_i > 0, non-increasing
  Spectrum spectrum;                 // s_i^2
  Matrix basis_A;                    // d_A x r, orthonormal columns a_i
  Matrix basis_B;                    // d_B x r, orthonormal columns b_i

  std::size_t rank() const noexcept { return coefficients.size(); }
  /// sum_i s_i a_i (x) b_i.
  Vector reconstruct() const;
};

/// Singular values below kSchmidtCut are treated as zero.
inline constexpr double kSchmidtCut = 1e-12;

SchmidtDecomposition schmidt(const PureBipartiteState& psi);
/// Squared Schmidt coefficients.
Spectrum schmidt_spectrum(const PureBipartiteState& psi);

DensityMatrix marginal(const PureBipartiteState& psi, Party party);
/// Eigenvalues, clipped at 1e-14 to drop roundoff.
Spectrum spectrum(const DensityMatrix& rho);

/// ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// ||rho^{1/2} sigma^{1/2}||_1^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// |<psi|phi>|^2.
double overlap_squared(const Vector& psi, const Vector& phi);

/// sup over local unitaries of |<psi|(u_A (x) u_B) phi>|^2, via the sorted
/// Schmidt coefficient inner product.
double lu_orbit_fidelity(const PureBipartiteState& psi, const PureBipartiteState& phi);
/// Local operators mapping phi's Schmidt frame onto psi's, sorted to sorted;
/// dims are (psi.d_A x phi.d_A, psi.d_B x phi.d_B).
std::pair<Matrix, Matrix> lu_aligning_unitaries(const PureBipartiteState& psi,
                                                const PureBipartiteState& phi);

/// u = V W* from descending-sorted eigenbases of rho (V) and sigma (W).
Matrix align_unitary(const DensityMatrix& rho, const DensityMatrix& sigma);

struct LocalIsometryPair {
  Matrix op_A;
  Matrix op_B;
};

/// Partial isometry v_B with (1 (x) v_B) phi2 = phi1, given equal
/// A-marginals. Built from the polar decompositions of the two coefficient
/// matrices: with C_k = rho^{1/2} W_k, v_B = (W_2^* W_1)^T. op_A is identity.
/// Throws no_connector when the A-marginals differ by more than tol.
LocalIsometryPair connect_purifications(const PureBipartiteState& phi1,
                                        const PureBipartiteState& phi2,
                                        double tol = 1e-8);
/// Unnormalized variant on coefficient matrices (d_A x d_B1 and d_A x d_B2);
/// returns the d_B1 x d_B2 connector.
Matrix connect_coefficients(const Matrix& c1, const Matrix& c2, double tol = 1e-8);

/// d_A / d_B.
double coupling_constant(int d_A, int d_B);

/// Standard purification (rho^{1/2} (x) 1) sum_i |i>|i>.
PureBipartiteState purify(const DensityMatrix& rho);
/// Unitary u on the purifying side with
/// |<purify(rho)|(1 (x) u) purify(sigma)>|^2 = fidelity(rho, sigma).
Matrix uhlmann_unitary(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Haar-random unit vector (normalized complex Gaussian).
PureBipartiteState random_state(int d_A, int d_B, std::mt19937_64& rng);
/// Random full-rank density matrix (Ginibre ensemble).
DensityMatrix random_density(int d, std::mt19937_64& rng);

}  // namespace entlab
