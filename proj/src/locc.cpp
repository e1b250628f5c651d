#include "entlab/locc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "entlab/error.hpp"

namespace entlab {

namespace {

constexpr double kChainTol = 1e-14;

// Kuhn's augmenting-path matching on {(i, j) : allowed(i, j)} restricted to
// rows/cols not yet fixed.
class Matcher {
 public:
  Matcher(const Eigen::MatrixXd& m, double threshold, const std::vector<bool>& row_used,
          const std::vector<bool>& col_used)
      : m_(m), thr_(threshold), row_used_(row_used), col_used_(col_used),
        match_col_(static_cast<std::size_t>(m.cols()), -1) {}

  bool perfect() {
    const auto n = static_cast<std::size_t>(m_.rows());
    for (std::size_t i = 0; i < n; ++i) {
      if (row_used_[i]) continue;
      seen_.assign(n, false);
      if (!augment(i)) return false;
    }
    return true;
  }

 private:
  bool augment(std::size_t i) {
    const auto n = static_cast<std::size_t>(m_.cols());
    for (std::size_t j = 0; j < n; ++j) {
      if (col_used_[j] || seen_[j]) continue;
      if (m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < thr_) continue;
      seen_[j] = true;
      if (match_col_[j] < 0 || augment(static_cast<std::size_t>(match_col_[j]))) {
        match_col_[j] = static_cast<long>(i);
        return true;
      }
    }
    return false;
  }

  const Eigen::MatrixXd& m_;
  double thr_;
  const std::vector<bool>& row_used_;
  const std::vector<bool>& col_used_;
  std::vector<long> match_col_;
  std::vector<bool> seen_;
};

bool has_perfect_matching(const Eigen::MatrixXd& m, double threshold,
                          const std::vector<bool>& row_used,
                          const std::vector<bool>& col_used) {
  return Matcher(m, threshold, row_used, col_used).perfect();
}

// Lexicographically smallest permutation with every entry >= threshold.
std::vector<std::size_t> lex_smallest_permutation(const Eigen::MatrixXd& m, double threshold) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<bool> row_used(n, false);
  std::vector<bool> col_used(n, false);
  std::vector<std::size_t> perm(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    row_used[i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (col_used[j]) continue;
      if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < threshold) continue;
      col_used[j] = true;
      if (has_perfect_matching(m, threshold, row_used, col_used)) {
        perm[i] = j;
        break;
      }
      col_used[j] = false;
    }
  }
  return perm;
}

// Full eigen-frame of a bipartite marginal from the SVD of the coefficient
// matrix. Values are squared singular values, zero padded to the full dim.
struct Frame {
  Matrix basis;
  std::vector<double> values;
};

Frame marginal_frame(const Matrix& coeffs) {
  Eigen::JacobiSVD<Matrix> svd(coeffs, Eigen::ComputeFullU);
  Frame f{svd.matrixU(), std::vector<double>(static_cast<std::size_t>(coeffs.rows()), 0.0)};
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    f.values[static_cast<std::size_t>(i)] = s * s;
  }
  return f;
}

// Mixing decomposition between two eigen-frames; `a` is majorized by `b`.
MixingDecomposition mix_frames(const Frame& psi, const Frame& phi) {
  const std::size_t n = std::max(psi.values.size(), phi.values.size());
  std::vector<double> a(n, 0.0);
  std::vector<double> b(n, 0.0);
  std::copy(psi.values.begin(), psi.values.end(), a.begin());
  std::copy(phi.values.begin(), phi.values.end(), b.begin());
  if (!majorizes(Spectrum(b), Spectrum(a))) {
    fail(ErrorKind::infeasible, "target spectrum does not majorize the source");
  }

  const auto chain = t_transform_chain(b, a);
  const auto terms = birkhoff_decomposition(chain_matrix(chain, n));

  const auto n_psi = static_cast<std::size_t>(psi.basis.cols());
  const auto n_phi = static_cast<std::size_t>(phi.basis.cols());
  MixingDecomposition out;
  for (const auto& term : terms) {
    Matrix u = Matrix::Zero(psi.basis.rows(), phi.basis.rows());
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = term.perm[i];
      if (i >= n_psi || j >= n_phi) continue;
      u += psi.basis.col(static_cast<Eigen::Index>(i)) *
           phi.basis.col(static_cast<Eigen::Index>(j)).adjoint();
    }
    out.weights.push_back(term.weight);
    out.unitaries.push_back(std::move(u));
  }
  return out;
}

Frame density_frame(const DensityMatrix& rho) {
  const SortedEigen e = sorted_eigen(rho.matrix());
  Frame f{e.vectors, {}};
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    f.values.push_back(std::max(e.values(i), 0.0));
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// T-transforms and Birkhoff

std::vector<TTransform> t_transform_chain(std::span<const double> from,
                                          std::span<const double> to) {
  if (from.size() != to.size()) {
    fail(ErrorKind::invalid_input, "T-transform chain needs equal lengths");
  }
  const std::size_t n = from.size();
  std::vector<double> x(from.begin(), from.end());
  std::vector<TTransform> chain;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t j = n;
    for (std::size_t i = n; i-- > 0;) {
      if (x[i] > to[i] + kChainTol) {
        j = i;
        break;
      }
    }
    if (j == n) break;
    std::size_t k = n;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (x[i] < to[i] - kChainTol) {
        k = i;
        break;
      }
    }
    if (k == n) break;
    const double delta = std::min(x[j] - to[j], to[k] - x[k]);
    const double gap = x[j] - x[k];
    chain.push_back({j, k, delta / gap});
    if (x[j] - to[j] <= to[k] - x[k]) {
      x[k] += x[j] - to[j];
      x[j] = to[j];
    } else {
      x[j] -= to[k] - x[k];
      x[k] = to[k];
    }
  }
  return chain;
}

Eigen::MatrixXd chain_matrix(const std::vector<TTransform>& chain, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& t : chain) {
    const auto j = static_cast<Eigen::Index>(t.j);
    const auto k = static_cast<Eigen::Index>(t.k);
    // rows j and k of T d: (1-w) row + w * swapped row
    const Eigen::RowVectorXd rj = d.row(j);
    const Eigen::RowVectorXd rk = d.row(k);
    d.row(j) = (1.0 - t.weight) * rj + t.weight * rk;
    d.row(k) = (1.0 - t.weight) * rk + t.weight * rj;
  }
  return d;
}

std::vector<BirkhoffTerm> birkhoff_decomposition(const Eigen::MatrixXd& d, double zero_tol) {
  if (d.rows() != d.cols()) {
    fail(ErrorKind::invalid_input, "Birkhoff decomposition needs a square matrix");
  }
  const auto n = static_cast<std::size_t>(d.rows());
  Eigen::MatrixXd r = d;
  r = r.unaryExpr([zero_tol](double x) { return x > zero_tol ? x : 0.0; });

  std::vector<BirkhoffTerm> terms;
  double total = 0.0;
  const std::vector<bool> none(n, false);
  const std::size_t max_terms = (n > 0 ? (n - 1) * (n - 1) + 1 : 0) + n;  // slack for roundoff
  while (terms.size() < max_terms && total < 1.0 - 1e-15) {
    std::vector<double> vals;
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (r.data()[i] > 0.0) vals.push_back(r.data()[i]);
    if (vals.empty()) break;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (!has_perfect_matching(r, vals.front(), none, none)) break;

    // Largest threshold admitting a perfect matching.
    std::size_t lo = 0;
    std::size_t hi = vals.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (has_perfect_matching(r, vals[mid], none, none)) lo = mid;
      else hi = mid - 1;
    }
    const double threshold = vals[lo];
    BirkhoffTerm term;
    term.perm = lex_smallest_permutation(r, threshold);
    term.weight = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      term.weight = std::min(term.weight, r(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(term.perm[i])));
    }
    for (std::size_t i = 0; i < n; ++i) {
      double& x = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(term.perm[i]));
      x -= term.weight;
      if (x <= zero_tol) x = 0.0;
    }
    total += term.weight;
    terms.push_back(std::move(term));
  }
  // Roundoff leaves the weights a hair away from summing to one.
  if (total > 0.0) {
    for (auto& t : terms) t.weight /= total;
  }
  return terms;
}

// ---------------------------------------------------------------------------
// Decisions

bool locc_feasible(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  return majorizes(schmidt_spectrum(phi), schmidt_spectrum(psi));
}

MixingDecomposition mixing_decomposition(const DensityMatrix& rho_psi,
                                         const DensityMatrix& rho_phi) {
  return mix_frames(density_frame(rho_psi), density_frame(rho_phi));
}

OneWayProtocol nielsen_synthesize(const PureBipartiteState& psi,
                                  const PureBipartiteState& phi) {
  if (!locc_feasible(psi, phi)) {
    fail(ErrorKind::infeasible, "target does not majorize source; no LOCC protocol");
  }
  const Matrix c_psi = psi.coefficients();
  const Matrix c_phi = phi.coefficients();
  Frame f_psi = marginal_frame(c_psi);
  Frame f_phi = marginal_frame(c_phi);

  // Support of rho_psi: drop eigenvalues below 1e-12 * largest.
  const double top = f_psi.values.front();
  double dropped = 0.0;
  double smallest_kept = top;
  for (double& a : f_psi.values) {
    if (a <= 1e-12 * top) {
      dropped += a;
      a = 0.0;
    } else {
      smallest_kept = std::min(smallest_kept, a);
    }
  }
  if (smallest_kept < 1e-12) {
    fail(ErrorKind::numerical_failure, "ill-conditioned support in source marginal");
  }
  for (double& b : f_phi.values) b = std::max(b, 0.0);

  const MixingDecomposition mix = mix_frames(f_psi, f_phi);

  RealVector inv_sqrt_a(static_cast<Eigen::Index>(f_psi.values.size()));
  for (std::size_t i = 0; i < f_psi.values.size(); ++i) {
    const double a = f_psi.values[i];
    inv_sqrt_a(static_cast<Eigen::Index>(i)) = a > 0.0 ? 1.0 / std::sqrt(a) : 0.0;
  }
  RealVector sqrt_b(static_cast<Eigen::Index>(f_phi.values.size()));
  for (std::size_t i = 0; i < f_phi.values.size(); ++i) {
    sqrt_b(static_cast<Eigen::Index>(i)) = std::sqrt(f_phi.values[i]);
  }
  const Matrix rho_psi_inv_sqrt = f_psi.basis * inv_sqrt_a.asDiagonal() * f_psi.basis.adjoint();
  const Matrix rho_phi_sqrt = f_phi.basis * sqrt_b.asDiagonal() * f_phi.basis.adjoint();

  OneWayProtocol out;
  double captured = 0.0;
  for (std::size_t x = 0; x < mix.weights.size(); ++x) {
    const double p = mix.weights[x];
    Matrix k = std::sqrt(p) * rho_phi_sqrt * mix.unitaries[x].adjoint() * rho_psi_inv_sqrt;
    const Matrix branch = k * c_psi;
    captured += branch.squaredNorm();
    Matrix v = connect_coefficients(std::sqrt(p) * c_phi, branch, 1e-8);
    out.alice_kraus.push_back(std::move(k));
    out.bob_unitaries.push_back(std::move(v));
  }
  if (std::abs(captured - 1.0) > 1e-8 || dropped > 1e-8) {
    fail(ErrorKind::numerical_failure,
         "Kraus family leaks probability mass: " + std::to_string(1.0 - captured));
  }
  return out;
}

VerifyReport verify_protocol(const OneWayProtocol& p, const PureBipartiteState& psi,
                             const PureBipartiteState& phi, const VerifyTolerances& tol) {
  if (p.alice_kraus.size() != p.bob_unitaries.size()) {
    fail(ErrorKind::invalid_input, "Kraus and correction counts differ");
  }
  VerifyReport rep;
  const Matrix rho_psi = marginal(psi, Party::A).matrix();
  Matrix completeness = Matrix::Zero(psi.dim_A(), psi.dim_A());
  for (std::size_t x = 0; x < p.alice_kraus.size(); ++x) {
    const Matrix& k = p.alice_kraus[x];
    const Matrix& v = p.bob_unitaries[x];
    if (k.cols() != psi.dim_A() || k.rows() != phi.dim_A() || v.cols() != psi.dim_B() ||
        v.rows() != phi.dim_B()) {
      fail(ErrorKind::invalid_input, "protocol operators do not match the state shapes");
    }
    completeness += k.adjoint() * k;
    const Vector branch = apply_local(k, v, psi.amplitudes(), psi.dim_A(), psi.dim_B());
    const double prob = branch.squaredNorm();
    rep.probabilities.push_back(prob);
    rep.probability_sum += prob;
    // Zero-probability branches carry no state; they count as aligned.
    const double ov = prob > 0.0 ? std::abs(phi.amplitudes().dot(branch)) / std::sqrt(prob) : 1.0;
    rep.overlaps.push_back(ov);
    rep.min_overlap = std::min(rep.min_overlap, ov);
  }
  rep.completeness_residual = operator_norm(completeness - support_projection(rho_psi));
  rep.pass = rep.completeness_residual <= tol.completeness &&
             std::abs(rep.probability_sum - 1.0) <= tol.probability &&
             rep.min_overlap >= 1.0 - tol.overlap;
  return rep;
}

SloccResult slocc(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  const SchmidtDecomposition s = schmidt(psi);
  const SchmidtDecomposition t = schmidt(phi);
  SloccResult out;
  if (t.rank() > s.rank()) return out;

  const std::size_t r = t.rank();
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    max_ratio = std::max(max_ratio, t.spectrum[i] / s.spectrum[i]);
  }
  Matrix a = Matrix::Zero(phi.dim_A(), psi.dim_A());
  Matrix b = Matrix::Zero(phi.dim_B(), psi.dim_B());
  for (std::size_t i = 0; i < r; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double g = std::sqrt(t.spectrum[i] / s.spectrum[i] / max_ratio);
    a += g * t.basis_A.col(k) * s.basis_A.col(k).adjoint();
    b += t.basis_B.col(k) * s.basis_B.col(k).adjoint();
  }
  out.feasible = true;
  out.success_prob = 1.0 / max_ratio;
  out.filter = LocalIsometryPair{std::move(a), std::move(b)};
  return out;
}

OneShot one_shot_entanglement(const Spectrum& s) {
  double best = std::numeric_limits<double>::infinity();
  double partial = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    partial += s[k];
    best = std::min(best, static_cast<double>(k + 1) / partial);
  }
  OneShot out;
  // Slack so exact integers computed in floating point do not round down.
  out.n_max = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(best + 1e-9)));
  out.ebits = std::log2(static_cast<double>(out.n_max));
  return out;
}

OneShot one_shot_entanglement(const PureBipartiteState& psi) {
  return one_shot_entanglement(schmidt_spectrum(psi));
}

bool locc_embezzle_feasible(const PureBipartiteState& psi, const PureBipartiteState& phi1,
                            const PureBipartiteState& phi2) {
  const Spectrum s = schmidt_spectrum(psi);
  return majorizes(tensor_spectrum(s, schmidt_spectrum(phi2)),
                   tensor_spectrum(s, schmidt_spectrum(phi1)));
}

}  // namespace entlab
