#pragma once

// Pure-state LOCC: majorization decisions, Nielsen protocol synthesis,
// SLOCC filters, one-shot entanglement and multi-round protocol handling.

#include <optional>
#include <string>
#include <vector>

#include "entlab/quantum.hpp"
#include "entlab/spectra.hpp"

namespace entlab {

// ---------------------------------------------------------------------------
// Majorization machinery

/// b -> (1 - w) b + w * (b with entries j, k swapped), j < k.
struct TTransform {
  std::size_t j = 0;
  std::size_t k = 0;
  double weight = 0.0;
};

/// Hardy-Littlewood-Polya chain taking `from` to `to` (both sorted
/// non-increasing, zero padded to the same length), with `from` majorizing
/// `to`. At most n - 1 transforms.
std::vector<TTransform> t_transform_chain(std::span<const double> from,
                                          std::span<const double> to);
/// Product of the chain as an n x n doubly stochastic matrix D, to = D from.
Eigen::MatrixXd chain_matrix(const std::vector<TTransform>& chain, std::size_t n);

struct BirkhoffTerm {
  double weight = 0.0;
  std::vector<std::size_t> perm;  // row i -> column perm[i]
};

/// Greedy Birkhoff-von Neumann decomposition: each step takes the
/// permutation with the largest bottleneck weight on the remaining positive
/// support (lexicographically smallest among ties).
std::vector<BirkhoffTerm> birkhoff_decomposition(const Eigen::MatrixXd& d,
                                                 double zero_tol = 1e-13);

// ---------------------------------------------------------------------------
// Decisions and synthesis

/// psi -> phi by exact LOCC iff phi's Schmidt spectrum majorizes psi's.
bool locc_feasible(const PureBipartiteState& psi, const PureBipartiteState& phi);

/// rho_psi = sum_x p_x u_x rho_phi u_x^*. The u_x are d_psi x d_phi partial
/// isometries (unitaries when the dimensions agree).
struct MixingDecomposition {
  std::vector<double> weights;
  std::vector<Matrix> unitaries;
};

MixingDecomposition mixing_decomposition(const DensityMatrix& rho_psi,
                                         const DensityMatrix& rho_phi);

/// Alice measures {k_x}, Bob applies u'_x on outcome x.
struct OneWayProtocol {
  std::vector<Matrix> alice_kraus;
  std::vector<Matrix> bob_unitaries;
  std::vector<std::string> labels;  // optional, one per branch when present
};

/// One-way protocol taking psi to phi on every branch. Kraus operators are
/// built from the mixing decomposition as
///   k_x = sqrt(p_x) rho_phi^{1/2} u_x^* rho_psi^{-1/2}.
/// Throws infeasible when phi does not majorize psi and numerical_failure on
/// an ill-conditioned support.
OneWayProtocol nielsen_synthesize(const PureBipartiteState& psi,
                                  const PureBipartiteState& phi);

struct VerifyReport {
  std::vector<double> probabilities;
  std::vector<double> overlaps;  // |<phi|branch>| / sqrt(p_x)
  double completeness_residual = 0.0;  // ||sum k^*k - supp(rho_psi)||_op
  double probability_sum = 0.0;
  double min_overlap = 1.0;
  bool pass = false;
};

struct VerifyTolerances {
  double completeness = 1e-9;
  double overlap = 1e-8;
  double probability = 1e-9;
};

VerifyReport verify_protocol(const OneWayProtocol& p, const PureBipartiteState& psi,
                             const PureBipartiteState& phi,
                             const VerifyTolerances& tol = {});

struct SloccResult {
  bool feasible = false;
  std::optional<LocalIsometryPair> filter;
  double success_prob = 0.0;
};

/// Canonical SLOCC filter: Alice applies
/// frame change * diag(sqrt(phi_i / psi_i)) / sqrt(max_i phi_i / psi_i),
/// Bob a partial isometry between the Schmidt frames.
SloccResult slocc(const PureBipartiteState& psi, const PureBipartiteState& phi);

struct OneShot {
  std::size_t n_max = 1;
  double ebits = 0.0;
};

/// Largest n such that a maximally entangled state of Schmidt rank n can be
/// distilled: floor(min_k k / S_k) with S_k the top-k Schmidt sums.
OneShot one_shot_entanglement(const PureBipartiteState& psi);
OneShot one_shot_entanglement(const Spectrum& s);

/// psi (x) phi1 -> psi (x) phi2 by exact LOCC.
bool locc_embezzle_feasible(const PureBipartiteState& psi,
                            const PureBipartiteState& phi1,
                            const PureBipartiteState& phi2);

// ---------------------------------------------------------------------------
// Multi-round protocols

/// Kraus-rank-one instrument. Subnormalized families are allowed.
struct Instrument {
  std::vector<Matrix> kraus;
  std::vector<std::string> labels;
};

/// Adds the complement outcome sqrt(1 - sum k^*k) (label "~") when the
/// family is subnormalized by more than 1e-12. Throws invalid_input when the
/// family is not subnormalized.
Instrument complete_instrument(const Instrument& inst);

/// One round: the acting party and an instrument per message history.
/// History keys are outcome labels joined by "/"; the root is "" and "*"
/// matches any history without its own entry. A history with no matching
/// entry skips the round.
struct Round {
  Party party = Party::A;
  std::vector<std::pair<std::string, Instrument>> branches;

  const Instrument* find(const std::string& history) const;
};

struct LoccProtocol {
  std::vector<Round> rounds;
};

inline constexpr std::size_t kDefaultDepthCap = 16;

struct Leaf {
  std::vector<std::string> history;
  double probability = 0.0;
  int dim_A = 0;
  int dim_B = 0;
  Vector state;  // normalized, or zero when probability vanishes
};

std::string join_history(const std::vector<std::string>& history);

/// Exact breadth-first expansion of the branch tree.
std::vector<Leaf> simulate(const LoccProtocol& p, const PureBipartiteState& psi,
                           std::size_t depth_cap = kDefaultDepthCap);
std::vector<Leaf> simulate(const OneWayProtocol& p, const PureBipartiteState& psi);

/// Equivalent one-way protocol with the same leaves in the same order.
/// Bob's operations are mirrored onto Alice through the state's frame:
/// for a Bob outcome with A-marginal sigma_c, Alice measures
/// sigma_c^{1/2} rho^{-1/2}, and Bob's partial isometry is recovered by
/// connect_coefficients at the leaf.
OneWayProtocol one_way_reduce(const LoccProtocol& p, const PureBipartiteState& psi,
                              std::size_t depth_cap = kDefaultDepthCap);

}  // namespace entlab
