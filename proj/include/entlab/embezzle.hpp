#pragma once

// Embezzling families, the lambda-family of ITPFI factors and the
// state-space diameter formulas.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entlab/quantum.hpp"
#include "entlab/spectra.hpp"

namespace entlab {

// ---------------------------------------------------------------------------
// van Dam-Hayden family

/// Schmidt coefficients c_n alpha^{-1/2}, alpha = 1..n, with
/// c_n = (sum_{alpha <= n} 1/alpha)^{-1/2}. Descending.
std::vector<double> vdh_coefficients(std::size_t n);
/// Squared coefficients.
Spectrum vdh_spectrum(std::size_t n);
/// Dense n x n vector sum_alpha c_n alpha^{-1/2} |alpha>|alpha>. Small n only.
PureBipartiteState vdh_state(std::size_t n);

struct VdhBound {
  double epsilon = 0.0;         // (2 log d / log n)^{1/2}
  double fidelity_bound = 1.0;  // (1 - log d / log n)^2 clipped to [0, 1]
};

/// Throws invalid_input for d < 1 or n < 2.
VdhBound vdh_bound(double d, std::size_t n);

struct EmbezzleReport {
  double fidelity = 0.0;
  double trace_error = 0.0;    // 2 sqrt(1 - F)
  double witness_error = 0.0;  // same quantity through the witness permutations
  double bound = 0.0;          // fidelity bound for the target's Schmidt rank
  bool meets_bound = false;    // sqrt(F) >= sqrt(bound)
  // Product Schmidt-index maps (alpha * d + i) from Psi_n (x) start to
  // Psi_n (x) target, pairing equal sorted ranks. Both sides act in their
  // own Schmidt frames with the same index map.
  std::vector<std::size_t> perm_A;
  std::vector<std::size_t> perm_B;
};

/// Best local-unitary overlap between Psi_n (x) start and Psi_n (x) target.
/// Works on the length n * d sorted coefficient lists; no dense vectors.
/// perm_A/perm_B are filled only when with_permutations is set.
EmbezzleReport embezzle_report(std::size_t n, const PureBipartiteState& start,
                               const PureBipartiteState& target,
                               bool with_permutations = true);

// ---------------------------------------------------------------------------
// lambda-family and type labels

/// Single-site spectrum (1/(1 + lambda), lambda/(1 + lambda)).
Spectrum lambda_site_spectrum(double lambda);

/// Spectral state of the m-fold tensor power of the lambda-family site:
/// atoms lambda^k / (1 + lambda)^m with Binomial(m, lambda/(1 + lambda))
/// masses. Requires 0 < lambda < 1 and m >= 1.
AtomicMeasure lambda_family_state(double lambda, std::size_t m);
/// flow_deviation(lambda_family_state(lambda, m), t).
double catalytic_deviation(double lambda, std::size_t m, double t);

struct TypeLabel {
  enum class Family { I, II_1, III_lambda, III_1 };
  Family family = Family::I;
  std::optional<double> lambda;  // set for III_lambda

  std::string name() const;
};

/// Type of the i.i.d. infinite tensor product with single-site spectrum s.
/// Log-ratios log(s_0/s_i) are divided by the smallest one and rationalized
/// by continued fractions (denominator <= 1e6, tolerance 1e-9); the gcd
/// generator g gives III_lambda with lambda = e^{-g}. III_0 is never
/// reported. Throws invalid_input on zero entries or a non-state.
TypeLabel classify_itpfi(std::span<const double> s);

/// 2(1 - sqrt(lambda)) / (1 + sqrt(lambda)) on [0, 1].
double kappa_max_formula(double lambda);
/// Same diameter from the minimal flow period T = -log lambda (T = inf gives 2).
double kappa_max_from_period(double period);

// ---------------------------------------------------------------------------
// Multipartite LU fidelity

/// Unit vector on C^{d_1} (x) ... (x) C^{d_N}, first party most significant.
struct MultipartiteState {
  std::vector<int> dims;
  Vector amplitudes;
};

MultipartiteState ghz_state(int parties, int d = 2);
MultipartiteState product_state(const std::vector<int>& dims);

struct LuFidelityTrace {
  double fidelity = 0.0;           // best over all starts
  std::vector<double> per_sweep;   // identity-start value after each sweep
};

/// Lower bound on sup |<psi|(u_1 (x) ... (x) u_N) phi>|^2 by alternating
/// polar updates, each sweep followed by an accepted-if-better extrapolation
/// of its step. Starts: identity plus min(iters, 8) seeded Haar restarts,
/// each run for iters sweeps; restart r depends only on (seed, r), so the
/// estimate is non-decreasing in iters.
LuFidelityTrace multipartite_lu_fidelity(const MultipartiteState& psi,
                                         const MultipartiteState& phi, int iters,
                                         std::uint64_t seed);

}  // namespace entlab
