#include "entlab/embezzle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "entlab/error.hpp"

namespace entlab {

namespace {

struct Ranked {
  std::vector<double> values;       // descending
  std::vector<std::size_t> index;   // product index of each ranked value
};

// Products c_alpha * s_i padded to d columns, sorted descending (stable on index).
Ranked ranked_products(const std::vector<double>& c, const std::vector<double>& s,
                       std::size_t d, bool keep_index) {
  const std::size_t total = c.size() * d;
  std::vector<double> prod(total, 0.0);
  for (std::size_t a = 0; a < c.size(); ++a) {
    for (std::size_t i = 0; i < s.size(); ++i) prod[a * d + i] = c[a] * s[i];
  }
  Ranked r;
  if (!keep_index) {
    std::sort(prod.begin(), prod.end(), std::greater<>());
    r.values = std::move(prod);
    return r;
  }
  r.index.resize(total);
  std::iota(r.index.begin(), r.index.end(), std::size_t{0});
  std::stable_sort(r.index.begin(), r.index.end(),
                   [&](std::size_t x, std::size_t y) { return prod[x] > prod[y]; });
  r.values.resize(total);
  for (std::size_t k = 0; k < total; ++k) r.values[k] = prod[r.index[k]];
  return r;
}

double log_binomial(std::size_t m, std::size_t k) {
  return std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(m - k) + 1.0);
}

void check_lambda_open(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    fail(ErrorKind::invalid_input, "lambda must lie in (0, 1)");
  }
}

// Best rational p/q with q <= max_den and |x - p/q| <= tol, via convergents.
std::optional<std::pair<long long, long long>> rationalize(double x, double tol,
                                                           long long max_den) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a_f = std::floor(r);
    if (a_f > 1e15) break;
    const auto a = static_cast<long long>(a_f);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) {
      return std::pair{p2, q2};
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - a_f;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

// Applies u to party k of a state vector.
Vector apply_party(const Vector& v, const std::vector<int>& dims, std::size_t k,
                   const Matrix& u) {
  long long pre = 1, post = 1;
  for (std::size_t j = 0; j < k; ++j) pre *= dims[j];
  for (std::size_t j = k + 1; j < dims.size(); ++j) post *= dims[j];
  const int d = dims[k];
  Vector out = Vector::Zero(v.size());
  for (long long p = 0; p < pre; ++p) {
    for (long long q = 0; q < post; ++q) {
      for (int a = 0; a < d; ++a) {
        cplx acc = 0.0;
        for (int b = 0; b < d; ++b) acc += u(a, b) * v((p * d + b) * post + q);
        out((p * d + a) * post + q) = acc;
      }
    }
  }
  return out;
}

// N[b, a] = sum over the other parties of phi'[.., b, ..] conj(psi[.., a, ..]),
// so that <psi|u_k phi'> = tr(u_k N).
Matrix effective_operator(const Vector& psi, const Vector& phi, const std::vector<int>& dims,
                          std::size_t k) {
  long long pre = 1, post = 1;
  for (std::size_t j = 0; j < k; ++j) pre *= dims[j];
  for (std::size_t j = k + 1; j < dims.size(); ++j) post *= dims[j];
  const int d = dims[k];
  Matrix n = Matrix::Zero(d, d);
  for (long long p = 0; p < pre; ++p) {
    for (long long q = 0; q < post; ++q) {
      for (int b = 0; b < d; ++b) {
        const cplx f = phi((p * d + b) * post + q);
        for (int a = 0; a < d; ++a) n(b, a) += f * std::conj(psi((p * d + a) * post + q));
      }
    }
  }
  return n;
}

Vector apply_all(const Vector& v, const std::vector<int>& dims, const std::vector<Matrix>& us) {
  Vector out = v;
  for (std::size_t k = 0; k < us.size(); ++k) out = apply_party(out, dims, k, us[k]);
  return out;
}

// Alternating ascent from the given start; returns the value after each sweep.
// (u v^*)^w u for unitaries u, v, through the Schur form of u v^*.
Matrix unitary_step(const Matrix& u, const Matrix& v, double w) {
  Eigen::ComplexSchur<Matrix> schur(u * v.adjoint());
  const Matrix& t = schur.matrixT();
  Vector phases(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) phases(i) = std::polar(1.0, w * std::arg(t(i, i)));
  return schur.matrixU() * phases.asDiagonal() * schur.matrixU().adjoint() * u;
}

// Block ascent with polar updates. After each sweep the step from the
// previous sweep is extrapolated with doubling factors while that improves
// the overlap, which removes most of the slow linear tail.
std::vector<double> ascend(const MultipartiteState& psi, const MultipartiteState& phi,
                           std::vector<Matrix> us, int iters) {
  const std::size_t parties = psi.dims.size();
  const auto value = [&](const std::vector<Matrix>& w) {
    return std::norm(psi.amplitudes.dot(apply_all(phi.amplitudes, psi.dims, w)));
  };
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    const std::vector<Matrix> before = us;
    for (std::size_t k = 0; k < parties; ++k) {
      Vector others = phi.amplitudes;
      for (std::size_t j = 0; j < parties; ++j) {
        if (j != k) others = apply_party(others, psi.dims, j, us[j]);
      }
      const Matrix n = effective_operator(psi.amplitudes, others, psi.dims, k);
      Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
      us[k] = svd.matrixV() * svd.matrixU().adjoint();
    }
    const std::vector<Matrix> base = us;
    double best = value(us);
    for (double w = 2.0; w <= 1024.0; w *= 2.0) {
      std::vector<Matrix> trial(parties);
      for (std::size_t k = 0; k < parties; ++k) trial[k] = unitary_step(base[k], before[k], w - 1.0);
      const double v = value(trial);
      if (v > best) {
        best = v;
        us = std::move(trial);
      }
    }
    trace.push_back(std::min(1.0, best));
  }
  return trace;
}

void check_multipartite(const MultipartiteState& s) {
  if (s.dims.size() < 2) fail(ErrorKind::invalid_input, "need at least two parties");
  long long total = 1;
  for (int d : s.dims) {
    if (d < 1) fail(ErrorKind::invalid_input, "party dims must be positive");
    total *= d;
  }
  if (total != s.amplitudes.size()) fail(ErrorKind::invalid_input, "amplitude count mismatch");
  if (std::abs(s.amplitudes.norm() - 1.0) > 1e-10) {
    fail(ErrorKind::invalid_input, "multipartite state is not normalized");
  }
}

}  // namespace

std::vector<double> vdh_coefficients(std::size_t n) {
  if (n < 1) fail(ErrorKind::invalid_input, "family index must be >= 1");
  double harmonic = 0.0;
  for (std::size_t a = n; a >= 1; --a) harmonic += 1.0 / static_cast<double>(a);
  const double c = 1.0 / std::sqrt(harmonic);
  std::vector<double> out(n);
  for (std::size_t a = 1; a <= n; ++a) out[a - 1] = c / std::sqrt(static_cast<double>(a));
  return out;
}

Spectrum vdh_spectrum(std::size_t n) {
  std::vector<double> c = vdh_coefficients(n);
  for (double& x : c) x *= x;
  return Spectrum(std::move(c));
}

PureBipartiteState vdh_state(std::size_t n) {
  const std::vector<double> c = vdh_coefficients(n);
  const auto d = static_cast<int>(n);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n * n));
  for (int a = 0; a < d; ++a) v(a * d + a) = c[static_cast<std::size_t>(a)];
  return PureBipartiteState::normalized(d, d, std::move(v));
}

VdhBound vdh_bound(double d, std::size_t n) {
  if (!(d >= 1.0)) fail(ErrorKind::invalid_input, "target dimension must be >= 1");
  if (n < 2) fail(ErrorKind::invalid_input, "family index must be >= 2 for the bound");
  const double ratio = std::log(d) / std::log(static_cast<double>(n));
  VdhBound b;
  b.epsilon = std::sqrt(2.0 * ratio);
  const double root = std::clamp(1.0 - ratio, 0.0, 1.0);
  b.fidelity_bound = root * root;
  return b;
}

EmbezzleReport embezzle_report(std::size_t n, const PureBipartiteState& start,
                               const PureBipartiteState& target, bool with_permutations) {
  const std::vector<double> c = vdh_coefficients(n);
  const std::vector<double> s = schmidt(start).coefficients;
  const std::vector<double> t = schmidt(target).coefficients;
  const std::size_t d = std::max(s.size(), t.size());

  const Ranked rs = ranked_products(c, s, d, with_permutations);
  const Ranked rt = ranked_products(c, t, d, with_permutations);
  double overlap = 0.0;
  for (std::size_t k = 0; k < rs.values.size(); ++k) overlap += rs.values[k] * rt.values[k];

  EmbezzleReport r;
  r.fidelity = std::min(1.0, overlap * overlap);
  r.trace_error = 2.0 * std::sqrt(std::max(0.0, 1.0 - r.fidelity));

  if (with_permutations) {
    // Apply the index map to the unsorted product coefficients and read off
    // the overlap it witnesses.
    r.perm_A.assign(rs.index.size(), 0);
    for (std::size_t k = 0; k < rs.index.size(); ++k) r.perm_A[rs.index[k]] = rt.index[k];
    r.perm_B = r.perm_A;
    std::vector<double> target_prod(c.size() * d, 0.0);
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t j = 0; j < t.size(); ++j) target_prod[a * d + j] = c[a] * t[j];
    }
    double w = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        w += c[a] * s[i] * target_prod[r.perm_A[a * d + i]];
      }
    }
    r.witness_error = 2.0 * std::sqrt(std::max(0.0, 1.0 - std::min(1.0, w * w)));
  } else {
    r.witness_error = r.trace_error;
  }

  const auto rank = static_cast<double>(t.size());
  if (n >= 2) r.bound = vdh_bound(rank, n).fidelity_bound;
  else r.bound = t.size() == 1 ? 1.0 : 0.0;
  r.meets_bound = std::sqrt(r.fidelity) >= std::sqrt(r.bound) - 1e-15;
  return r;
}

Spectrum lambda_site_spectrum(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorKind::invalid_input, "lambda must lie in [0, 1]");
  return Spectrum({1.0 / (1.0 + lambda), lambda / (1.0 + lambda)});
}

AtomicMeasure lambda_family_state(double lambda, std::size_t m) {
  check_lambda_open(lambda);
  if (m < 1) fail(ErrorKind::invalid_input, "tensor power must be >= 1");
  const double log_l = std::log(lambda);
  const double log_norm = static_cast<double>(m) * std::log1p(lambda);
  std::vector<double> log_atoms(m + 1);
  std::vector<double> masses(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    log_atoms[k] = static_cast<double>(k) * log_l - log_norm;
    masses[k] = std::exp(log_binomial(m, k) + log_atoms[k]);
  }
  return AtomicMeasure::from_log_atoms(std::move(log_atoms), std::move(masses));
}

double catalytic_deviation(double lambda, std::size_t m, double t) {
  return flow_deviation(lambda_family_state(lambda, m), t);
}

std::string TypeLabel::name() const {
  switch (family) {
    case Family::I: return "I_n";
    case Family::II_1: return "II_1";
    case Family::III_lambda: return "III_lambda";
    case Family::III_1: return "III_1";
  }
  return "?";
}

TypeLabel classify_itpfi(std::span<const double> s) {
  for (double x : s) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      fail(ErrorKind::invalid_input, "spectrum entries must be positive (truncate zeros first)");
    }
  }
  const Spectrum spec(std::vector<double>(s.begin(), s.end()));
  if (spec.empty() || !spec.is_state(1e-9)) fail(ErrorKind::invalid_input, "not a state spectrum");

  TypeLabel out;
  if (spec.size() == 1) return out;

  std::vector<double> ratios;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const double r = std::log(spec[0] / spec[i]);
    if (r > 1e-12) ratios.push_back(r);
  }
  if (ratios.empty()) {
    out.family = TypeLabel::Family::II_1;
    return out;
  }
  const double r_min = *std::min_element(ratios.begin(), ratios.end());

  std::vector<std::pair<long long, long long>> q;
  long long lcm = 1;
  for (double r : ratios) {
    const auto pq = rationalize(r / r_min, 1e-9, 1'000'000);
    if (!pq) {
      out.family = TypeLabel::Family::III_1;
      return out;
    }
    q.push_back(*pq);
    lcm = std::lcm(lcm, pq->second);
    if (lcm > 1'000'000) {
      out.family = TypeLabel::Family::III_1;
      return out;
    }
  }
  // r_i = (r_min / lcm) * (p_i * lcm / q_i); the generator is r_min * g / lcm
  // with g the gcd of the integer multiples.
  long long g = 0;
  for (const auto& [p, qq] : q) g = std::gcd(g, p * (lcm / qq));
  const double generator = r_min * static_cast<double>(g) / static_cast<double>(lcm);
  out.family = TypeLabel::Family::III_lambda;
  out.lambda = std::exp(-generator);
  return out;
}

double kappa_max_formula(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorKind::invalid_input, "lambda must lie in [0, 1]");
  const double r = std::sqrt(lambda);
  return 2.0 * (1.0 - r) / (1.0 + r);
}

double kappa_max_from_period(double period) {
  if (!(period >= 0.0)) fail(ErrorKind::invalid_input, "period must be non-negative");
  const double h = std::exp(-period / 2.0);
  return 2.0 * (1.0 - h) / (1.0 + h);
}

MultipartiteState ghz_state(int parties, int d) {
  MultipartiteState s;
  s.dims.assign(static_cast<std::size_t>(parties), d);
  long long total = 1;
  for (int k = 0; k < parties; ++k) total *= d;
  s.amplitudes = Vector::Zero(total);
  long long stride = 0;
  for (int k = 0; k < parties; ++k) stride = stride * d + 1;
  for (int a = 0; a < d; ++a) s.amplitudes(a * stride) = 1.0 / std::sqrt(static_cast<double>(d));
  return s;
}

MultipartiteState product_state(const std::vector<int>& dims) {
  MultipartiteState s;
  s.dims = dims;
  long long total = 1;
  for (int d : dims) total *= d;
  s.amplitudes = Vector::Zero(total);
  s.amplitudes(0) = 1.0;
  return s;
}

LuFidelityTrace multipartite_lu_fidelity(const MultipartiteState& psi,
                                         const MultipartiteState& phi, int iters,
                                         std::uint64_t seed) {
  check_multipartite(psi);
  check_multipartite(phi);
  if (psi.dims != phi.dims) fail(ErrorKind::invalid_input, "party dims differ");
  if (iters < 1) fail(ErrorKind::invalid_input, "iters must be >= 1");

  std::vector<Matrix> identity;
  for (int d : psi.dims) identity.push_back(Matrix::Identity(d, d));
  LuFidelityTrace out;
  out.per_sweep = ascend(psi, phi, identity, iters);
  out.fidelity = out.per_sweep.back();

  const int restarts = std::min(iters, 8);
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::vector<Matrix> start;
    for (int d : psi.dims) start.push_back(haar_unitary(d, rng));
    out.fidelity = std::max(out.fidelity, ascend(psi, phi, std::move(start), iters).back());
  }
  return out;
}

}  // namespace entlab
