#pragma once

// Test-only oracles and generators. Nothing here calls the code under test
// for the quantity it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entlab/linalg.hpp"
#include "entlab/locc.hpp"
#include "entlab/quantum.hpp"

namespace oracle {

using entlab::cplx;
using entlab::Matrix;
using entlab::Vector;

// ---------------------------------------------------------------------------
// Exact rationals for hand values.

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
};

inline Rational abs(Rational r) { return r.num < 0 ? Rational(-r.num, r.den) : r; }

// Atomic total variation of two finitely supported measures given as
// (position, mass) lists with exact rational positions.
inline Rational atomic_tv(std::vector<std::pair<Rational, Rational>> a,
                          std::vector<std::pair<Rational, Rational>> b) {
  std::vector<Rational> pos;
  for (auto& [x, m] : a) pos.push_back(x);
  for (auto& [x, m] : b) pos.push_back(x);
  Rational total = 0;
  std::vector<Rational> seen;
  for (const Rational& p : pos) {
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
    seen.push_back(p);
    Rational ma = 0, mb = 0;
    for (auto& [x, m] : a) if (x == p) ma = ma + m;
    for (auto& [x, m] : b) if (x == p) mb = mb + m;
    total = total + abs(ma - mb);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Spectra

inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Brute-force tensor spectrum: all pairwise products, sorted descending.
inline std::vector<double> kron_spectrum(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  for (double x : a)
    for (double y : b) out.push_back(x * y);
  return sorted_desc(out);
}

// Sum |a_i - b_i| on sorted, zero-padded lists.
inline double padded_l1(std::vector<double> a, std::vector<double> b) {
  a = sorted_desc(a);
  b = sorted_desc(b);
  const std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// Integral of |f - g| for step functions given as callables, evaluated at
// the midpoints of the merged breakpoint grid.
inline double step_l1(const std::function<double(double)>& f, const std::function<double(double)>& g,
                      std::vector<double> grid) {
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    s += std::abs(f(mid) - g(mid)) * (grid[i + 1] - grid[i]);
  }
  return s;
}

inline bool classical_majorizes(std::vector<double> a, std::vector<double> b, double tol = 1e-12) {
  a = sorted_desc(a);
  b = sorted_desc(b);
  const std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += a[i];
    sb += b[i];
    if (sa < sb - tol) return false;
  }
  return true;
}

inline std::vector<double> random_probabilities(int d, std::mt19937_64& rng, double floor = 0.0) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(static_cast<std::size_t>(d));
  double s = 0.0;
  for (double& x : p) {
    x = ex(rng) + floor;
    s += x;
  }
  for (double& x : p) x /= s;
  return p;
}

// A doubly stochastic mix of q: convex combination of random permutations.
inline std::vector<double> random_mix(const std::vector<double>& q, std::mt19937_64& rng) {
  const std::size_t n = q.size();
  std::vector<double> out(n, 0.0);
  const int terms = 1 + static_cast<int>(rng() % 4);
  const std::vector<double> w = random_probabilities(terms, rng);
  for (int k = 0; k < terms; ++k) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) out[i] += w[static_cast<std::size_t>(k)] * q[perm[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// States and unitaries

// sum_i sqrt(p_i) (U a_i) (x) (V b_i) with random local frames.
inline entlab::PureBipartiteState state_with_spectrum(const std::vector<double>& p, int d_A, int d_B,
                                                      std::mt19937_64& rng) {
  const Matrix u = entlab::haar_unitary(d_A, rng);
  const Matrix v = entlab::haar_unitary(d_B, rng);
  Vector amps = Vector::Zero(d_A * d_B);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (int a = 0; a < d_A; ++a)
      for (int b = 0; b < d_B; ++b) amps(a * d_B + b) += std::sqrt(p[i]) * u(a, ii) * v(b, ii);
  }
  return entlab::PureBipartiteState::normalized(d_A, d_B, amps);
}

inline double hermitian_trace_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// Random isometry C^{d_in} -> C^{outcomes * d_out}, split into Kraus blocks.
inline std::vector<Matrix> random_instrument(int d_in, int d_out, int outcomes, std::mt19937_64& rng,
                                             double scale = 1.0) {
  const int big = outcomes * d_out;
  const Matrix u = entlab::haar_unitary(big, rng);
  const Matrix iso = u.leftCols(d_in);
  std::vector<Matrix> ks;
  for (int k = 0; k < outcomes; ++k) ks.push_back(std::sqrt(scale) * iso.middleRows(k * d_out, d_out));
  return ks;
}

struct CorpusItem {
  std::string name;
  entlab::LoccProtocol protocol;
  entlab::PureBipartiteState psi;
};

// Bob measures Z on a Bell pair, then Alice flips on outcome 1, so Alice
// always ends in |0>.
inline CorpusItem bell_correction_protocol() {
  entlab::LoccProtocol p;
  entlab::Round bob;
  bob.party = entlab::Party::B;
  Matrix z0 = Matrix::Zero(2, 2), z1 = Matrix::Zero(2, 2);
  z0(0, 0) = 1.0;
  z1(1, 1) = 1.0;
  bob.branches.push_back({"", {{z0, z1}, {"0", "1"}}});
  entlab::Round alice;
  alice.party = entlab::Party::A;
  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  alice.branches.push_back({"1", {{x}, {"x"}}});
  p.rounds = {bob, alice};
  return {"bell-bob-measures-alice-corrects", p, entlab::PureBipartiteState::maximally_entangled(2)};
}

// Random alternating protocols with conditional, wildcard, idle and
// subnormalized branches, and party dimension changes.
inline std::vector<CorpusItem> protocol_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusItem> out;
  out.push_back(bell_correction_protocol());
  while (out.size() < count) {
    const std::size_t idx = out.size();
    const int d_A = 2 + static_cast<int>(rng() % 2);
    const int d_B = 2 + static_cast<int>(rng() % 2);
    const std::vector<double> p = random_probabilities(std::min(d_A, d_B), rng, 0.05);
    CorpusItem item{"random-" + std::to_string(idx), {}, state_with_spectrum(p, d_A, d_B, rng)};
    const int rounds = 1 + static_cast<int>(rng() % 4);
    // Track reachable histories with their current dims.
    struct Hist {
      std::string key;
      int dA;
      int dB;
    };
    std::vector<Hist> hist{{"", d_A, d_B}};
    entlab::Party party = (rng() % 2) ? entlab::Party::A : entlab::Party::B;
    for (int r = 0; r < rounds; ++r) {
      entlab::Round round;
      round.party = party;
      std::vector<Hist> next;
      // Wildcard rounds need a common input dimension.
      bool uniform = true;
      for (const Hist& h : hist) {
        const int d = party == entlab::Party::A ? h.dA : h.dB;
        const int d0 = party == entlab::Party::A ? hist[0].dA : hist[0].dB;
        if (d != d0) uniform = false;
      }
      const bool wildcard = uniform && hist.size() > 1 && rng() % 3 == 0;
      if (wildcard) {
        const int d_in = party == entlab::Party::A ? hist[0].dA : hist[0].dB;
        const int outcomes = 2;
        entlab::Instrument inst{random_instrument(d_in, d_in, outcomes, rng), {"a", "b"}};
        round.branches.push_back({"*", inst});
        for (const Hist& h : hist) {
          for (const auto& l : inst.labels) next.push_back({h.key.empty() ? l : h.key + "/" + l, h.dA, h.dB});
        }
      } else {
        for (const Hist& h : hist) {
          if (hist.size() > 1 && rng() % 5 == 0) {
            next.push_back(h);  // idle branch
            continue;
          }
          const int d_in = party == entlab::Party::A ? h.dA : h.dB;
          const int d_out = std::max(1, d_in + static_cast<int>(rng() % 3) - 1);
          const int outcomes = std::max(2, (d_in + d_out - 1) / d_out);
          const bool sub = rng() % 4 == 0;
          entlab::Instrument inst{random_instrument(d_in, d_out, outcomes, rng, sub ? 0.8 : 1.0), {}};
          for (int k = 0; k < outcomes; ++k) inst.labels.push_back(std::string(1, static_cast<char>('p' + k)));
          if (sub) inst.labels.push_back("~");
          round.branches.push_back({h.key, {inst.kraus, std::vector<std::string>(inst.labels.begin(), inst.labels.begin() + outcomes)}});
          for (const auto& l : inst.labels) {
            Hist c{h.key.empty() ? l : h.key + "/" + l, h.dA, h.dB};
            const int d_new = l == "~" ? d_in : d_out;  // complement keeps the input space
            if (party == entlab::Party::A) c.dA = d_new;
            else c.dB = d_new;
            next.push_back(c);
          }
        }
      }
      item.protocol.rounds.push_back(std::move(round));
      hist = std::move(next);
      if (hist.size() > 40) break;
      party = party == entlab::Party::A ? entlab::Party::B : entlab::Party::A;
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace oracle
