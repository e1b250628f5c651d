#include "entlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "entlab/error.hpp"

namespace entlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::no_connector: return "no-connector";
    case ErrorKind::not_reducible: return "not-reducible-as-specified";
    case ErrorKind::io_failure: return "io-failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::invalid_input,
           "spectrum entries must be finite and non-negative, got " +
               std::to_string(v));
    }
  }
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
  while (!values_.empty() && values_.back() == 0.0) values_.pop_back();
  total_ = std::accumulate(values_.begin(), values_.end(), 0.0);
}

bool Spectrum::is_state(double tol) const noexcept {
  return std::abs(total_ - 1.0) <= tol;
}

Spectrum tensor_spectrum(const Spectrum& a, const Spectrum& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a.values())
    for (double y : b.values()) out.push_back(x * y);
  return Spectrum(std::move(out));
}

Spectrum flat_spectrum(std::size_t k) {
  if (k == 0) fail(ErrorKind::invalid_input, "flat spectrum needs k >= 1");
  return Spectrum(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

// ---------------------------------------------------------------------------
// StepFunction

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> levels) {
  if (levels.size() != breakpoints.size() + 1) {
    fail(ErrorKind::invalid_input,
         "step function needs one more level than breakpoints");
  }
  if (levels.back() != 0.0) {
    fail(ErrorKind::invalid_input, "step function must vanish at infinity");
  }
  double prev = 0.0;
  for (double b : breakpoints) {
    if (!(b > prev) || !std::isfinite(b)) {
      fail(ErrorKind::invalid_input,
           "breakpoints must be positive and strictly increasing");
    }
    prev = b;
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i]) || levels[i] < 0.0) {
      fail(ErrorKind::invalid_input, "levels must be finite and non-negative");
    }
    if (i > 0 && levels[i] > levels[i - 1]) {
      fail(ErrorKind::invalid_input, "levels must be non-increasing");
    }
  }

  levels_.push_back(levels.front());
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (levels[i + 1] == levels_.back()) continue;
    breakpoints_.push_back(breakpoints[i]);
    levels_.push_back(levels[i + 1]);
  }
}

double StepFunction::operator()(double t) const noexcept {
  if (t < 0.0) return levels_.front();
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return levels_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double StepFunction::integral() const noexcept {
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    acc += levels_[i] * (breakpoints_[i] - left);
    left = breakpoints_[i];
  }
  return acc;
}

double StepFunction::support_length() const noexcept {
  return breakpoints_.empty() ? 0.0 : breakpoints_.back();
}

StepFunction spectral_scale(const Spectrum& s) {
  std::vector<double> bps;
  std::vector<double> levels;
  bps.reserve(s.size());
  levels.reserve(s.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    levels.push_back(s[i]);
    bps.push_back(static_cast<double>(i + 1));
  }
  levels.push_back(0.0);
  return StepFunction(std::move(bps), std::move(levels));
}

StepFunction distribution_function(const Spectrum& s) {
  // Distinct eigenvalues ascending; the count above t drops at each of them.
  std::vector<double> bps;
  std::vector<double> levels;
  const std::size_t n = s.size();
  levels.push_back(static_cast<double>(n));
  for (std::size_t i = n; i-- > 0;) {
    if (!bps.empty() && bps.back() == s[i]) {
      levels.back() = static_cast<double>(i);
      continue;
    }
    bps.push_back(s[i]);
    levels.push_back(static_cast<double>(i));
  }
  return StepFunction(std::move(bps), std::move(levels));
}

StepFunction generalized_inverse(const StepFunction& f) {
  const auto x = f.breakpoints();
  const auto y = f.levels();
  const std::size_t k = x.size();
  std::vector<double> bps;
  std::vector<double> levels;
  bps.reserve(k);
  levels.reserve(k + 1);
  for (std::size_t i = k; i-- > 0;) {
    bps.push_back(y[i]);
    levels.push_back(x[i]);
  }
  levels.push_back(0.0);
  return StepFunction(std::move(bps), std::move(levels));
}

double l1_distance(const StepFunction& f, const StepFunction& g) {
  std::vector<double> grid;
  grid.reserve(f.breakpoints().size() + g.breakpoints().size());
  std::merge(f.breakpoints().begin(), f.breakpoints().end(),
             g.breakpoints().begin(), g.breakpoints().end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double acc = 0.0;
  double left = 0.0;
  std::size_t fi = 0;
  std::size_t gi = 0;
  const auto fb = f.breakpoints();
  const auto gb = g.breakpoints();
  for (double right : grid) {
    while (fi < fb.size() && fb[fi] <= left) ++fi;
    while (gi < gb.size() && gb[gi] <= left) ++gi;
    acc += std::abs(f.levels()[fi] - g.levels()[gi]) * (right - left);
    left = right;
  }
  return acc;
}

bool majorizes(const Spectrum& a, const Spectrum& b, double tol) {
  if (std::abs(a.total() - b.total()) > tol) {
    fail(ErrorKind::invalid_input, "majorization needs equal totals");
  }
  const std::size_t n = std::max(a.size(), b.size());
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sa += a.at_padded(k);
    sb += b.at_padded(k);
    if (sa < sb - tol) return false;
  }
  return true;
}

double orbit_distance(const Spectrum& a, const Spectrum& b) noexcept {
  const std::size_t n = std::max(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a.at_padded(i) - b.at_padded(i));
  return acc;
}

// ---------------------------------------------------------------------------
// AtomicMeasure

AtomicMeasure::AtomicMeasure(std::span<const double> atoms,
                             std::span<const double> masses) {
  if (atoms.size() != masses.size()) {
    fail(ErrorKind::invalid_input, "atoms and masses differ in length");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i] > 0.0) || !std::isfinite(atoms[i])) {
      fail(ErrorKind::invalid_input, "atoms must be positive and finite");
    }
    if (!(masses[i] >= 0.0) || !std::isfinite(masses[i])) {
      fail(ErrorKind::invalid_input, "masses must be non-negative and finite");
    }
    log_atoms_.push_back(std::log(atoms[i]));
    masses_.push_back(masses[i]);
  }
  canonicalize();
}

AtomicMeasure AtomicMeasure::from_log_atoms(std::vector<double> log_atoms,
                                            std::vector<double> masses) {
  if (log_atoms.size() != masses.size()) {
    fail(ErrorKind::invalid_input, "atoms and masses differ in length");
  }
  AtomicMeasure m;
  m.log_atoms_ = std::move(log_atoms);
  m.masses_ = std::move(masses);
  m.canonicalize();
  return m;
}

void AtomicMeasure::canonicalize() {
  std::vector<std::size_t> order(masses_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return log_atoms_[i] < log_atoms_[j];
  });

  std::vector<double> la;
  std::vector<double> ms;
  double anchor = 0.0;  // first log position of the current cluster
  for (std::size_t idx : order) {
    const double x = log_atoms_[idx];
    const double w = masses_[idx];
    if (w == 0.0) continue;
    if (!la.empty() && x - anchor <= kAtomMergeTolerance) {
      const double total = ms.back() + w;
      la.back() = (la.back() * ms.back() + x * w) / total;
      ms.back() = total;
      continue;
    }
    anchor = x;
    la.push_back(x);
    ms.push_back(w);
  }
  log_atoms_ = std::move(la);
  masses_ = std::move(ms);
}

std::vector<double> AtomicMeasure::atoms() const {
  std::vector<double> out(log_atoms_.size());
  std::transform(log_atoms_.begin(), log_atoms_.end(), out.begin(),
                 [](double x) { return std::exp(x); });
  return out;
}

double AtomicMeasure::total_mass() const noexcept {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

AtomicMeasure spectral_state(const Spectrum& s) {
  if (!s.is_state()) {
    fail(ErrorKind::invalid_input, "spectral_state needs a unit-trace spectrum");
  }
  std::vector<double> masses(s.values().begin(), s.values().end());
  return AtomicMeasure(s.values(), masses);
}

AtomicMeasure flow_act(const AtomicMeasure& m, double t) {
  std::vector<double> la(m.log_atoms().begin(), m.log_atoms().end());
  for (double& x : la) x += t;
  return AtomicMeasure::from_log_atoms(std::move(la),
                                       {m.masses().begin(), m.masses().end()});
}

AtomicMeasure smear(const AtomicMeasure& m, const Spectrum& omega) {
  std::vector<double> la;
  std::vector<double> ms;
  la.reserve(m.size() * omega.size());
  ms.reserve(m.size() * omega.size());
  for (double w : omega.values()) {
    const double shift = std::log(w);
    for (std::size_t i = 0; i < m.size(); ++i) {
      la.push_back(m.log_atoms()[i] + shift);
      ms.push_back(w * m.masses()[i]);
    }
  }
  return AtomicMeasure::from_log_atoms(std::move(la), std::move(ms));
}

StepFunction density(const AtomicMeasure& m) {
  const auto atoms = m.atoms();
  const std::size_t k = atoms.size();
  std::vector<double> levels(k + 1, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    levels[i] = levels[i + 1] + m.masses()[i] / atoms[i];
  }
  return StepFunction(atoms, std::move(levels));
}

double measure_distance(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  return l1_distance(density(m1), density(m2));
}

double flow_deviation(const AtomicMeasure& m, double t) {
  if (t == 0.0) return 0.0;
  return measure_distance(m, flow_act(m, t));
}

std::vector<double> kappa_profile(const Spectrum& s,
                                  std::span<const double> t_grid) {
  const AtomicMeasure m = spectral_state(s);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(flow_deviation(m, t));
  return out;
}

// ---------------------------------------------------------------------------
// Monotones and entropies

MonotoneFunction MonotoneFunction::power(double alpha) {
  MonotoneFunction f;
  f.kind_ = Kind::power;
  f.param_ = alpha;
  return f;
}

MonotoneFunction MonotoneFunction::xlogx() {
  MonotoneFunction f;
  f.kind_ = Kind::xlogx;
  return f;
}

MonotoneFunction MonotoneFunction::support_indicator() {
  MonotoneFunction f;
  f.kind_ = Kind::support_indicator;
  return f;
}

MonotoneFunction MonotoneFunction::hinge(double c) {
  MonotoneFunction f;
  f.kind_ = Kind::hinge;
  f.param_ = c;
  return f;
}

MonotoneFunction MonotoneFunction::tabulated(std::vector<double> xs,
                                             std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    fail(ErrorKind::invalid_input, "tabulated function needs >= 2 nodes");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      fail(ErrorKind::invalid_input, "tabulated nodes must increase");
    }
  }
  if (xs.front() != 0.0) {
    fail(ErrorKind::invalid_input, "tabulated function must start at x = 0");
  }
  MonotoneFunction f;
  f.kind_ = Kind::tabulated;
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

double MonotoneFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::power:
      if (x == 0.0) return param_ > 0.0 ? 0.0 : 1.0;
      return std::pow(x, param_);
    case Kind::xlogx:
      return x == 0.0 ? 0.0 : x * std::log(x);
    case Kind::support_indicator:
      return x > 0.0 ? 1.0 : 0.0;
    case Kind::hinge:
      return std::max(x - param_, 0.0);
    case Kind::tabulated: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
      hi = std::clamp<std::size_t>(hi, 1, xs_.size() - 1);
      const std::size_t lo = hi - 1;
      const double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
      return ys_[lo] + w * (ys_[hi] - ys_[lo]);
    }
  }
  return 0.0;
}

double monotone_Ef(const StepFunction& scale, const MonotoneFunction& f) {
  if (f(0.0) != 0.0) {
    fail(ErrorKind::invalid_input, "E_f needs f(0) = 0");
  }
  double acc = 0.0;
  double left = 0.0;
  const auto bps = scale.breakpoints();
  for (std::size_t i = 0; i < bps.size(); ++i) {
    acc += f(scale.levels()[i]) * (bps[i] - left);
    left = bps[i];
  }
  return acc;
}

Entropies entanglement_entropies(const Spectrum& s,
                                 std::span<const double> alphas) {
  if (!s.is_state()) {
    fail(ErrorKind::invalid_input, "entropies need a unit-trace spectrum");
  }
  Entropies e;
  e.schmidt_rank = s.size();
  for (double p : s.values()) e.H -= p * std::log(p);
  for (double alpha : alphas) {
    if (!(alpha > 0.0) || alpha == 1.0) {
      fail(ErrorKind::invalid_input, "Renyi order must lie in (0,1) or (1,inf]");
    }
    if (std::isinf(alpha)) {
      e.H_alpha[alpha] = -std::log(s[0]);
      continue;
    }
    double sum = 0.0;
    for (double p : s.values()) sum += std::pow(p, alpha);
    e.H_alpha[alpha] = std::log(sum) / (1.0 - alpha);
  }
  return e;
}

}  // namespace entlab
