#pragma once

// Step functions, spectral scales and spectral states of finite spectra.
//
// A spectral state is stored as an atomic encoding: one atom per distinct
// eigenvalue a with mass a * multiplicity. The encoded functional is the
// measure with Lebesgue density D(x) = sum_{a > x} mass(a) / a on (0, inf),
// i.e. the distribution function of the underlying spectrum. All norms on
// spectral states are L1 norms of these densities.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace entlab {

/// Non-negative eigenvalue list, sorted non-increasing, trailing zeros removed.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts and canonicalizes. Throws invalid_input on negative or non-finite
  /// entries.
  explicit Spectrum(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Entry i, or 0 past the end (zero padding).
  double at_padded(std::size_t i) const noexcept {
    return i < values_.size() ? values_[i] : 0.0;
  }
  double total() const noexcept { return total_; }
  bool is_state(double tol = 1e-10) const noexcept;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
  double total_ = 0.0;
};

/// Spectrum of the tensor product of two density operators.
Spectrum tensor_spectrum(const Spectrum& a, const Spectrum& b);
/// (1/k, ..., 1/k).
Spectrum flat_spectrum(std::size_t k);

/// Non-increasing right-continuous step function on [0, inf) with compact
/// support. levels[i] is the value on [breakpoints[i-1], breakpoints[i])
/// (breakpoints[-1] = 0); the final level is always 0.
class StepFunction {
 public:
  StepFunction() : levels_{0.0} {}
  /// Validates monotonicity and canonicalizes (merges equal adjacent levels,
  /// drops empty segments). levels.size() must equal breakpoints.size() + 1.
  StepFunction(std::vector<double> breakpoints, std::vector<double> levels);

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> levels() const noexcept { return levels_; }

  double operator()(double t) const noexcept;
  double integral() const noexcept;
  /// Lebesgue measure of {f > 0}.
  double support_length() const noexcept;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

StepFunction spectral_scale(const Spectrum& s);
StepFunction distribution_function(const Spectrum& s);
/// t -> inf{ x >= 0 : f(x) <= t }. Maps distribution functions to spectral
/// scales and back.
StepFunction generalized_inverse(const StepFunction& f);
/// Exact integral of |f - g| over the merged breakpoint grid.
double l1_distance(const StepFunction& f, const StepFunction& g);

/// Classical majorization: prefix sums of a dominate those of b (a is less
/// mixed). Throws invalid_input when the totals differ by more than tol.
bool majorizes(const Spectrum& a, const Spectrum& b, double tol = 1e-10);
/// inf over unitaries of ||rho - u sigma u*||_1 = sum_i |a_i - b_i| for
/// sorted, zero-padded spectra.
double orbit_distance(const Spectrum& a, const Spectrum& b) noexcept;

/// Finite positive measure given by atoms and masses, stored with log-domain
/// positions so that dilations compose exactly.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  /// Atoms must be positive and masses non-negative; zero masses are dropped
  /// and atoms within relative distance 1e-12 are merged.
  AtomicMeasure(std::span<const double> atoms, std::span<const double> masses);

  static AtomicMeasure from_log_atoms(std::vector<double> log_atoms,
                                      std::vector<double> masses);

  std::vector<double> atoms() const;
  std::span<const double> log_atoms() const noexcept { return log_atoms_; }
  std::span<const double> masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return masses_.size(); }
  double total_mass() const noexcept;

 private:
  void canonicalize();

  std::vector<double> log_atoms_;  // strictly increasing
  std::vector<double> masses_;     // strictly positive
};

/// Relative tolerance used when merging atoms.
inline constexpr double kAtomMergeTolerance = 1e-12;

AtomicMeasure spectral_state(const Spectrum& s);
/// Dilates atom positions by e^t; masses are unchanged.
AtomicMeasure flow_act(const AtomicMeasure& m, double t);
/// sum_i w_i * flow_act(m, log w_i) for the entries w_i of omega.
AtomicMeasure smear(const AtomicMeasure& m, const Spectrum& omega);
/// Lebesgue density encoded by m: x -> sum_{a > x} mass(a) / a.
StepFunction density(const AtomicMeasure& m);
/// Norm distance of the encoded functionals (L1 distance of densities).
double measure_distance(const AtomicMeasure& m1, const AtomicMeasure& m2);
/// ||m - m o theta_t||.
double flow_deviation(const AtomicMeasure& m, double t);
std::vector<double> kappa_profile(const Spectrum& s,
                                  std::span<const double> t_grid);
/// The supremum over t > 0 of flow_deviation for any finite spectrum.
constexpr double kappa_sup() noexcept { return 2.0; }

/// Convex non-decreasing f with f(0) = 0, used in E_f monotones.
class MonotoneFunction {
 public:
  enum class Kind { power, xlogx, support_indicator, hinge, tabulated };

  static MonotoneFunction power(double alpha);
  static MonotoneFunction xlogx();
  static MonotoneFunction support_indicator();
  static MonotoneFunction hinge(double c);
  /// Piecewise-linear interpolation through (xs[i], ys[i]), extended linearly
  /// past the last node. xs must be strictly increasing and start at 0.
  static MonotoneFunction tabulated(std::vector<double> xs,
                                    std::vector<double> ys);

  Kind kind() const noexcept { return kind_; }
  double operator()(double x) const;

 private:
  Kind kind_ = Kind::power;
  double param_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// E_f = integral of f(scale(t)) dt, exact on the step grid.
double monotone_Ef(const StepFunction& scale, const MonotoneFunction& f);

struct Entropies {
  double H = 0.0;
  std::map<double, double> H_alpha;
  std::size_t schmidt_rank = 0;
};

/// von Neumann and Renyi entropies (natural log) of a state spectrum.
Entropies entanglement_entropies(const Spectrum& s,
                                 std::span<const double> alphas);

}  // namespace entlab
