#ifndef TSMC_SAMPLING_LAW_HPP
#define TSMC_SAMPLING_LAW_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tsmc/random.hpp"

namespace tsmc {

/// Three-valued answer for partial orders and kernel properties.
enum class Tri { no, yes, undetermined };

std::string to_string(Tri t);

namespace law {

struct PointMass {
  std::uint32_t k;
};

struct LazyBernoulli {
  double eps;  // mass at 0; the rest sits at 1
};

struct ShiftedPoisson {
  std::uint32_t shift;
  double rate;
};

struct FiniteSupport {
  std::vector<std::pair<std::uint32_t, double>> pmf;  // sorted by k, distinct
};

}  // namespace law

/// Distribution of the number of base-kernel steps taken per time-sampled step.
///
/// Immutable after construction. Infinite supports are truncated at a point
/// `support_bound()` beyond which the tail mass is below 1e-14; the truncated
/// table is used for the CDF and for sampling, while the PGF and the odd mass
/// use closed forms where they exist.
class SamplingLaw {
 public:
  using Kind = std::variant<law::PointMass, law::LazyBernoulli, law::ShiftedPoisson,
                            law::FiniteSupport>;

  static SamplingLaw point_mass(std::uint32_t k);
  /// Throws std::domain_error unless 0 <= eps <= 1.
  static SamplingLaw lazy(double eps);
  /// Law of shift + Poisson(rate). Throws std::domain_error unless rate >= 0 is finite.
  static SamplingLaw shifted_poisson(std::uint32_t shift, double rate);
  /// Explicit pmf. Rejects negative or non-finite masses, repeated k, and
  /// totals more than 1e-12 away from 1. Zero masses are dropped.
  static SamplingLaw finite_support(std::vector<std::pair<std::uint32_t, double>> pmf);

  const Kind& kind() const noexcept { return kind_; }

  /// G(x) = E[x^K]. Throws std::domain_error for |x| > 1 or NaN.
  double pgf(double x) const;

  double mass_at_zero() const noexcept;
  /// Total mass on {1, 3, 5, ...}.
  double odd_mass() const noexcept;
  bool supported_on_even() const noexcept { return odd_mass() == 0.0; }

  /// Largest k considered when tabulating the law.
  std::uint32_t support_bound() const noexcept { return static_cast<std::uint32_t>(cdf_.size() - 1); }
  /// P(K <= k); exactly 1 beyond support_bound().
  double cdf(std::uint32_t k) const noexcept;
  /// pmf on 0..support_bound().
  std::vector<double> pmf_table() const;

  /// Draws K by inversion from one uniform of `stream`.
  std::uint32_t sample(CounterStream& stream) const noexcept;

  /// Canonical spec string ("point:1", "lazy:0.5", ...).
  const std::string& spec() const noexcept { return spec_; }

 private:
  SamplingLaw(Kind kind, std::vector<double> cdf, std::string spec);

  Kind kind_;
  std::vector<double> cdf_;  // cumulative on 0..support_bound, last entry forced to 1
  std::string spec_;
};

/// Truncation point for shift + Poisson(rate): shift + rate + 40 sqrt(rate) + 40.
std::uint32_t poisson_support_bound(std::uint32_t shift, double rate);

/// Stochastic dominance a >=st b, decided by comparing CDFs on 0..K* with
/// K* the larger support bound. yes: F_a <= F_b everywhere. no: F_a >= F_b
/// everywhere with a strict gap somewhere. undetermined: the CDFs cross.
/// Differences within 1e-12 count as ties.
Tri dominates(const SamplingLaw& a, const SamplingLaw& b);

}  // namespace tsmc

#endif  // TSMC_SAMPLING_LAW_HPP
