#ifndef TSMC_KERNELS_HPP
#define TSMC_KERNELS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "tsmc/random.hpp"
#include "tsmc/sampling_law.hpp"

namespace tsmc {

/// Metropolis-type acceptance rules. The ratio r is
/// pi(y) q(y,x) / (pi(x) q(x,y)).
class AcceptanceRule {
 public:
  enum class Kind { metropolis_hastings, barker, lazy_metropolis };

  static constexpr AcceptanceRule mh() noexcept { return AcceptanceRule{Kind::metropolis_hastings, 0.0}; }
  static constexpr AcceptanceRule barker() noexcept { return AcceptanceRule{Kind::barker, 0.0}; }
  /// Throws std::domain_error unless 0 < eps < 1.
  static AcceptanceRule lazy_metropolis(double eps);

  Kind kind() const noexcept { return kind_; }
  double eps() const noexcept { return eps_; }
  std::string name() const;

 private:
  constexpr AcceptanceRule(Kind kind, double eps) noexcept : kind_{kind}, eps_{eps} {}

  Kind kind_;
  double eps_;
};

/// Ratios are clamped to [0, kMaxRatio]; every rule is saturated long before that.
inline constexpr double kMaxRatio = 1e300;

/// Acceptance probability for ratio r >= 0 (r may be +infinity).
/// MH: min{1, r}; Barker: r / (1 + r); lazy MH: (1 - eps) min{1, r}.
double accept_prob(const AcceptanceRule& rule, double ratio);

struct AcceptanceOutcome {
  double probability;
  bool degenerate;  // numerator and denominator were both zero
};

/// Acceptance from the two halves of the Hastings ratio. A 0/0 ratio is
/// rejected and flagged as degenerate.
AcceptanceOutcome accept_prob(const AcceptanceRule& rule, double numerator, double denominator);

/// Acceptance from log pi(y) - log pi(x) (symmetric proposals).
double accept_prob_from_log(const AcceptanceRule& rule, double log_ratio);

struct StepCounters {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t degenerate = 0;

  double acceptance_rate() const noexcept {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// Everything a running chain owns besides its position.
struct ChainContext {
  ChainRng rng;
  StepCounters counters;

  ChainContext(std::uint64_t seed, std::uint64_t chain_index) : rng{seed, chain_index} {}
};

/// Properties a kernel declares about itself. Spectral radius bound s_P < 1,
/// when present, implies geometric ergodicity.
struct KernelTraits {
  bool reversible = true;
  Tri geometrically_ergodic = Tri::undetermined;
  std::optional<double> spectral_radius_bound;
  Tri positive_operator = Tri::undetermined;
};

/// A one-dimensional Markov transition kernel.
///
/// Immutable and cheap to copy; the implementation is shared. All
/// randomness comes from the ChainContext passed to `step`, and each kernel
/// family consumes a fixed number of draws per step:
///
///   contracting normal       1 draw from `moves`
///   random-walk Metropolis   2 draws from `moves` (increment, accept)
///   counterexample (1 or 2)  2 draws from `moves` (fresh point, regeneration)
///   time-sampled             1 draw from `clock`, then K base steps
class MarkovKernel {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double step(double x, ChainContext& ctx) const = 0;
    virtual double draw_stationary(ChainContext& ctx) const = 0;
  };

  MarkovKernel(std::shared_ptr<const Impl> impl, KernelTraits traits, std::string name);

  double step(double x, ChainContext& ctx) const { return impl_->step(x, ctx); }
  /// Exact draw from the stationary law (uses `moves`).
  double draw_stationary(ChainContext& ctx) const { return impl_->draw_stationary(ctx); }

  const KernelTraits& traits() const noexcept { return traits_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::shared_ptr<const Impl> impl_;
  KernelTraits traits_;
  std::string name_;
};

/// P(x, .) = N(theta x, 1 - theta^2), stationary N(0, 1).
/// Throws std::domain_error unless |theta| < 1.
MarkovKernel contracting_normal(double theta);

using LogDensity = std::function<double(double)>;
/// Maps a uniform u in [0, 1) to a proposal increment; must describe a law
/// symmetric about 0.
using IncrementQuantile = std::function<double(double)>;
using StationarySampler = std::function<double(CounterStream&)>;

/// Increment quantile of U[-half_width, half_width].
IncrementQuantile uniform_increment(double half_width);

/// Random-walk Metropolis-type kernel for an arbitrary log target.
/// A non-finite log density at the current state, or a NaN at the proposal,
/// throws std::runtime_error. Without a stationary sampler, draw_stationary throws.
MarkovKernel metropolis_like(LogDensity log_target, IncrementQuantile increment, AcceptanceRule rule,
                             StationarySampler stationary = {}, std::string name = "metropolis");

inline constexpr double kDefaultIncrementHalfWidth = 2.0;

/// The built-in random walk: target N(0, 1), increments U[-half_width, half_width].
MarkovKernel random_walk_metropolis(AcceptanceRule rule, double half_width = kDefaultIncrementHalfWidth);

/// One step draws K from `law` and applies `base` K times.
MarkovKernel time_sampled(const MarkovKernel& base, const SamplingLaw& law);

// ---------------------------------------------------------------------------
// Counterexample chain on (-1, 1) with regeneration function s(x) = sqrt(1 - |x|).
//
// power 1: P(x, .) = (1 - s(x)) delta_{-x} + s(x) U,
//          reversible with respect to pi(x) = 1 / (4 s(x)).
// power 2: the two-step rule (1 - s(x))^2 delta_x + (2 s(x) - s(x)^2) U,
//          reversible with respect to pi_2(x) proportional to 1 / (2 s(x) - s(x)^2).

double regeneration_function(double x) noexcept;
/// Probability of regenerating from x: s(x) (power 1) or 2 s(x) - s(x)^2 (power 2).
double regeneration_probability(double x, int power) noexcept;
/// Normalized stationary density of the counterexample kernel of the given power.
double counterexample_stationary_density(double x, int power) noexcept;

/// Uniform draw on the open interval (-1, 1) from a dyadic grid of spacing
/// 2^-31. The endpoint -1 is rejected and redrawn; +1 is never produced.
/// Grid points keep tour sums exact in double precision.
double open_symmetric_uniform(CounterStream& stream) noexcept;

/// Throws std::domain_error unless power is 1 or 2.
MarkovKernel counterexample_kernel(int power);

struct SplitChainState {
  double x;
  int gamma;  // regeneration indicator, 0 or 1
};

/// One regeneration tour: tau = min{k >= 0 : Gamma_k = 1} counted from the
/// tour start, and f_sum = sum_{k=0}^{tau} X_k.
struct Tour {
  std::uint64_t tau;
  double f_sum;
  double x_start;
};

/// Simulator of the bivariate split chain (X_n, Gamma_n).
///
/// Transition from (X_{n-1}, Gamma_{n-1}): X_n ~ U if Gamma_{n-1} = 1,
/// otherwise X_n = -X_{n-1} (power 1) or X_n = X_{n-1} (power 2); then
/// Gamma_n = 1 with probability regeneration_probability(X_n, power).
class SplitChain {
 public:
  /// Starts as if Gamma_{-1} = 1, so X_0 ~ U.
  SplitChain(int power, ChainRng rng);
  /// Starts from a given X_0.
  SplitChain(int power, ChainRng rng, double x0);

  const SplitChainState& state() const noexcept { return state_; }
  std::uint64_t time() const noexcept { return time_; }
  int power() const noexcept { return power_; }

  /// Moves to (X_{n+1}, Gamma_{n+1}) and returns it.
  const SplitChainState& advance();
  /// Runs from the current state through the next regeneration and returns
  /// the tour; afterwards the chain sits at the first state of the next tour.
  Tour next_tour();

 private:
  void draw_gamma();

  int power_;
  ChainRng rng_;
  SplitChainState state_{0.0, 0};
  std::uint64_t time_ = 0;
};

/// Factory matching the kernel config strings "counter:1" / "counter:2".
SplitChain counterexample_split_chain(int power, std::uint64_t seed, std::uint64_t chain_index);

}  // namespace tsmc

#endif  // TSMC_KERNELS_HPP
