#include "tsmc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "tsmc/spec_strings.hpp"

namespace tsmc {

// --- acceptance -------------------------------------------------------------

AcceptanceRule AcceptanceRule::lazy_metropolis(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("lazy Metropolis needs 0 < eps < 1");
  }
  return AcceptanceRule{Kind::lazy_metropolis, eps};
}

std::string AcceptanceRule::name() const {
  switch (kind_) {
    case Kind::metropolis_hastings:
      return "mh";
    case Kind::barker:
      return "barker";
    case Kind::lazy_metropolis:
      break;
  }
  return "lazy:" + format_real(eps_);
}

double accept_prob(const AcceptanceRule& rule, double ratio) {
  if (std::isnan(ratio) || ratio < 0.0) {
    throw std::domain_error("acceptance ratio must be a nonnegative number");
  }
  const double r = std::min(ratio, kMaxRatio);
  switch (rule.kind()) {
    case AcceptanceRule::Kind::metropolis_hastings:
      return std::min(1.0, r);
    case AcceptanceRule::Kind::barker:
      return r / (1.0 + r);
    case AcceptanceRule::Kind::lazy_metropolis:
      break;
  }
  return (1.0 - rule.eps()) * std::min(1.0, r);
}

AcceptanceOutcome accept_prob(const AcceptanceRule& rule, double numerator, double denominator) {
  if (numerator == 0.0 && denominator == 0.0) return {0.0, true};
  const double ratio = denominator == 0.0 ? kMaxRatio : numerator / denominator;
  return {accept_prob(rule, ratio), false};
}

double accept_prob_from_log(const AcceptanceRule& rule, double log_ratio) {
  static const double kMaxLogRatio = std::log(kMaxRatio);
  return accept_prob(rule, std::exp(std::min(log_ratio, kMaxLogRatio)));
}

// --- kernel handle ----------------------------------------------------------

MarkovKernel::MarkovKernel(std::shared_ptr<const Impl> impl, KernelTraits traits, std::string name)
    : impl_{std::move(impl)}, traits_{std::move(traits)}, name_{std::move(name)} {
  if (traits_.spectral_radius_bound) {
    const double s = *traits_.spectral_radius_bound;
    if (!(s >= 0.0 && s < 1.0)) {
      throw std::invalid_argument("spectral radius bound must lie in [0, 1)");
    }
    traits_.geometrically_ergodic = Tri::yes;
  }
}

// --- contracting normals ----------------------------------------------------

namespace {

class ContractingNormal final : public MarkovKernel::Impl {
 public:
  explicit ContractingNormal(double theta) : theta_{theta}, sd_{std::sqrt(1.0 - theta * theta)} {}

  double step(double x, ChainContext& ctx) const override {
    return theta_ * x + sd_ * standard_normal(ctx.rng.moves);
  }
  double draw_stationary(ChainContext& ctx) const override { return standard_normal(ctx.rng.moves); }

 private:
  double theta_;
  double sd_;
};

}  // namespace

MarkovKernel contracting_normal(double theta) {
  if (!(std::fabs(theta) < 1.0)) {
    throw std::domain_error("contracting normals need |theta| < 1");
  }
  KernelTraits traits;
  traits.reversible = true;
  traits.geometrically_ergodic = Tri::yes;
  traits.spectral_radius_bound = std::fabs(theta);
  traits.positive_operator = theta >= 0.0 ? Tri::yes : Tri::no;
  return MarkovKernel{std::make_shared<ContractingNormal>(theta), traits, "cn:" + format_real(theta)};
}

// --- Metropolis-type kernels ------------------------------------------------

namespace {

template <class Target, class Increment>
class RandomWalk final : public MarkovKernel::Impl {
 public:
  RandomWalk(Target target, Increment increment, AcceptanceRule rule, StationarySampler stationary)
      : target_{std::move(target)},
        increment_{std::move(increment)},
        rule_{rule},
        stationary_{std::move(stationary)} {}

  double step(double x, ChainContext& ctx) const override {
    const double y = x + increment_(ctx.rng.moves.uniform());
    const double u = ctx.rng.moves.uniform();
    const double log_x = target_(x);
    if (!std::isfinite(log_x)) {
      throw std::runtime_error("log target is not finite at the current state " + format_real(x));
    }
    const double log_y = target_(y);
    if (std::isnan(log_y)) {
      throw std::runtime_error("log target is NaN at proposal " + format_real(y));
    }
    ++ctx.counters.proposals;
    if (u < accept_prob_from_log(rule_, log_y - log_x)) {
      ++ctx.counters.accepted;
      return y;
    }
    return x;
  }

  double draw_stationary(ChainContext& ctx) const override {
    if (!stationary_) throw std::logic_error("kernel has no stationary sampler");
    return stationary_(ctx.rng.moves);
  }

 private:
  Target target_;
  Increment increment_;
  AcceptanceRule rule_;
  StationarySampler stationary_;
};

struct StandardNormalLogDensity {
  double operator()(double x) const noexcept { return -0.5 * x * x; }
};

struct UniformIncrement {
  double half_width;
  double operator()(double u) const noexcept { return half_width * (2.0 * u - 1.0); }
};

KernelTraits metropolis_traits() {
  KernelTraits traits;
  traits.reversible = true;
  traits.geometrically_ergodic = Tri::undetermined;
  traits.positive_operator = Tri::undetermined;
  return traits;
}

}  // namespace

IncrementQuantile uniform_increment(double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::domain_error("increment half width must be positive and finite");
  }
  return UniformIncrement{half_width};
}

MarkovKernel metropolis_like(LogDensity log_target, IncrementQuantile increment, AcceptanceRule rule,
                             StationarySampler stationary, std::string name) {
  if (!log_target || !increment) throw std::invalid_argument("metropolis_like needs a target and a proposal");
  using Impl = RandomWalk<LogDensity, IncrementQuantile>;
  return MarkovKernel{std::make_shared<Impl>(std::move(log_target), std::move(increment), rule, std::move(stationary)),
                      metropolis_traits(), std::move(name)};
}

MarkovKernel random_walk_metropolis(AcceptanceRule rule, double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::domain_error("increment half width must be positive and finite");
  }
  std::string name = "rwm:" + rule.name();
  if (half_width != kDefaultIncrementHalfWidth) name += ":h=" + format_real(half_width);
  using Impl = RandomWalk<StandardNormalLogDensity, UniformIncrement>;
  StationarySampler stationary = [](CounterStream& s) { return standard_normal(s); };
  return MarkovKernel{std::make_shared<Impl>(StandardNormalLogDensity{}, UniformIncrement{half_width}, rule,
                                             std::move(stationary)),
                      metropolis_traits(), std::move(name)};
}

// --- time sampling ----------------------------------------------------------

namespace {

class TimeSampled final : public MarkovKernel::Impl {
 public:
  TimeSampled(MarkovKernel base, SamplingLaw law) : base_{std::move(base)}, law_{std::move(law)} {}

  double step(double x, ChainContext& ctx) const override {
    const std::uint32_t k = law_.sample(ctx.rng.clock);
    for (std::uint32_t i = 0; i < k; ++i) x = base_.step(x, ctx);
    return x;
  }
  double draw_stationary(ChainContext& ctx) const override { return base_.draw_stationary(ctx); }

 private:
  MarkovKernel base_;
  SamplingLaw law_;
};

}  // namespace

MarkovKernel time_sampled(const MarkovKernel& base, const SamplingLaw& law) {
  const KernelTraits& b = base.traits();
  KernelTraits traits;
  traits.reversible = b.reversible;
  traits.positive_operator =
      (b.positive_operator == Tri::yes || law.supported_on_even()) ? Tri::yes : Tri::undetermined;
  traits.geometrically_ergodic = Tri::undetermined;
  if (b.spectral_radius_bound) {
    // |G(x)| <= G(|x|) <= G(s_P) on the spectrum.
    const double bound = law.pgf(*b.spectral_radius_bound);
    if (bound < 1.0) traits.spectral_radius_bound = bound;
  }
  return MarkovKernel{std::make_shared<TimeSampled>(base, law), traits, base.name() + "|mu=" + law.spec()};
}

// --- counterexample ---------------------------------------------------------

double regeneration_function(double x) noexcept { return std::sqrt(1.0 - std::fabs(x)); }

double regeneration_probability(double x, int power) noexcept {
  const double s = regeneration_function(x);
  return power == 1 ? s : 2.0 * s - s * s;
}

double counterexample_stationary_density(double x, int power) noexcept {
  if (!(std::fabs(x) < 1.0)) return 0.0;
  if (power == 1) return 0.25 / regeneration_function(x);
  return 1.0 / (4.0 * std::log(2.0) * regeneration_probability(x, 2));
}

double open_symmetric_uniform(CounterStream& stream) noexcept {
  for (;;) {
    const std::uint64_t k = stream.next_u64() >> 32;
    if (k != 0) return static_cast<double>(k) * 0x1.0p-31 - 1.0;
  }
}

namespace {

void check_power(int power) {
  if (power != 1 && power != 2) throw std::domain_error("counterexample power must be 1 or 2");
}

class Counterexample final : public MarkovKernel::Impl {
 public:
  explicit Counterexample(int power) : power_{power} {}

  double step(double x, ChainContext& ctx) const override {
    const double fresh = open_symmetric_uniform(ctx.rng.moves);
    const double u = ctx.rng.moves.uniform();
    if (u < regeneration_probability(x, power_)) return fresh;
    return power_ == 1 ? -x : x;
  }

  // With v = s(x): v has density 1 on (0,1) for power 1 and 2 / ((2 - v) 2 ln 2)
  // for power 2; |x| = 1 - v^2 and the sign is symmetric.
  double draw_stationary(ChainContext& ctx) const override {
    for (;;) {
      const double u = ctx.rng.moves.open_uniform();
      const double sign = ctx.rng.moves.uniform() < 0.5 ? -1.0 : 1.0;
      const double v = power_ == 1 ? u : 2.0 * (1.0 - std::exp2(-u));
      const double magnitude = 1.0 - v * v;
      if (magnitude < 1.0) return sign * magnitude;
    }
  }

 private:
  int power_;
};

}  // namespace

MarkovKernel counterexample_kernel(int power) {
  check_power(power);
  KernelTraits traits;
  traits.reversible = true;
  traits.geometrically_ergodic = Tri::no;
  traits.positive_operator = Tri::undetermined;
  return MarkovKernel{std::make_shared<Counterexample>(power), traits, "counter:" + std::to_string(power)};
}

SplitChain::SplitChain(int power, ChainRng rng) : power_{power}, rng_{rng} {
  check_power(power);
  state_.x = open_symmetric_uniform(rng_.moves);
  draw_gamma();
}

SplitChain::SplitChain(int power, ChainRng rng, double x0) : power_{power}, rng_{rng} {
  check_power(power);
  if (!(std::fabs(x0) <= 1.0)) throw std::domain_error("split chain start must lie in [-1, 1]");
  state_.x = x0;
  draw_gamma();
}

void SplitChain::draw_gamma() {
  state_.gamma = rng_.moves.uniform() < regeneration_probability(state_.x, power_) ? 1 : 0;
}

const SplitChainState& SplitChain::advance() {
  const double fresh = open_symmetric_uniform(rng_.moves);
  if (state_.gamma == 1) {
    state_.x = fresh;
  } else if (power_ == 1) {
    state_.x = -state_.x;
  }
  draw_gamma();
  ++time_;
  return state_;
}

Tour SplitChain::next_tour() {
  Tour tour{0, 0.0, state_.x};
  for (;;) {
    tour.f_sum += state_.x;
    const bool regenerated = state_.gamma == 1;
    advance();
    if (regenerated) return tour;
    ++tour.tau;
  }
}

SplitChain counterexample_split_chain(int power, std::uint64_t seed, std::uint64_t chain_index) {
  return SplitChain{power, ChainRng{seed, chain_index}};
}

}  // namespace tsmc
