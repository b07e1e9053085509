#include "tsmc/sampling_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsmc/spec_strings.hpp"

namespace tsmc {

namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr double kCdfTieTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<double> cumulate(const std::vector<double>& pmf) {
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    acc += pmf[k];
    cdf[k] = std::min(acc, 1.0);
  }
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

std::string to_string(Tri t) {
  switch (t) {
    case Tri::yes:
      return "yes";
    case Tri::no:
      return "no";
    case Tri::undetermined:
      break;
  }
  return "undetermined";
}

std::uint32_t poisson_support_bound(std::uint32_t shift, double rate) {
  return shift + static_cast<std::uint32_t>(std::ceil(rate + 40.0 * std::sqrt(rate) + 40.0));
}

SamplingLaw::SamplingLaw(Kind kind, std::vector<double> cdf, std::string spec)
    : kind_{std::move(kind)}, cdf_{std::move(cdf)}, spec_{std::move(spec)} {}

SamplingLaw SamplingLaw::point_mass(std::uint32_t k) {
  std::vector<double> pmf(k + 1, 0.0);
  pmf[k] = 1.0;
  return SamplingLaw{law::PointMass{k}, cumulate(pmf), "point:" + std::to_string(k)};
}

SamplingLaw SamplingLaw::lazy(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::domain_error("lazy sampling law needs 0 <= eps <= 1");
  }
  return SamplingLaw{law::LazyBernoulli{eps}, cumulate({eps, 1.0 - eps}),
                     "lazy:" + format_real(eps)};
}

SamplingLaw SamplingLaw::shifted_poisson(std::uint32_t shift, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("shifted Poisson law needs a finite rate >= 0");
  }
  const std::uint32_t bound = poisson_support_bound(shift, rate);
  std::vector<double> pmf(bound + 1, 0.0);
  if (rate == 0.0) {
    pmf[shift] = 1.0;
  } else {
    const double log_rate = std::log(rate);
    for (std::uint32_t j = 0; shift + j <= bound; ++j) {
      pmf[shift + j] = std::exp(-rate + j * log_rate - std::lgamma(j + 1.0));
    }
  }
  return SamplingLaw{law::ShiftedPoisson{shift, rate}, cumulate(pmf),
                     "shiftpois:" + std::to_string(shift) + ":" + format_real(rate)};
}

SamplingLaw SamplingLaw::finite_support(std::vector<std::pair<std::uint32_t, double>> pmf) {
  if (pmf.empty()) throw std::invalid_argument("pmf must have at least one entry");
  std::sort(pmf.begin(), pmf.end());
  double total = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const auto [k, mass] = pmf[i];
    if (!std::isfinite(mass) || mass < 0.0) {
      throw std::invalid_argument("pmf mass at k=" + std::to_string(k) + " is not a finite nonnegative number");
    }
    if (i > 0 && pmf[i - 1].first == k) {
      throw std::invalid_argument("pmf lists k=" + std::to_string(k) + " more than once");
    }
    total += mass;
  }
  if (std::fabs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument("pmf masses sum to " + format_real(total) + ", not 1");
  }

  std::string spec = "pmf:";
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (i > 0) spec += ',';
    spec += std::to_string(pmf[i].first) + "=" + format_real(pmf[i].second);
  }
  std::erase_if(pmf, [](const auto& entry) { return entry.second == 0.0; });

  std::vector<double> table(pmf.back().first + 1, 0.0);
  for (const auto& [k, mass] : pmf) table[k] = mass;
  return SamplingLaw{law::FiniteSupport{std::move(pmf)}, cumulate(table), std::move(spec)};
}

double SamplingLaw::pgf(double x) const {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::domain_error("pgf argument must lie in [-1, 1]");
  }
  if (x == 1.0) return 1.0;
  if (x == -1.0) return 1.0 - 2.0 * odd_mass();
  return std::visit(
      overloaded{
          [x](const law::PointMass& p) { return std::pow(x, static_cast<double>(p.k)); },
          [x](const law::LazyBernoulli& l) { return l.eps + (1.0 - l.eps) * x; },
          [x](const law::ShiftedPoisson& s) {
            return std::pow(x, static_cast<double>(s.shift)) * std::exp(s.rate * (x - 1.0));
          },
          [x](const law::FiniteSupport& f) {
            double sum = 0.0;
            for (const auto& [k, mass] : f.pmf) sum += mass * std::pow(x, static_cast<double>(k));
            return sum;
          },
      },
      kind_);
}

double SamplingLaw::mass_at_zero() const noexcept {
  return std::visit(overloaded{
                        [](const law::PointMass& p) { return p.k == 0 ? 1.0 : 0.0; },
                        [](const law::LazyBernoulli& l) { return l.eps; },
                        [](const law::ShiftedPoisson& s) { return s.shift == 0 ? std::exp(-s.rate) : 0.0; },
                        [](const law::FiniteSupport& f) {
                          return f.pmf.front().first == 0 ? f.pmf.front().second : 0.0;
                        },
                    },
                    kind_);
}

double SamplingLaw::odd_mass() const noexcept {
  return std::visit(overloaded{
                        [](const law::PointMass& p) { return p.k % 2 == 1 ? 1.0 : 0.0; },
                        [](const law::LazyBernoulli& l) { return 1.0 - l.eps; },
                        [](const law::ShiftedPoisson& s) {
                          // e^{-r} cosh r = (1 + e^{-2r}) / 2 collects the even j.
                          const double e2 = std::exp(-2.0 * s.rate);
                          return s.shift % 2 == 1 ? 0.5 * (1.0 + e2) : 0.5 * (1.0 - e2);
                        },
                        [](const law::FiniteSupport& f) {
                          double sum = 0.0;
                          for (const auto& [k, mass] : f.pmf) {
                            if (k % 2 == 1) sum += mass;
                          }
                          return sum;
                        },
                    },
                    kind_);
}

double SamplingLaw::cdf(std::uint32_t k) const noexcept {
  return k < cdf_.size() ? cdf_[k] : 1.0;
}

std::vector<double> SamplingLaw::pmf_table() const {
  std::vector<double> pmf(cdf_.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < cdf_.size(); ++k) {
    pmf[k] = cdf_[k] - prev;
    prev = cdf_[k];
  }
  return pmf;
}

std::uint32_t SamplingLaw::sample(CounterStream& stream) const noexcept {
  const double u = stream.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

Tri dominates(const SamplingLaw& a, const SamplingLaw& b) {
  const std::uint32_t bound = std::max(a.support_bound(), b.support_bound());
  bool a_above = false;
  bool b_above = false;
  for (std::uint32_t k = 0; k <= bound; ++k) {
    const double diff = a.cdf(k) - b.cdf(k);
    if (diff > kCdfTieTolerance) a_above = true;
    if (diff < -kCdfTieTolerance) b_above = true;
  }
  if (!a_above) return Tri::yes;
  if (!b_above) return Tri::no;
  return Tri::undetermined;
}

}  // namespace tsmc
