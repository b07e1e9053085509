#include "tsmc/spectral_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsmc/spec_strings.hpp"

namespace tsmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double variance_integrand(double g) { return g >= 1.0 ? kInf : (1.0 + g) / (1.0 - g); }

}  // namespace

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms) : atoms_{std::move(atoms)} {
  if (atoms_.empty()) throw std::invalid_argument("spectral measure needs at least one atom");
  for (const Atom& a : atoms_) {
    if (!(a.location >= -1.0 && a.location <= 1.0)) {
      throw std::invalid_argument("spectral atom location " + format_real(a.location) + " is outside [-1, 1]");
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw std::invalid_argument("spectral atom mass must be positive and finite");
    }
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].location == atoms_[i - 1].location) {
      throw std::invalid_argument("spectral atom locations must be distinct");
    }
  }
}

double SpectralMeasure::total_mass() const noexcept {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  return total;
}

double kv_variance(const SpectralMeasure& measure) {
  double sum = 0.0;
  for (const auto& a : measure.atoms()) sum += a.mass * variance_integrand(a.location);
  return sum;
}

double time_sampled_variance(const SpectralMeasure& measure, const SamplingLaw& law) {
  double sum = 0.0;
  for (const auto& a : measure.atoms()) sum += a.mass * variance_integrand(law.pgf(a.location));
  return sum;
}

double lazy_variance(double sigma2_base, double sigma2_f, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("laziness eps must lie in (0, 1)");
  return sigma2_base / (1.0 - eps) + eps * sigma2_f / (1.0 - eps);
}

SpectralMeasure cn_spectral_measure(double theta) {
  if (!(std::fabs(theta) < 1.0)) throw std::domain_error("contracting normals need |theta| < 1");
  return SpectralMeasure{{{theta, 1.0}}};
}

std::string to_string(CltCertificate::Verdict verdict) {
  switch (verdict) {
    case CltCertificate::Verdict::guaranteed_by_odd_mass:
      return "guaranteed_by_odd_mass";
    case CltCertificate::Verdict::guaranteed_by_geometric_ergodicity:
      return "guaranteed_by_geometric_ergodicity";
    case CltCertificate::Verdict::no_guarantee:
      break;
  }
  return "no_guarantee";
}

CltCertificate clt_certificate(const SamplingLaw& law, const MarkovKernel& kernel) {
  if (!kernel.traits().reversible) {
    throw std::invalid_argument("the time-sampling CLT conditions need a reversible kernel");
  }
  const double odd = law.odd_mass();
  if (odd > 0.0) {
    return {CltCertificate::Verdict::guaranteed_by_odd_mass,
            "odd mass of " + law.spec() + " is " + format_real(odd) + " > 0"};
  }
  const double at_zero = law.mass_at_zero();
  if (at_zero < 1.0 && kernel.traits().geometrically_ergodic == Tri::yes) {
    return {CltCertificate::Verdict::guaranteed_by_geometric_ergodicity,
            "mass at zero " + format_real(at_zero) + " < 1 and " + kernel.name() + " is geometrically ergodic"};
  }
  std::string why = "odd mass is 0";
  why += at_zero >= 1.0 ? " and the law never moves" : " and " + kernel.name() + " is not known to be geometrically ergodic";
  return {CltCertificate::Verdict::no_guarantee, why};
}

}  // namespace tsmc
