#ifndef TSMC_SPECTRAL_ORACLE_HPP
#define TSMC_SPECTRAL_ORACLE_HPP

#include <string>
#include <vector>

#include "tsmc/kernels.hpp"
#include "tsmc/sampling_law.hpp"

namespace tsmc {

/// Spectral measure of a centered f under a reversible kernel, as a finite
/// list of atoms on [-1, 1]. Total mass equals pi(f^2).
class SpectralMeasure {
 public:
  struct Atom {
    double location;
    double mass;
  };

  /// Throws std::invalid_argument on an empty list, a location outside
  /// [-1, 1], a non-positive mass, or repeated locations.
  explicit SpectralMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double total_mass() const noexcept;

 private:
  std::vector<Atom> atoms_;
};

/// sum m_i (1 + x_i) / (1 - x_i); +infinity when an atom sits at 1.
double kv_variance(const SpectralMeasure& measure);

/// sum m_i (1 + G(x_i)) / (1 - G(x_i)); +infinity when G(x_i) = 1 for some atom.
double time_sampled_variance(const SpectralMeasure& measure, const SamplingLaw& law);

/// Asymptotic variance of the eps-lazy chain from the base asymptotic
/// variance and the stationary variance. Throws std::domain_error unless 0 < eps < 1.
double lazy_variance(double sigma2_base, double sigma2_f, double eps);

/// Spectral measure of f(x) = x under contracting normals: a unit atom at theta.
SpectralMeasure cn_spectral_measure(double theta);

/// Which sufficient condition for the time-sampled CLT (and for propagation
/// of variance bounding) applies. `no_guarantee` means neither condition
/// holds; it does not assert that the CLT fails.
struct CltCertificate {
  enum class Verdict { guaranteed_by_odd_mass, guaranteed_by_geometric_ergodicity, no_guarantee };

  Verdict verdict;
  std::string details;
};

std::string to_string(CltCertificate::Verdict verdict);

/// Throws std::invalid_argument if the kernel is not reversible.
CltCertificate clt_certificate(const SamplingLaw& law, const MarkovKernel& kernel);

}  // namespace tsmc

#endif  // TSMC_SPECTRAL_ORACLE_HPP
