#ifndef TSMC_ESTIMATORS_HPP
#define TSMC_ESTIMATORS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsmc/kernels.hpp"

namespace tsmc {

/// Values f(X_0), ..., f(X_{n-1}) of one chain.
struct ChainTrace {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string kernel_id;
};

struct EstimateReport {
  double sigma2_hat = 0.0;
  std::uint64_t n = 0;
  std::uint64_t batch_size = 0;
  std::uint64_t batch_count = 0;
  double std_error = 0.0;
  std::string estimator;
};

inline constexpr std::uint64_t kMinBatchMeansLength = 100;
inline constexpr std::size_t kMinRegenerativeTours = 30;

/// One-pass batch means with batch size b = floor(sqrt(n)) and a = floor(n / b)
/// batches; the trailing n - a b values are ignored. Memory is O(a).
///
///   sigma2_hat = b / (a - 1) * sum_j (Ybar_j - Ibar)^2
///   std_error  = sigma2_hat * sqrt(2 / (a - 1))
class BatchMeansAccumulator {
 public:
  /// Throws PreconditionError if n < 100.
  explicit BatchMeansAccumulator(std::uint64_t n);

  /// Throws PreconditionError on a non-finite value or past n values.
  void push(double value);
  std::uint64_t count() const noexcept { return count_; }
  /// Throws std::logic_error before all n values were pushed.
  EstimateReport finish() const;

 private:
  std::uint64_t n_;
  std::uint64_t batch_size_;
  std::uint64_t batch_count_;
  std::uint64_t count_ = 0;
  std::uint64_t in_batch_ = 0;
  double batch_sum_ = 0.0;
  std::vector<double> batch_means_;
};

EstimateReport batch_means(std::span<const double> values);
EstimateReport batch_means(const ChainTrace& trace);

/// s_weight * mean(f_sum^2) over the tours; std_error from the sample
/// variance of f_sum^2. Throws PreconditionError with fewer than 30 tours.
EstimateReport regenerative_variance(std::span<const Tour> tours, double s_weight);

/// Finite-sample check for an infinite second moment of the tour sums: true
/// when mean(f_sum^2) over the 4N tours exceeds 1.5 times the mean over the N
/// tours. Throws std::invalid_argument unless sizes are N and 4N with N >= 1000.
bool diverging_second_moment(std::span<const Tour> tours_n, std::span<const Tour> tours_4n);

/// Mean of f_sum^2 over the tours (0 for an empty span).
double mean_squared_tour_sum(std::span<const Tour> tours);

/// Constants multiplying the tour second moment for the counterexample chain,
/// with pi(x) = 1 / (s(x) Z) on [-1, 1].
struct SplitChainWeights {
  double normalizer;  // Z = integral of 1 / s
  double power1;      // integral of s pi
  double power2;      // integral of (2 s - s^2) pi
};

/// Composite midpoint quadrature in v = s(x) (x = +-(1 - v^2), dx = 2 v dv),
/// which removes the endpoint singularity of pi.
SplitChainWeights s_weights(std::uint64_t intervals = 1'000'000);

}  // namespace tsmc

#endif  // TSMC_ESTIMATORS_HPP
