#include "tsmc/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "tsmc/errors.hpp"

namespace tsmc {

BatchMeansAccumulator::BatchMeansAccumulator(std::uint64_t n) : n_{n} {
  if (n < kMinBatchMeansLength) {
    throw PreconditionError("batch means needs at least " + std::to_string(kMinBatchMeansLength) +
                            " values, got " + std::to_string(n));
  }
  batch_size_ = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (batch_size_ * batch_size_ > n) --batch_size_;
  while ((batch_size_ + 1) * (batch_size_ + 1) <= n) ++batch_size_;
  batch_count_ = n / batch_size_;
  batch_means_.reserve(batch_count_);
}

void BatchMeansAccumulator::push(double value) {
  if (count_ >= n_) throw PreconditionError("batch means received more than the declared " + std::to_string(n_) + " values");
  if (!std::isfinite(value)) throw PreconditionError("trace value " + std::to_string(count_) + " is not finite");
  ++count_;
  if (batch_means_.size() == batch_count_) return;
  batch_sum_ += value;
  if (++in_batch_ == batch_size_) {
    batch_means_.push_back(batch_sum_ / static_cast<double>(batch_size_));
    batch_sum_ = 0.0;
    in_batch_ = 0;
  }
}

EstimateReport BatchMeansAccumulator::finish() const {
  if (count_ != n_) throw std::logic_error("batch means finished before all values were pushed");
  const double a = static_cast<double>(batch_count_);
  double grand = 0.0;
  for (double m : batch_means_) grand += m;
  grand /= a;
  double ss = 0.0;
  for (double m : batch_means_) ss += (m - grand) * (m - grand);

  EstimateReport report;
  report.sigma2_hat = static_cast<double>(batch_size_) / (a - 1.0) * ss;
  report.n = n_;
  report.batch_size = batch_size_;
  report.batch_count = batch_count_;
  report.std_error = report.sigma2_hat * std::sqrt(2.0 / (a - 1.0));
  report.estimator = "batch_means";
  return report;
}

EstimateReport batch_means(std::span<const double> values) {
  BatchMeansAccumulator acc{values.size()};
  for (double v : values) acc.push(v);
  return acc.finish();
}

EstimateReport batch_means(const ChainTrace& trace) { return batch_means(std::span<const double>{trace.values}); }

double mean_squared_tour_sum(std::span<const Tour> tours) {
  if (tours.empty()) return 0.0;
  double sum = 0.0;
  for (const Tour& t : tours) sum += t.f_sum * t.f_sum;
  return sum / static_cast<double>(tours.size());
}

EstimateReport regenerative_variance(std::span<const Tour> tours, double s_weight) {
  if (tours.size() < kMinRegenerativeTours) {
    throw PreconditionError("regenerative estimator needs at least " + std::to_string(kMinRegenerativeTours) +
                            " tours, got " + std::to_string(tours.size()));
  }
  const double count = static_cast<double>(tours.size());
  const double mean = mean_squared_tour_sum(tours);
  double ss = 0.0;
  for (const Tour& t : tours) {
    const double d = t.f_sum * t.f_sum - mean;
    ss += d * d;
  }
  EstimateReport report;
  report.sigma2_hat = s_weight * mean;
  report.n = tours.size();
  report.std_error = s_weight * std::sqrt(ss / (count - 1.0) / count);
  report.estimator = "regenerative";
  return report;
}

bool diverging_second_moment(std::span<const Tour> tours_n, std::span<const Tour> tours_4n) {
  if (tours_n.size() < 1000 || tours_4n.size() != 4 * tours_n.size()) {
    throw std::invalid_argument("divergence check needs tour collections of sizes N >= 1000 and 4N");
  }
  return mean_squared_tour_sum(tours_4n) > 1.5 * mean_squared_tour_sum(tours_n);
}

SplitChainWeights s_weights(std::uint64_t intervals) {
  // Integrands are even in x, so integrate over x in (0, 1) and double.
  const double h = 1.0 / static_cast<double>(intervals);
  double inv_s = 0.0;
  double s_term = 0.0;
  double s2_term = 0.0;
  for (std::uint64_t i = 0; i < intervals; ++i) {
    const double v = (static_cast<double>(i) + 0.5) * h;
    const double x = 1.0 - v * v;
    const double jacobian = 2.0 * v;
    const double s = regeneration_function(x);
    inv_s += jacobian / s;
    s_term += jacobian * s / s;
    s2_term += jacobian * (2.0 * s - s * s) / s;
  }
  SplitChainWeights w;
  w.normalizer = 2.0 * h * inv_s;
  w.power1 = 2.0 * h * s_term / w.normalizer;
  w.power2 = 2.0 * h * s2_term / w.normalizer;
  return w;
}

}  // namespace tsmc
