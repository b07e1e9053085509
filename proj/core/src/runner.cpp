#include "tsmc/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>
#include <thread>

#include "tsmc/errors.hpp"
#include "tsmc/spectral_oracle.hpp"

namespace tsmc {

namespace {

// Runs fn(0..count-1) on up to hardware_concurrency threads. Results are
// written by index, so completion order never matters.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(count);
  auto body = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::atomic<std::size_t> next{0};
  if (workers <= 1) {
    body(next);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back([&] { body(next); });
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ChainJob {
  std::string id;
  KernelSpec kernel;
  SamplingLaw law;
  std::uint64_t n;
  std::uint64_t burn_in;
  std::uint64_t seed;
  std::uint32_t replicate;
  EstimatorKind estimator;
};

const SplitChainWeights& cached_weights() {
  static const SplitChainWeights weights = s_weights();
  return weights;
}

ResultRow base_row(const ChainJob& job) {
  ResultRow row;
  row.experiment_id = job.id;
  row.kernel = job.kernel.text;
  row.mu = job.law.spec();
  row.params = job.kernel.params();
  row.n = job.n;
  row.seed = job.seed;
  row.estimator = to_string(job.estimator);
  row.oracle_value = oracle_value(job.kernel, job.law);
  return row;
}

RunOutcome run_batch_means(const ChainJob& job) {
  const auto start = std::chrono::steady_clock::now();
  const MarkovKernel base = job.kernel.build();
  const bool identity_law = job.law.spec() == "point:1";
  const MarkovKernel kernel = identity_law ? base : time_sampled(base, job.law);

  ChainContext ctx{job.seed, chain_index(job.kernel.text, job.law.spec(), job.replicate)};
  double x = kernel.draw_stationary(ctx);
  for (std::uint64_t i = 0; i < job.burn_in; ++i) x = kernel.step(x, ctx);
  ctx.counters = {};

  BatchMeansAccumulator values{job.n};
  BatchMeansAccumulator squares{job.n};
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t i = 0; i < job.n; ++i) {
    values.push(x);
    squares.push(x * x);
    sum += x;
    sum_sq += x * x;
    if (i + 1 < job.n) x = kernel.step(x, ctx);
  }

  RunOutcome out;
  out.row = base_row(job);
  const EstimateReport report = values.finish();
  out.row.sigma2_hat = report.sigma2_hat;
  out.row.std_error = report.std_error;

  const double n = static_cast<double>(job.n);
  out.summary.mean = sum / n;
  out.summary.variance = sum_sq / n - out.summary.mean * out.summary.mean;
  out.summary.variance_se = std::sqrt(squares.finish().sigma2_hat / n);
  out.summary.acceptance_rate = ctx.counters.acceptance_rate();
  out.summary.degenerate_proposals = ctx.counters.degenerate;
  out.row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunOutcome run_regenerative(const ChainJob& job) {
  const auto start = std::chrono::steady_clock::now();
  SplitChain chain{job.kernel.power, ChainRng{job.seed, chain_index(job.kernel.text, job.law.spec(), job.replicate)}};
  std::vector<Tour> tours;
  tours.reserve(job.n);
  for (std::uint64_t i = 0; i < job.n; ++i) tours.push_back(chain.next_tour());
  const auto& w = cached_weights();
  const EstimateReport report = regenerative_variance(tours, job.kernel.power == 1 ? w.power1 : w.power2);

  RunOutcome out;
  out.row = base_row(job);
  out.row.sigma2_hat = report.sigma2_hat;
  out.row.std_error = report.std_error;
  out.row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<RunOutcome> run_jobs(const std::vector<ChainJob>& jobs) {
  std::vector<RunOutcome> outcomes(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    outcomes[i] = jobs[i].estimator == EstimatorKind::regenerative ? run_regenerative(jobs[i]) : run_batch_means(jobs[i]);
  });
  return outcomes;
}

std::string two_digits(std::size_t i) { return (i < 10 ? "0" : "") + std::to_string(i); }

std::string_view strip(std::string_view s) {
  constexpr std::string_view ws = " \t\r";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  return s.substr(begin, s.find_last_not_of(ws) - begin + 1);
}

struct PooledCell {
  double estimate = 0.0;
  double se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
};

PooledCell pool(const std::vector<RunOutcome>& outcomes, std::size_t cell, std::uint32_t replicates) {
  PooledCell p;
  double se2 = 0.0;
  double vse2 = 0.0;
  for (std::uint32_t r = 0; r < replicates; ++r) {
    const auto& o = outcomes[cell * replicates + r];
    p.estimate += o.row.sigma2_hat;
    se2 += o.row.std_error * o.row.std_error;
    p.variance += o.summary.variance;
    vse2 += o.summary.variance_se * o.summary.variance_se;
  }
  const double count = replicates;
  p.estimate /= count;
  p.variance /= count;
  p.se = std::sqrt(se2) / count;
  p.variance_se = std::sqrt(vse2) / count;
  return p;
}

}  // namespace

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::regenerative ? "regenerative" : "batch_means";
}

void ExperimentConfig::validate() const {
  const KernelSpec k = parse_kernel(kernel);
  const SamplingLaw law = parse_law(mu);
  if (!(n > burn_in)) throw ConfigError("n", "n must exceed burn_in");
  if (replicates < 1) throw ConfigError("replicates", "replicates must be at least 1");
  if (estimator == EstimatorKind::regenerative) {
    if (k.family != KernelSpec::Family::counterexample) {
      throw ConfigError("estimator", "the regenerative estimator needs a counter:1 or counter:2 kernel");
    }
    if (law.spec() != "point:1") throw ConfigError("mu", "the regenerative estimator does not support time sampling");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", "expected 'key = value'", line_no);
    const std::string key{strip(line.substr(0, eq))};
    const std::string_view value = strip(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "key given twice", line_no);
    try {
      if (key == "id") {
        config.id = value;
      } else if (key == "kernel") {
        config.kernel = parse_kernel(value).text;
      } else if (key == "mu") {
        config.mu = parse_law(value).spec();
      } else if (key == "n") {
        config.n = parse_uint(value, key);
      } else if (key == "burn_in") {
        config.burn_in = parse_uint(value, key);
      } else if (key == "seed") {
        config.seed = parse_uint(value, key);
      } else if (key == "replicates") {
        config.replicates = static_cast<std::uint32_t>(parse_uint(value, key, UINT32_MAX));
      } else if (key == "estimator") {
        if (value == "batch_means") {
          config.estimator = EstimatorKind::batch_means;
        } else if (value == "regenerative") {
          config.estimator = EstimatorKind::regenerative;
        } else {
          throw ConfigError(key, "expected batch_means or regenerative");
        }
      } else if (key == "output") {
        config.output = value;
      } else {
        throw ConfigError(key, "unknown key");
      }
    } catch (const ConfigError& e) {
      if (e.line() > 0) throw;
      throw ConfigError(e.field().empty() ? key : e.field(), e.message(), line_no);
    }
  }
  if (config.kernel.empty()) throw ConfigError("kernel", "missing required key");
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(in);
}

std::optional<double> oracle_value(const KernelSpec& kernel, const SamplingLaw& law) {
  if (kernel.family != KernelSpec::Family::contracting_normal) return std::nullopt;
  return time_sampled_variance(cn_spectral_measure(kernel.theta), law);
}

std::uint64_t chain_index(const std::string& kernel, const std::string& mu, std::uint32_t replicate) {
  return mix64(fnv1a64(kernel + "|" + mu)) + replicate;
}

std::vector<RunOutcome> run(const ExperimentConfig& config) {
  config.validate();
  const KernelSpec kernel = parse_kernel(config.kernel);
  const SamplingLaw law = parse_law(config.mu);
  std::vector<ChainJob> jobs;
  for (std::uint32_t r = 0; r < config.replicates; ++r) {
    jobs.push_back({config.id + ".r" + std::to_string(r), kernel, law, config.n, config.burn_in, config.seed, r,
                    config.estimator});
  }
  return run_jobs(jobs);
}

std::vector<ResultRow> rows(const std::vector<RunOutcome>& outcomes) {
  std::vector<ResultRow> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.row);
  return out;
}

std::vector<RunOutcome> table1(const TableOptions& options) {
  struct Column {
    const char* label;
    const char* mu;
  };
  constexpr Column columns[] = {
      {"CN", "point:1"}, {"LCN", "lazy:0.5"}, {"TSCN1", "shiftpois:1:1"}, {"TSCN2", "shiftpois:1:5"}};
  std::vector<ChainJob> jobs;
  std::size_t cell = 0;
  for (const char* theta : {"0.9", "-0.9"}) {
    const KernelSpec kernel = parse_kernel(std::string{"cn:"} + theta);
    for (const Column& c : columns) {
      ++cell;
      for (std::uint32_t r = 0; r < options.replicates; ++r) {
        jobs.push_back({"table1." + two_digits(cell) + "." + c.label + ".r" + std::to_string(r), kernel,
                        parse_law(c.mu), options.n, 0, options.seed, r, EstimatorKind::batch_means});
      }
    }
  }
  return run_jobs(jobs);
}

Table2Report table2(const TableOptions& options) {
  struct Column {
    const char* label;
    const char* kernel;
  };
  constexpr Column columns[] = {{"MH", "rwm:mh"}, {"Barker", "rwm:barker"}, {"LazyMH", "rwm:lazy:0.5"}};
  const std::string width =
      options.half_width == kDefaultIncrementHalfWidth ? "" : ":h=" + format_real(options.half_width);
  std::vector<ChainJob> jobs;
  std::size_t cell = 0;
  for (const Column& c : columns) {
    ++cell;
    for (std::uint32_t r = 0; r < options.replicates; ++r) {
      jobs.push_back({"table2." + two_digits(cell) + "." + c.label + ".r" + std::to_string(r), parse_kernel(c.kernel + width),
                      SamplingLaw::point_mass(1), options.n, 0, options.seed, r, EstimatorKind::batch_means});
    }
  }

  Table2Report report;
  report.outcomes = run_jobs(jobs);
  const PooledCell mh = pool(report.outcomes, 0, options.replicates);
  const PooledCell barker = pool(report.outcomes, 1, options.replicates);
  const PooledCell lazy = pool(report.outcomes, 2, options.replicates);

  SandwichCheck& s = report.sandwich;
  s.mh = mh.estimate;
  s.barker = barker.estimate;
  s.lazy = lazy.estimate;
  s.se_mh = mh.se;
  s.se_barker = barker.se;
  s.se_lazy = lazy.se;
  s.sigma2_f = mh.variance;
  s.se_f = mh.variance_se;
  s.lower_holds = s.mh <= s.barker + 3.0 * std::hypot(s.se_mh, s.se_barker);
  s.upper_holds =
      s.barker <= 2.0 * s.mh + s.sigma2_f + 3.0 * std::sqrt(s.se_barker * s.se_barker + 4.0 * s.se_mh * s.se_mh + s.se_f * s.se_f);
  s.lazy_identity_holds = std::fabs(s.lazy - (2.0 * s.mh + 1.0)) <= 3.0 * std::hypot(s.se_lazy, 2.0 * s.se_mh);
  return report;
}

bool tour_invariant_holds(const Tour& tour, int power) {
  if (power == 1) return tour.f_sum == (tour.tau % 2 == 1 ? 0.0 : tour.x_start);
  return tour.f_sum == static_cast<double>(tour.tau + 1) * tour.x_start;
}

CounterexampleReport counterexample(int power, std::size_t tours, std::uint64_t seed, std::size_t divergence_base) {
  if (tours < 4 * divergence_base) {
    throw std::invalid_argument("counterexample needs at least 4 * divergence_base tours");
  }
  const std::string kernel = "counter:" + std::to_string(power);
  SplitChain chain{power, ChainRng{seed, chain_index(kernel, "point:1", 0)}};

  CounterexampleReport report;
  report.power = power;
  report.seed = seed;
  report.tours = tours;
  report.divergence_base = divergence_base;
  const auto& w = cached_weights();
  report.s_weight = power == 1 ? w.power1 : w.power2;

  std::vector<Tour> all;
  all.reserve(tours);
  for (std::size_t i = 0; i < tours; ++i) {
    all.push_back(chain.next_tour());
    if (!tour_invariant_holds(all.back(), power)) ++report.invariant_violations;
  }

  const std::span<const Tour> view{all};
  for (std::size_t count = std::max<std::size_t>(divergence_base, kMinRegenerativeTours); count < tours; count *= 4) {
    report.checkpoints.push_back({count, regenerative_variance(view.first(count), report.s_weight)});
  }
  report.checkpoints.push_back({tours, regenerative_variance(view, report.s_weight)});

  const auto base = view.first(divergence_base);
  const auto four = view.first(4 * divergence_base);
  report.mean_square_at_base = mean_squared_tour_sum(base);
  report.mean_square_at_4base = mean_squared_tour_sum(four);
  report.diverging = diverging_second_moment(base, four);
  return report;
}

}  // namespace tsmc
