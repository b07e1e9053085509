#ifndef TSMC_RUNNER_HPP
#define TSMC_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsmc/estimators.hpp"
#include "tsmc/spec_strings.hpp"

namespace tsmc {

inline constexpr std::uint64_t kDefaultSeed = 20100401;
inline constexpr std::uint64_t kDefaultLength = 10'000'000;

enum class EstimatorKind { batch_means, regenerative };

std::string to_string(EstimatorKind kind);

/// One experiment. For the regenerative estimator, `n` counts tours and the
/// kernel must be a counterexample chain without time sampling.
struct ExperimentConfig {
  std::string id = "run";
  std::string kernel;
  std::string mu = "point:1";
  std::uint64_t n = kDefaultLength;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = kDefaultSeed;
  std::uint32_t replicates = 1;
  EstimatorKind estimator = EstimatorKind::batch_means;
  std::string output;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
};

/// Reads "key = value" lines; '#' starts a comment. Keys: id, kernel, mu, n,
/// burn_in, seed, replicates, estimator, output. Errors name the line and key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// One CSV row.
struct ResultRow {
  std::string experiment_id;
  std::string kernel;
  std::string mu;
  std::string params;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string estimator;
  double sigma2_hat = 0.0;
  double std_error = 0.0;
  std::optional<double> oracle_value;  // may be +infinity
  double wall_time_seconds = 0.0;
};

/// Per-chain statistics that do not go into the CSV.
struct ChainSummary {
  double mean = 0.0;
  double variance = 0.0;     // stationary variance estimate of f
  double variance_se = 0.0;  // batch-means standard error of that estimate
  double acceptance_rate = 0.0;
  std::uint64_t degenerate_proposals = 0;
};

struct RunOutcome {
  ResultRow row;
  ChainSummary summary;
};

/// Closed-form asymptotic variance for f(x) = x when one is known
/// (contracting normals under any sampling law).
std::optional<double> oracle_value(const KernelSpec& kernel, const SamplingLaw& law);

/// Stream index used for replicate `replicate` of a (kernel, mu) pair.
std::uint64_t chain_index(const std::string& kernel, const std::string& mu, std::uint32_t replicate);

/// Runs every replicate of the experiment; rows come back in replicate order.
std::vector<RunOutcome> run(const ExperimentConfig& config);

std::vector<ResultRow> rows(const std::vector<RunOutcome>& outcomes);

struct TableOptions {
  std::uint64_t n = kDefaultLength;
  std::uint64_t seed = kDefaultSeed;
  std::uint32_t replicates = 1;
  double half_width = kDefaultIncrementHalfWidth;  // table2 proposal U[-h, h]
};

/// Contracting normals, theta in {0.9, -0.9} x {CN, LCN, TSCN1, TSCN2}.
/// Rows are ordered theta-major, replicate-minor.
std::vector<RunOutcome> table1(const TableOptions& options = {});

struct SandwichCheck {
  double mh = 0.0;
  double barker = 0.0;
  double lazy = 0.0;
  double sigma2_f = 0.0;
  double se_mh = 0.0;
  double se_barker = 0.0;
  double se_lazy = 0.0;
  double se_f = 0.0;
  bool lower_holds = false;          // mh <= barker (3 pooled SE slack)
  bool upper_holds = false;          // barker <= 2 mh + sigma2_f (3 pooled SE slack)
  bool lazy_identity_holds = false;  // lazy ~ 2 mh + 1 (3 pooled SE)
};

struct Table2Report {
  std::vector<RunOutcome> outcomes;  // MH, Barker, lazy MH; replicate-minor
  SandwichCheck sandwich;
};

/// Random-walk Metropolis, Barker and lazy Metropolis (eps = 1/2) on N(0, 1)
/// with U[-h, h] increments (h = options.half_width, default 2). Replicates are averaged for the sandwich check.
Table2Report table2(const TableOptions& options = {});

struct TourCheckpoint {
  std::size_t tours;
  EstimateReport estimate;
};

struct CounterexampleReport {
  int power = 1;
  std::uint64_t seed = 0;
  std::size_t tours = 0;
  std::size_t invariant_violations = 0;
  double s_weight = 0.0;
  std::vector<TourCheckpoint> checkpoints;  // geometric tour counts, last = all tours
  std::size_t divergence_base = 0;
  double mean_square_at_base = 0.0;
  double mean_square_at_4base = 0.0;
  bool diverging = false;
};

/// True when the tour satisfies the exact tour-sum identity of its power.
bool tour_invariant_holds(const Tour& tour, int power);

/// Simulates `tours` regeneration tours of the split chain, checks every tour
/// against its invariant, reports regenerative estimates at tour counts
/// base, 4 base, 16 base, ... and the divergence verdict from the first
/// `divergence_base` versus the first 4 * divergence_base tours.
/// Throws std::invalid_argument if tours < 4 * divergence_base.
CounterexampleReport counterexample(int power, std::size_t tours, std::uint64_t seed = kDefaultSeed,
                                    std::size_t divergence_base = 1000);

}  // namespace tsmc

#endif  // TSMC_RUNNER_HPP
