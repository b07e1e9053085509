#include "tsmc/runner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tsmc/csv.hpp"
#include "tsmc/errors.hpp"
#include "tsmc/spectral_oracle.hpp"

namespace tsmc {
namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in{text};
  return parse_config(in);
}

ConfigError parse_error(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError{"", ""};
}

std::string csv_without_wall_time(const std::vector<ResultRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    const std::string line = csv_line(row);
    out += line.substr(0, line.rfind(',')) + "\n";
  }
  return out;
}

TEST(Config, ParsesAllKeys) {
  const auto c = parse(
      "# comment line\n"
      "id = demo   # trailing comment\n"
      "kernel = cn:0.90\n"
      "mu = shiftpois:1:5\n"
      "\n"
      "n = 5000\n"
      "burn_in = 10\n"
      "seed = 99\n"
      "replicates = 3\n"
      "estimator = batch_means\n"
      "output = out.csv\n");
  EXPECT_EQ(c.id, "demo");
  EXPECT_EQ(c.kernel, "cn:0.9");
  EXPECT_EQ(c.mu, "shiftpois:1:5");
  EXPECT_EQ(c.n, 5000U);
  EXPECT_EQ(c.burn_in, 10U);
  EXPECT_EQ(c.seed, 99U);
  EXPECT_EQ(c.replicates, 3U);
  EXPECT_EQ(c.estimator, EstimatorKind::batch_means);
  EXPECT_EQ(c.output, "out.csv");
}

TEST(Config, Defaults) {
  const auto c = parse("kernel = rwm:mh\n");
  EXPECT_EQ(c.mu, "point:1");
  EXPECT_EQ(c.n, kDefaultLength);
  EXPECT_EQ(c.seed, kDefaultSeed);
  EXPECT_EQ(c.burn_in, 0U);
  EXPECT_EQ(c.replicates, 1U);
}

TEST(Config, ErrorsCarryLineAndField) {
  auto e = parse_error("kernel = cn:0.5\nsead = 7\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.field(), "sead");

  e = parse_error("# header\nkernel = cn:1.5\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.field(), "kernel");
  EXPECT_NE(std::string{e.what()}.find("line 2"), std::string::npos);

  e = parse_error("kernel = cn:0.5\nmu = lazy:3\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.field(), "mu");

  e = parse_error("kernel = cn:0.5\nn = 10\nn = 20\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.field(), "n");

  e = parse_error("kernel = cn:0.5\nthis line has no equals sign\n");
  EXPECT_EQ(e.line(), 2);

  e = parse_error("kernel = cn:0.5\nseed = -4\n");
  EXPECT_EQ(e.field(), "seed");

  e = parse_error("kernel = cn:0.5\nestimator = jackknife\n");
  EXPECT_EQ(e.field(), "estimator");
}

TEST(Config, CrossFieldValidation) {
  EXPECT_EQ(parse_error("n = 100\n").field(), "kernel");
  EXPECT_EQ(parse_error("kernel = cn:0.5\nn = 100\nburn_in = 100\n").field(), "n");
  EXPECT_EQ(parse_error("kernel = cn:0.5\nreplicates = 0\n").field(), "replicates");
  EXPECT_EQ(parse_error("kernel = cn:0.5\nestimator = regenerative\n").field(), "estimator");
  EXPECT_EQ(parse_error("kernel = counter:2\nmu = point:2\nestimator = regenerative\n").field(), "mu");
  EXPECT_NO_THROW(parse("kernel = counter:2\nestimator = regenerative\nn = 100\n"));
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/dir/x.cfg"), ConfigError); }

TEST(Run, ReproducibleApartFromWallTime) {
  const auto config = parse("id = rep\nkernel = cn:-0.5\nmu = shiftpois:1:1\nn = 20000\nreplicates = 3\nseed = 5\n");
  const auto a = rows(run(config));
  const auto b = rows(run(config));
  ASSERT_EQ(a.size(), 3U);
  EXPECT_EQ(csv_without_wall_time(a), csv_without_wall_time(b));
  EXPECT_EQ(a[0].experiment_id, "rep.r0");
  EXPECT_EQ(a[2].experiment_id, "rep.r2");
  EXPECT_NE(a[0].sigma2_hat, a[1].sigma2_hat);
  EXPECT_NEAR(*a[0].oracle_value, time_sampled_variance(cn_spectral_measure(-0.5), SamplingLaw::shifted_poisson(1, 1.0)),
              0.0);
}

TEST(Run, SeedChangesResults) {
  auto config = parse("kernel = rwm:barker\nn = 10000\nseed = 1\n");
  const double first = run(config)[0].row.sigma2_hat;
  config.seed = 2;
  EXPECT_NE(run(config)[0].row.sigma2_hat, first);
}

TEST(Run, BurnInDoesNotChangeLength) {
  const auto outcome = run(parse("kernel = cn:0.5\nn = 1000\nburn_in = 500\n"));
  EXPECT_EQ(outcome[0].row.n, 1000U);
}

TEST(Run, TooShortTraceIsAPreconditionFailure) {
  EXPECT_THROW(run(parse("kernel = cn:0.5\nn = 50\n")), PreconditionError);
  EXPECT_THROW(run(parse("kernel = counter:1\nestimator = regenerative\nn = 20\n")), PreconditionError);
}

TEST(Run, RegenerativeEstimator) {
  const auto out = run(parse("kernel = counter:1\nestimator = regenerative\nn = 20000\nseed = 3\n"));
  ASSERT_EQ(out.size(), 1U);
  EXPECT_EQ(out[0].row.estimator, "regenerative");
  EXPECT_FALSE(out[0].row.oracle_value.has_value());
  EXPECT_NEAR(out[0].row.sigma2_hat, 0.10998, 5 * out[0].row.std_error);
}

TEST(Run, SummaryForRandomWalk) {
  const auto out = run(parse("kernel = rwm:mh\nn = 200000\nseed = 8\n"));
  EXPECT_NEAR(out[0].summary.acceptance_rate, 0.6313, 0.01);
  EXPECT_NEAR(out[0].summary.variance, 1.0, 5 * out[0].summary.variance_se);
  EXPECT_EQ(out[0].summary.degenerate_proposals, 0U);
}

TEST(Csv, HeaderAndFields) {
  EXPECT_EQ(csv_header(),
            "experiment_id,kernel,mu,params,n,seed,estimator,sigma2_hat,std_error,oracle_value,wall_time_seconds");
  ResultRow row;
  row.experiment_id = "x";
  row.kernel = "cn:0.5";
  row.mu = "point:0";
  row.params = "0.5";
  row.n = 100;
  row.seed = 1;
  row.estimator = "batch_means";
  row.sigma2_hat = 2.5;
  row.std_error = 0.25;
  row.oracle_value = std::numeric_limits<double>::infinity();
  row.wall_time_seconds = 1.23456;
  EXPECT_EQ(csv_line(row), "x,cn:0.5,point:0,0.5,100,1,batch_means,2.5,0.25,inf,1.235");
  row.oracle_value.reset();
  EXPECT_EQ(csv_line(row), "x,cn:0.5,point:0,0.5,100,1,batch_means,2.5,0.25,,1.235");
  row.mu = "pmf:0=0.5,1=0.5";
  row.experiment_id = "say \"hi\"";
  EXPECT_EQ(csv_line(row), "\"say \"\"hi\"\"\",cn:0.5,\"pmf:0=0.5,1=0.5\",0.5,100,1,batch_means,2.5,0.25,,1.235");

  std::ostringstream out;
  write_csv(out, {row});
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), csv_header());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Tables, Table1LayoutAtSmallLength) {
  TableOptions options;
  options.n = 20000;
  options.replicates = 2;
  const auto out = table1(options);
  ASSERT_EQ(out.size(), 16U);
  EXPECT_EQ(out[0].row.experiment_id, "table1.01.CN.r0");
  EXPECT_EQ(out[1].row.experiment_id, "table1.01.CN.r1");
  EXPECT_EQ(out[15].row.experiment_id, "table1.08.TSCN2.r1");
  EXPECT_EQ(out[2].row.mu, "lazy:0.5");
  EXPECT_EQ(out[8].row.kernel, "cn:-0.9");
  EXPECT_NEAR(*out[2].row.oracle_value, 39.0, 1e-12);
  EXPECT_NEAR(*out[8].row.oracle_value, 1.0 / 19.0, 1e-15);
}

TEST(Tables, Table2LayoutAndHalfWidth) {
  TableOptions options;
  options.n = 20000;
  auto report = table2(options);
  ASSERT_EQ(report.outcomes.size(), 3U);
  EXPECT_EQ(report.outcomes[0].row.kernel, "rwm:mh");
  EXPECT_EQ(report.outcomes[1].row.kernel, "rwm:barker");
  EXPECT_EQ(report.outcomes[2].row.kernel, "rwm:lazy:0.5");
  EXPECT_FALSE(report.outcomes[0].row.oracle_value.has_value());
  EXPECT_EQ(report.sandwich.mh, report.outcomes[0].row.sigma2_hat);

  options.half_width = 4.0;
  report = table2(options);
  EXPECT_EQ(report.outcomes[2].row.kernel, "rwm:lazy:0.5:h=4");
  EXPECT_EQ(report.outcomes[2].row.experiment_id, "table2.03.LazyMH.r0");
}

TEST(Counterexample, ReportStructure) {
  const auto report = counterexample(2, 20000, 11, 1000);
  EXPECT_EQ(report.invariant_violations, 0U);
  EXPECT_EQ(report.tours, 20000U);
  ASSERT_EQ(report.checkpoints.size(), 4U);  // 1000, 4000, 16000, 20000
  EXPECT_EQ(report.checkpoints[0].tours, 1000U);
  EXPECT_EQ(report.checkpoints[2].tours, 16000U);
  EXPECT_EQ(report.checkpoints.back().tours, 20000U);
  EXPECT_NEAR(report.s_weight, 2.0 / 3.0, 1e-9);
  EXPECT_EQ(report.diverging, report.mean_square_at_4base > 1.5 * report.mean_square_at_base);
  EXPECT_THROW((void)counterexample(1, 3999, 1, 1000), std::invalid_argument);
}

TEST(Counterexample, PowerOneIsStable) {
  const auto report = counterexample(1, 100000);
  EXPECT_EQ(report.invariant_violations, 0U);
  EXPECT_FALSE(report.diverging);
  EXPECT_NEAR(report.s_weight, 0.5, 1e-9);
}

// Batch means at n = 10^7 against the closed-form time-sampled variance, for
// contracting normals under every table law plus two more.
TEST(Theory, ContractingNormalsMatchOracleAtFullLength) {
  const auto out = table1({});
  ASSERT_EQ(out.size(), 8U);
  for (const auto& o : out) {
    EXPECT_NEAR(o.row.sigma2_hat, *o.row.oracle_value, 4 * o.row.std_error) << o.row.experiment_id;
  }
  for (const char* mu : {"point:2", "pmf:0=0.2,2=0.3,3=0.5"}) {
    ExperimentConfig config;
    config.kernel = "cn:-0.7";
    config.mu = mu;
    const auto extra = run(config);
    EXPECT_NEAR(extra[0].row.sigma2_hat, *extra[0].row.oracle_value, 4 * extra[0].row.std_error) << mu;
  }
}

}  // namespace
}  // namespace tsmc
