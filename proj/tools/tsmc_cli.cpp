// tsmc: command-line front end for the time-sampled Markov chain experiments.
//
//   tsmc run --config <file> [--out file.csv]
//   tsmc table1 [--n N] [--seed S] [--replicates R] [--out file.csv]
//   tsmc table2 [--n N] [--seed S] [--replicates R] [--half-width H] [--out file.csv]
//   tsmc counterexample --power {1|2} [--tours N] [--seed S] [--base N]
//   tsmc oracle --kernel cn:<theta> --mu <law>
//
// Exit status: 0 success, 1 configuration error, 2 estimator precondition failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tsmc/csv.hpp"
#include "tsmc/errors.hpp"
#include "tsmc/runner.hpp"
#include "tsmc/spectral_oracle.hpp"

namespace {

constexpr int kConfigErrorExit = 1;
constexpr int kPreconditionExit = 2;

void emit(const std::vector<tsmc::ResultRow>& rows, const std::string& path) {
  if (path.empty()) {
    tsmc::write_csv(std::cout, rows);
    return;
  }
  std::ofstream out{path};
  if (!out) throw tsmc::ConfigError("out", "cannot write '" + path + "'");
  tsmc::write_csv(out, rows);
}

void print_table1_summary(const std::vector<tsmc::RunOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    std::fprintf(stderr, "%-22s theta=%-5s mu=%-14s sigma2=%-10.5g se=%-9.3g oracle=%s\n", o.row.experiment_id.c_str(),
                 o.row.params.c_str(), o.row.mu.c_str(), o.row.sigma2_hat, o.row.std_error,
                 o.row.oracle_value ? tsmc::format_real(*o.row.oracle_value).c_str() : "-");
  }
}

void print_table2_summary(const tsmc::Table2Report& report) {
  for (const auto& o : report.outcomes) {
    std::fprintf(stderr, "%-24s sigma2=%-10.5g se=%-9.3g accept=%.4f\n", o.row.experiment_id.c_str(),
                 o.row.sigma2_hat, o.row.std_error, o.summary.acceptance_rate);
  }
  const auto& s = report.sandwich;
  std::fprintf(stderr, "stationary variance sigma2_f = %.5g (se %.3g)\n", s.sigma2_f, s.se_f);
  std::fprintf(stderr, "sandwich lower  MH <= Barker           : %s\n", s.lower_holds ? "holds" : "VIOLATED");
  std::fprintf(stderr, "sandwich upper  Barker <= 2 MH + s2_f   : %s\n", s.upper_holds ? "holds" : "VIOLATED");
  std::fprintf(stderr, "lazy identity   lazy = 2 MH + 1         : %s\n", s.lazy_identity_holds ? "holds" : "VIOLATED");
}

void print_counterexample(const tsmc::CounterexampleReport& r) {
  std::printf("power %d, seed %llu, %zu tours, s_weight %.12g\n", r.power, static_cast<unsigned long long>(r.seed),
              r.tours, r.s_weight);
  std::printf("tour invariant violations: %zu\n", r.invariant_violations);
  std::printf("%10s %14s %12s\n", "tours", "estimate", "std_error");
  for (const auto& c : r.checkpoints) {
    std::printf("%10zu %14.6g %12.4g\n", c.tours, c.estimate.sigma2_hat, c.estimate.std_error);
  }
  std::printf("mean f_sum^2: %.6g at %zu tours, %.6g at %zu tours\n", r.mean_square_at_base, r.divergence_base,
              r.mean_square_at_4base, 4 * r.divergence_base);
  std::printf("diverging second moment: %s\n", r.diverging ? "true" : "false");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-sampled Markov chains: asymptotic variance experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  run_cmd->add_option("--config", config_path, "Config file of 'key = value' lines")->required();
  run_cmd->add_option("--out", out_path, "CSV output path (overrides the config's output key)");

  tsmc::TableOptions table_options;
  auto add_table_options = [&](CLI::App* cmd) {
    cmd->add_option("--n", table_options.n, "Trajectory length")->capture_default_str();
    cmd->add_option("--seed", table_options.seed, "Experiment seed")->capture_default_str();
    cmd->add_option("--replicates", table_options.replicates, "Independent chains per cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
  };
  auto* table1_cmd = app.add_subcommand("table1", "Contracting normals under four sampling laws");
  add_table_options(table1_cmd);
  auto* table2_cmd = app.add_subcommand("table2", "Metropolis vs Barker vs lazy Metropolis");
  add_table_options(table2_cmd);
  table2_cmd->add_option("--half-width", table_options.half_width, "Proposal increments are U[-h, h]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  int power = 1;
  std::size_t tours = 100'000;
  std::size_t base = 1000;
  std::uint64_t seed = tsmc::kDefaultSeed;
  auto* counter_cmd = app.add_subcommand("counterexample", "Split-chain regeneration demo");
  counter_cmd->add_option("--power", power, "1 for P, 2 for the two-step chain")->required()->check(CLI::IsMember({1, 2}));
  counter_cmd->add_option("--tours", tours, "Number of tours")->capture_default_str();
  counter_cmd->add_option("--seed", seed, "Seed")->capture_default_str();
  counter_cmd->add_option("--base", base, "N for the N vs 4N divergence check")->capture_default_str();

  std::string kernel_spec;
  std::string mu_spec = "point:1";
  auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form asymptotic variance");
  oracle_cmd->add_option("--kernel", kernel_spec, "cn:<theta>")->required();
  oracle_cmd->add_option("--mu", mu_spec, "Sampling law")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigErrorExit;
  }

  try {
    if (*run_cmd) {
      const tsmc::ExperimentConfig config = tsmc::load_config(config_path);
      emit(tsmc::rows(tsmc::run(config)), out_path.empty() ? config.output : out_path);
    } else if (*table1_cmd) {
      const auto outcomes = tsmc::table1(table_options);
      print_table1_summary(outcomes);
      emit(tsmc::rows(outcomes), out_path);
    } else if (*table2_cmd) {
      const auto report = tsmc::table2(table_options);
      print_table2_summary(report);
      emit(tsmc::rows(report.outcomes), out_path);
    } else if (*counter_cmd) {
      print_counterexample(tsmc::counterexample(power, tours, seed, base));
    } else if (*oracle_cmd) {
      const tsmc::KernelSpec kernel = tsmc::parse_kernel(kernel_spec);
      const auto value = tsmc::oracle_value(kernel, tsmc::parse_law(mu_spec));
      if (!value) throw tsmc::ConfigError("kernel", "no closed-form oracle for '" + kernel.text + "'");
      std::printf("%s\n", tsmc::format_real(*value).c_str());
    }
  } catch (const tsmc::PreconditionError& e) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return kPreconditionExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigErrorExit;
  }
  return 0;
}
