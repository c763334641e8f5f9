// Command-line front end: run Monte-Carlo tracking experiments from scenario
// files, list bundled scenarios, and dump association-hypothesis enumerations.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tracklab/association.hpp"
#include "tracklab/harness.hpp"
#include "tracklab/scenario.hpp"
#include "tracklab/types.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tracklab;

std::string default_scenario_dir() {
#ifdef TRACKLAB_SCENARIO_DIR
  return TRACKLAB_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgumentError("cannot open output file: " + path.string());
  }
  out << text;
  if (!out) {
    throw InvalidArgumentError("failed to write output file: " + path.string());
  }
}

struct RunOptions {
  std::string config_path;
  std::string filter;
  int particles = -1;
  int runs = -1;
  long long seed = -1;
  bool seed_set = false;
  std::string out_dir = "out";
  int threads = 0;
  std::string resample;
  std::string crossover;
  double roughening_gain = -1.0;
  double gate_alpha = -1.0;
  double divergence_threshold = -1.0;
};

int run_experiment(const RunOptions& opt) {
  Scenario scenario = load_scenario(opt.config_path);
  HarnessConfig config = make_harness_config(scenario);

  if (!opt.filter.empty()) {
    config.filter = parse_filter_kind(opt.filter);
  }
  if (opt.particles >= 0) {
    config.particles = opt.particles;
  }
  if (opt.runs >= 0) {
    config.runs = opt.runs;
  }
  if (opt.seed_set) {
    config.seed = static_cast<std::uint64_t>(opt.seed);
  }
  config.threads = opt.threads;
  if (!opt.resample.empty()) {
    if (opt.resample == "systematic") {
      config.scheme = ResampleScheme::kSystematic;
    } else if (opt.resample == "multinomial") {
      config.scheme = ResampleScheme::kMultinomial;
    } else {
      throw InvalidArgumentError("unknown resample scheme: " + opt.resample);
    }
  }
  if (!opt.crossover.empty()) {
    if (opt.crossover == "stratified") {
      config.crossover = IndexSamplerMethod::kStratified;
    } else if (opt.crossover == "scan") {
      config.crossover = IndexSamplerMethod::kScan;
    } else {
      throw InvalidArgumentError("unknown crossover sampler: " + opt.crossover);
    }
  }
  if (opt.roughening_gain >= 0.0) {
    config.scenario.filter.roughening.tuning_gain = opt.roughening_gain;
  }
  if (opt.gate_alpha > 0.0) {
    if (opt.gate_alpha >= 1.0) {
      throw InvalidArgumentError("--gate-alpha must lie in (0,1)");
    }
    config.scenario.filter.gate_threshold = -2.0 * std::log(opt.gate_alpha);
  }
  if (opt.divergence_threshold > 0.0) {
    config.divergence_threshold = opt.divergence_threshold;
  }

  HarnessResult result = run_monte_carlo(config);
  const MetricsReport& report = result.report;

  fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  write_text_file(out_dir / "metrics.json", report.to_json());
  write_text_file(out_dir / "tracks.csv", tracks_csv(result));
  write_text_file(out_dir / "mse.csv", mse_csv(report));

  std::printf("scenario: %s\n", report.scenario.c_str());
  std::printf("filter: %s  particles: %d  runs: %d  seed: %llu\n",
              report.filter.c_str(), report.particles, report.runs,
              static_cast<unsigned long long>(report.seed));
  std::printf("time-averaged position RMSE per target:");
  for (double v : report.rmse_time_avg) {
    std::printf(" %.4f", v);
  }
  std::printf("\nfinal-step position RMSE per target:");
  for (double v : report.rmse_final) {
    std::printf(" %.4f", v);
  }
  std::printf("\ndiverged runs: %d / %d   swapped runs: %d / %d\n",
              report.divergence_count(), report.runs, report.swap_count(),
              report.runs);
  if (report.degenerate_weight_events > 0 ||
      report.degenerate_association_events > 0) {
    std::printf("degenerate weight events: %d   degenerate association events: %d\n",
                report.degenerate_weight_events,
                report.degenerate_association_events);
  }
  std::printf("wall time: %.2f s\n", report.wall_seconds);
  std::printf("outputs written to %s\n", out_dir.string().c_str());
  return 0;
}

int list_scenarios_cmd() {
  const std::string dir = default_scenario_dir();
  std::vector<std::string> names = list_scenarios(dir);
  if (names.empty()) {
    std::printf("no scenarios found in %s\n", dir.c_str());
    return 0;
  }
  for (const std::string& name : names) {
    Scenario sc = load_scenario((fs::path(dir) / (name + ".json")).string());
    std::printf("%-24s %-14s targets=%zu horizon=%d default=%s\n", name.c_str(),
                sc.kind == MeasurementKind::kBearingsOnly ? "bearings-only"
                                                          : "range-bearing",
                sc.targets.size(), sc.horizon, sc.default_filter.c_str());
  }
  return 0;
}

int oracle_assoc_cmd(int num_targets, int num_meas) {
  if (num_targets < 0 || num_meas < 0) {
    throw InvalidArgumentError("--k and --m must be non-negative");
  }
  std::vector<std::vector<int>> candidates(
      static_cast<std::size_t>(num_targets));
  for (auto& c : candidates) {
    c.resize(static_cast<std::size_t>(num_meas));
    for (int j = 0; j < num_meas; ++j) {
      c[static_cast<std::size_t>(j)] = j + 1;
    }
  }
  std::vector<TargetToMeas> hyps = enumerate_hypotheses(candidates, num_meas);
  std::printf("targets=%d measurements=%d hypotheses=%llu\n", num_targets,
              num_meas,
              static_cast<unsigned long long>(
                  hypothesis_count(num_targets, num_meas)));
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    std::printf("%4zu:", h);
    for (int a : hyps[h]) {
      std::printf(" %d", a);
    }
    std::printf("\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-target tracking laboratory"};
  app.require_subcommand(1);

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "Run a Monte-Carlo experiment");
  run->add_option("--config", opt.config_path, "Scenario file (JSON)")
      ->required();
  run->add_option("--filter", opt.filter,
                  "Filter: ekf|bootstrap|pf|ippf|mmpf|mcjpdaf|mcmmjpdaf");
  run->add_option("--particles", opt.particles, "Particles per filter");
  run->add_option("--runs", opt.runs, "Monte-Carlo runs");
  run->add_option("--seed", opt.seed, "Base seed (run i uses seed XOR i)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--out", opt.out_dir,
                  "Output directory for metrics.json/tracks.csv/mse.csv");
  run->add_option("--threads", opt.threads,
                  "Worker threads (0 = hardware concurrency)");
  run->add_option("--resample", opt.resample,
                  "Resampling scheme: systematic|multinomial");
  run->add_option("--crossover", opt.crossover,
                  "Partition crossover sampler: stratified|scan");
  run->add_option("--roughening", opt.roughening_gain,
                  "Roughening tuning gain (0 disables)");
  run->add_option("--gate-alpha", opt.gate_alpha,
                  "Gating significance level in (0,1)");
  run->add_option("--divergence-threshold", opt.divergence_threshold,
                  "Final position error counted as divergence (m)");

  CLI::App* scenarios = app.add_subcommand("scenarios", "Scenario utilities");
  scenarios->require_subcommand(1);
  scenarios->add_subcommand("list", "List bundled scenarios");

  int oracle_k = 0;
  int oracle_m = 0;
  CLI::App* oracle = app.add_subcommand("oracle", "Cross-check oracles");
  CLI::App* assoc =
      oracle->add_subcommand("assoc", "Enumerate association hypotheses");
  assoc->add_option("--k", oracle_k, "Number of targets")->required();
  assoc->add_option("--m", oracle_m, "Number of measurements")->required();
  oracle->require_subcommand(1);

  try {
    app.parse(argc, argv);
    opt.seed_set = run->count("--seed") > 0;
    if (run->parsed()) {
      return run_experiment(opt);
    }
    if (scenarios->parsed()) {
      return list_scenarios_cmd();
    }
    if (oracle->parsed()) {
      return oracle_assoc_cmd(oracle_k, oracle_m);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const InvalidArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const TrackError& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 3;
  }
}
