// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Monte-Carlo experiment driver: binds a scenario to one of the trackers,
// executes seeded independent runs (optionally across worker threads),
// aggregates metrics, and renders the CSV outputs.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracklab/metrics.hpp"
#include "tracklab/resampling.hpp"
#include "tracklab/scenario.hpp"

namespace tracklab {

/// The trackers the harness can drive.
enum class FilterKind {
  kEkf,
  kBootstrap,   ///< prior proposal, resample every step
  kGenericPf,   ///< prior proposal, resample when the ESS drops below threshold
  kIppf,        ///< independent per-target partitions with crossover
  kMmpf,        ///< multiple-model particle filter (single target)
  kMcJpdaf,     ///< Monte-Carlo joint probabilistic data association
  kMcMmJpdaf,   ///< multiple-model variant of the above
};

/// Maps "ekf" | "bootstrap" | "pf" | "ippf" | "mmpf" | "mcjpdaf" |
/// "mcmmjpdaf" to a FilterKind; throws InvalidArgumentError otherwise.
FilterKind parse_filter_kind(const std::string& name);
std::string filter_kind_name(FilterKind kind);

/// A fully resolved experiment: scenario plus every knob the CLI can turn.
struct HarnessConfig {
  Scenario scenario;
  FilterKind filter = FilterKind::kBootstrap;
  int particles = 100;
  int runs = 1;
  std::uint64_t seed = 1;
  double divergence_threshold = 50.0;
  ResampleScheme scheme = ResampleScheme::kSystematic;
  IndexSamplerMethod crossover = IndexSamplerMethod::kStratified;
  int threads = 0;  ///< 0 = hardware concurrency
};

/// Builds a config from a scenario's bundled defaults.
HarnessConfig make_harness_config(Scenario scenario);

/// Rejects tracker/scenario mismatches (e.g. a pre-associated tracker on a
/// cluttered scenario) with a descriptive InvalidArgumentError.
void validate_config(const HarnessConfig& config);

/// Executes run `run_index` (seeded with config.seed xor run_index) and
/// returns its record. Deterministic in (config, run_index).
RunRecord run_single(const HarnessConfig& config, int run_index);

struct HarnessResult {
  std::vector<RunRecord> records;  ///< ordered by run index
  MetricsReport report;
};

/// Runs the whole experiment. Runs execute in parallel across worker
/// threads; each run draws from its own generator, and aggregation follows
/// run-index order, so results do not depend on the thread count.
HarnessResult run_monte_carlo(const HarnessConfig& config);

/// One row per (run, step, target): run, t, target, true x/y/vx/vy,
/// est x/y/vx/vy, covariance trace, and mode_prob_1..s for multiple-model
/// trackers.
std::string tracks_csv(const HarnessResult& result);

/// One row per (step, target) with the across-run position MSE.
std::string mse_csv(const MetricsReport& report);

}  // namespace tracklab
