// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Scoring of Monte-Carlo tracking experiments: per-run track records,
// position MSE/RMSE aggregation, divergence and track-swap detection, and a
// JSON-round-trippable report.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace tracklab {

/// Truth and estimates for one target over one run. All series have
/// horizon + 1 columns; column 0 holds the initial condition.
struct TargetTrack {
  Eigen::Matrix4Xd truth;      ///< true states (absolute frame)
  Eigen::Matrix4Xd estimate;   ///< estimated states (absolute frame)
  Eigen::VectorXd cov_trace;   ///< trace of the estimate covariance
  Eigen::MatrixXd mode_probs;  ///< s x (horizon + 1); 0 x 0 for single-model
};

/// Everything recorded about one Monte-Carlo run.
struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  std::vector<TargetTrack> targets;
  int degenerate_weight_events = 0;
  int degenerate_association_events = 0;
  bool diverged = false;
  bool swapped = false;
  double wall_seconds = 0.0;
};

/// Euclidean position error of target track `track` at time t.
double position_error(const TargetTrack& track, int t);

/// Mean over runs of the squared position error at every step:
/// MSE_t = mean_runs((x_est - x_true)^2 + (y_est - y_true)^2). All series
/// must have equal length; throws InvalidArgumentError otherwise.
Eigen::VectorXd compute_position_mse(
    const std::vector<Eigen::Matrix4Xd>& estimates,
    const std::vector<Eigen::Matrix4Xd>& truths);

/// True when any target's final-step position error exceeds the threshold.
bool detect_divergence(const RunRecord& record, double threshold);

/// True when the nearest-neighbor assignment of final estimated positions to
/// final true positions is a non-identity permutation (estimates locked onto
/// the wrong targets). Always false for single-target runs.
bool detect_swap(const RunRecord& record);

/// Aggregated results of a Monte-Carlo experiment.
struct MetricsReport {
  std::string scenario;
  std::string filter;
  int particles = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  int targets = 0;
  int horizon = 0;
  double step = 0.0;
  double divergence_threshold = 0.0;

  /// Per-target per-step position MSE across runs; targets x (horizon + 1).
  Eigen::MatrixXd mse_position;
  /// Per-target RMSE averaged over steps 1..horizon.
  Eigen::VectorXd rmse_time_avg;
  /// Per-target RMSE at the final step.
  Eigen::VectorXd rmse_final;
  /// Final-step position error per run per target; runs x targets.
  Eigen::MatrixXd final_position_errors;

  std::vector<int> diverged_runs;
  std::vector<int> swapped_runs;
  int degenerate_weight_events = 0;
  int degenerate_association_events = 0;

  /// Mean over runs of the mode-probability series, one s x (horizon + 1)
  /// matrix per target; empty for single-model filters.
  std::vector<Eigen::MatrixXd> mode_probability_means;

  double wall_seconds = 0.0;

  int divergence_count() const { return static_cast<int>(diverged_runs.size()); }
  int swap_count() const { return static_cast<int>(swapped_runs.size()); }

  /// Serializes to a JSON document; from_json inverts it exactly.
  std::string to_json() const;
  static MetricsReport from_json(const std::string& text);

  bool operator==(const MetricsReport& other) const;
};

/// Builds the aggregate report from per-run records (already ordered by run
/// index).
MetricsReport aggregate_metrics(const std::vector<RunRecord>& records,
                                const std::string& scenario_name,
                                const std::string& filter_name, int particles,
                                std::uint64_t seed, double step,
                                double divergence_threshold);

}  // namespace tracklab
