// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Scenario descriptions: target trajectories built from piecewise
// constant-velocity / coordinated-turn segments, sensor and clutter models,
// optional moving-platform (bearings-only) geometry, and the tracker
// configuration bundled with each scenario. Scenarios are loaded from JSON
// files (comments allowed) and validated eagerly.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tracklab/motion.hpp"
#include "tracklab/roughening.hpp"
#include "tracklab/types.hpp"

namespace tracklab {

/// Measurement geometry of a scenario.
enum class MeasurementKind {
  kRangeBearing,  ///< fixed sensors reporting (range, bearing)
  kBearingsOnly,  ///< one moving platform reporting North-referenced bearings
};

/// One constant-model leg of a target trajectory.
struct MotionSegment {
  MotionKind kind = MotionKind::kConstantVelocity;
  double turn_rate = 0.0;  ///< rad/s, positive anti-clockwise (kCoordinatedTurn)
  int steps = 0;           ///< >= 1
};

/// A single target: initial state plus its segment schedule.
struct TargetSpec {
  StateVec initial = StateVec::Zero();
  std::vector<MotionSegment> segments;  ///< step counts sum to the horizon
};

/// A fixed sensor.
struct ObserverSpec {
  SensorPose pose;
  MeasurementNoise noise;
  double max_range = 0.0;  ///< clutter field radius; volume = 2*pi*max_range
};

/// Detection / clutter model shared by all observers of a scenario.
struct DetectionSpec {
  double detect_prob = 1.0;
  double clutter_rate = 0.0;   ///< Poisson mean clutter count per frame
  bool range_limited = false;  ///< drop detections beyond max_range
};

/// One constant-course leg of the observing platform.
struct OwnshipLeg {
  double course = 0.0;  ///< radians, North-referenced clockwise
  double speed = 0.0;   ///< m/s
  int steps = 0;
};

/// Scripted motion of the observing platform (bearings-only scenarios).
struct OwnshipSpec {
  Eigen::Vector2d initial_position = Eigen::Vector2d::Zero();
  std::vector<OwnshipLeg> legs;  ///< step counts sum to the horizon
};

/// Process-noise description for a tracker: either a direct diagonal
/// covariance or the white-noise-acceleration form parameterized by
/// per-axis intensities.
struct ProcessNoiseSpec {
  bool white_noise = false;
  Eigen::Vector4d q_diag = Eigen::Vector4d::Zero();  ///< used when !white_noise
  double sigma_x = 0.0;                              ///< used when white_noise
  double sigma_y = 0.0;

  /// Covariance of the per-step state noise for step length `step`.
  Eigen::Matrix4d covariance(double step) const;
};

/// One motion model in the tracker's model set.
struct ModelSpec {
  MotionKind kind = MotionKind::kConstantVelocity;
  double turn_rate = 0.0;  ///< rad/s
};

/// Tracker configuration bundled with a scenario (CLI flags can override
/// particle count and friends).
struct FilterSpec {
  bool initial_mean_from_truth = false;
  std::vector<StateVec> initial_means;  ///< per target (filled from truth when
                                        ///< initial_mean_from_truth)
  Eigen::Vector4d initial_cov_diag = Eigen::Vector4d::Ones();
  std::vector<ProcessNoiseSpec> process;  ///< per target
  std::vector<ModelSpec> models;          ///< >= 1; > 1 means multiple-model
  Eigen::MatrixXd mode_transition;        ///< s x s row-stochastic
  Eigen::VectorXd initial_mode_probs;     ///< length s, sums to 1
  int particles = 100;
  double resample_threshold_fraction = 0.5;  ///< threshold = fraction * N
  RougheningParams roughening;
  double gate_threshold = 0.0;  ///< 0 => -2 ln(0.01) (99% two-dof gate)

  int model_count() const { return static_cast<int>(models.size()); }
};

/// A complete experiment description.
struct Scenario {
  std::string name;
  MeasurementKind kind = MeasurementKind::kRangeBearing;
  double step = 1.0;
  int horizon = 0;
  std::vector<TargetSpec> targets;
  double truth_sigma_x = 0.0;  ///< white-noise intensity of the true motion
  double truth_sigma_y = 0.0;
  std::vector<ObserverSpec> observers;
  DetectionSpec detection;
  OwnshipSpec ownship;  ///< meaningful only for kBearingsOnly
  FilterSpec filter;
  std::string default_filter = "bootstrap";
  int default_runs = 100;
  std::uint64_t default_seed = 1;
  double divergence_threshold = 50.0;

  int target_count() const { return static_cast<int>(targets.size()); }
  /// True when every frame contains exactly the per-target measurements in a
  /// recoverable order (unit detection probability, no clutter).
  bool association_known() const {
    return detection.detect_prob >= 1.0 && detection.clutter_rate <= 0.0 &&
           !detection.range_limited;
  }
};

/// Parses and validates a scenario from JSON text. `origin` names the source
/// in error messages. Throws InvalidArgumentError on malformed or
/// inconsistent input.
Scenario parse_scenario(const std::string& json_text, const std::string& origin);

/// Loads a scenario from a JSON file (comments allowed).
Scenario load_scenario(const std::string& path);

/// Sorted base names (without extension) of the .json scenario files in a
/// directory. Throws InvalidArgumentError when the directory is unreadable.
std::vector<std::string> list_scenarios(const std::string& directory);

/// Per-step transition matrices for one target, expanded from its segments;
/// result has `horizon` entries (entry t propagates state t -> t+1).
std::vector<Eigen::Matrix4d> segment_transitions(const TargetSpec& target,
                                                 double step, int horizon);

/// Full platform trajectory, 4 x (horizon + 1): position advances with the
/// pre-step leg velocity, velocity switches at leg boundaries. Column t is
/// the platform state at time t.
Eigen::Matrix4Xd ownship_track(const OwnshipSpec& ownship, double step,
                               int horizon);

}  // namespace tracklab
