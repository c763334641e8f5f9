// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Ground-truth and sensor-data generation: segmented target kinematics with
// optional white process noise, range/bearing frames with missed detections,
// Poisson clutter and shuffled measurement order (true origins kept as hidden
// labels for scoring), and bearing streams from a moving platform.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tracklab/rng.hpp"
#include "tracklab/scenario.hpp"
#include "tracklab/types.hpp"

namespace tracklab {

/// True target trajectories; targets[k] is 4 x (horizon + 1), column t being
/// the state at time t.
struct TruthData {
  std::vector<Eigen::Matrix4Xd> targets;
};

/// One sensor frame: the measurements an observer reports for one step, in
/// reporting order, plus the hidden origin of each entry (0 = clutter,
/// k >= 1 = target k). The labels exist for scoring only; trackers never see
/// them.
struct ObservationFrame {
  std::vector<RangeBearing> measurements;
  std::vector<int> source;
};

/// Bearings-only sensor data: the platform trajectory and one wrapped
/// bearing per step (entry t - 1 is the measurement at time t).
struct BearingsOnlyData {
  Eigen::Matrix4Xd ownship;
  Eigen::VectorXd bearings;
};

/// Simulates every target's trajectory. Draw order: targets in listed order,
/// then steps in time order. With zero noise intensities the kinematics are
/// deterministic.
TruthData simulate_truth(const Scenario& scenario, Rng& rng);

/// Simulates per-step frames for each observer; result[t - 1][i] is observer
/// i's frame at time t. Per frame the draw order is: per target (listed
/// order) a detection coin (only when the detection probability is below
/// one) then range/bearing noise, then the clutter count and per clutter
/// point range then bearing, then a Fisher-Yates shuffle of the reporting
/// order.
std::vector<std::vector<ObservationFrame>> simulate_observations(
    const Scenario& scenario, const TruthData& truth, Rng& rng);

/// Simulates the moving-platform bearing stream for a bearings-only
/// scenario (one target, one observer, no clutter).
BearingsOnlyData simulate_bearings_only(const Scenario& scenario,
                                        const TruthData& truth, Rng& rng);

}  // namespace tracklab
