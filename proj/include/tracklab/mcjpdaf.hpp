// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Monte-Carlo joint probabilistic data association trackers. Each target
// carries its own particle set; each step the targets are propagated from
// their transitional priors, per-observer association hypotheses are
// enumerated over gated measurements and scored with particle-approximated
// predictive likelihoods, and the resulting marginal association
// probabilities (beta) drive a soft per-particle weight update:
//
//   w_k^n  proportional to  w_k^n * prod_i [ beta_0k^i +
//            sum_j beta_jk^i * p_i(y_j | x_k^n) ]
//
// The multiple-model variant additionally evolves a per-particle regime
// label through a Markov chain and propagates each particle with the model
// its label selects.

#pragma once

#include <vector>

#include "tracklab/association.hpp"
#include "tracklab/measurement.hpp"
#include "tracklab/mmpf.hpp"
#include "tracklab/single_filters.hpp"

namespace tracklab {

/// One observer: sensor placement, measurement noise, surveillance extent
/// and the detection/clutter model of its frames.
struct ObserverModel {
  SensorPose pose;
  MeasurementNoise noise;
  /// Maximum instrumented range; clutter is uniform over
  /// [0, max_range] x (-pi, pi], so the observation volume is
  /// 2 * pi * max_range.
  double max_range = 1.0;
  AssociationModel assoc;
};

/// Association-stage tuning.
struct JpdaParams {
  /// Chi-square gating threshold on the 2-dimensional measurement residual
  /// (9.21 keeps 99% of true measurements).
  double gate_threshold = 9.21;
  FilterConfig filter;
};

/// Gaussian approximation of a target's predictive measurement density.
struct PredictiveGaussian {
  Eigen::Vector2d mean;  ///< (range, bearing); bearing is a circular mean
  Eigen::Matrix2d cov;
};

/// Moments of the predictive measurement mixture of one propagated particle
/// cloud: mean over particles weighted by `alpha` (the pre-update weights),
/// covariance = measurement noise + weighted scatter, bearing residuals
/// wrapped.
PredictiveGaussian predictive_measurement_gaussian(
    const Eigen::MatrixXd& propagated_states, const Eigen::VectorXd& alpha,
    const SensorPose& sensor, const MeasurementNoise& noise);

/// Per-target gated candidate lists (1-based measurement indices, ascending)
/// for one frame: measurement j is a candidate for target k when its
/// Mahalanobis distance to the target's predictive Gaussian is strictly
/// below the threshold.
std::vector<std::vector<int>> gate_measurements(
    const std::vector<RangeBearing>& frame,
    const std::vector<PredictiveGaussian>& predictions, double chi2_threshold);

/// Outcome of the association stage for one observer.
struct ObserverAssociation {
  /// Marginal association probabilities, (M+1) x K.
  Eigen::MatrixXd beta;
  /// True when every hypothesis scored zero mass and the frame was treated
  /// as clutter-only for this step.
  bool degenerate = false;
};

/// Result of one multi-target association-tracker step (single-model).
struct McjpdafStepResult {
  std::vector<ParticleSet> targets;
  std::vector<Estimate> estimates;
  std::vector<ObserverAssociation> associations;
  int degenerate_observers = 0;
  int degenerate_targets = 0;
  bool resampled = false;
};

/// One tracker step over all targets and observers. `frames[i]` holds the
/// measurements observer i produced this step.
McjpdafStepResult mcjpdaf_step(
    const std::vector<ParticleSet>& targets,
    const std::vector<Dynamics>& dynamics,
    const std::vector<std::vector<RangeBearing>>& frames,
    const std::vector<ObserverModel>& observers, const JpdaParams& params,
    Rng& rng);

/// Result of one multi-target association-tracker step (multiple-model).
struct McmmjpdafStepResult {
  std::vector<AugmentedParticleSet> targets;
  std::vector<Estimate> estimates;
  std::vector<Eigen::VectorXd> mode_probs;
  std::vector<ObserverAssociation> associations;
  int degenerate_observers = 0;
  int degenerate_targets = 0;
  bool resampled = false;
};

/// Multiple-model variant: every target shares the regime set `models` and
/// transition matrix `pi`. With a single model this reduces exactly
/// (bit-identically under a common seed) to mcjpdaf_step.
McmmjpdafStepResult mcmmjpdaf_step(
    const std::vector<AugmentedParticleSet>& targets,
    const Eigen::MatrixXd& pi, const std::vector<Dynamics>& models,
    const std::vector<std::vector<RangeBearing>>& frames,
    const std::vector<ObserverModel>& observers, const JpdaParams& params,
    Rng& rng);

}  // namespace tracklab
