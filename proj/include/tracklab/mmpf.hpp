// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Multiple-model particle filter for maneuvering targets. Each particle is
// augmented with a discrete regime label selecting one of s kinematic
// models; labels evolve by a first-order Markov chain with transition matrix
// Pi (rows: from-regime), and the continuous state is propagated by the
// model the new label selects (regime-conditioned SIS). Mode probabilities
// are the total normalized weight carried by each regime.

#pragma once

#include <vector>

#include "tracklab/single_filters.hpp"

namespace tracklab {

/// Particle set augmented with per-particle regime labels (0-based).
struct AugmentedParticleSet {
  Eigen::MatrixXd states;
  std::vector<int> regimes;
  Eigen::VectorXd log_weights;

  Eigen::Index count() const { return states.cols(); }
  Eigen::Index dim() const { return states.rows(); }
};

/// Advances every regime label one step through the Markov chain Pi
/// (s x s, row-stochastic). With a single regime (s == 1) the labels are
/// returned unchanged and no randomness is consumed. Throws
/// InvalidArgumentError when Pi is not row-stochastic or a label is out of
/// range.
std::vector<int> regime_transition(const std::vector<int>& regimes,
                                   const Eigen::MatrixXd& pi, Rng& rng);

/// One regime-conditioned SIS step: labels already advanced, each particle
/// propagates through the model its label selects and is reweighted by the
/// measurement log likelihood (transitional-prior proposal). Throws
/// DegenerateWeightsError when the updated weights carry no mass.
AugmentedParticleSet rc_sis_step(const AugmentedParticleSet& prev,
                                 const std::vector<int>& new_regimes,
                                 const std::vector<Dynamics>& models,
                                 const LogLikelihoodFn& loglik, Rng& rng);

/// Total normalized weight per regime.
Eigen::VectorXd mode_probabilities(const AugmentedParticleSet& set,
                                   int num_models);

/// Result of one multiple-model filter step.
struct MmpfStepResult {
  AugmentedParticleSet set;
  Estimate estimate;
  Eigen::VectorXd mode_probs;
  bool resampled = false;
  bool degenerate = false;
};

/// One full multiple-model particle filter step: regime transition,
/// regime-conditioned SIS, estimate and mode probabilities from the weighted
/// set (before resampling), then conditional resampling that carries the
/// labels along with the states, and roughening of the continuous states
/// only (labels are never perturbed).
MmpfStepResult mmpf_step(const AugmentedParticleSet& prev,
                         const Eigen::MatrixXd& pi,
                         const std::vector<Dynamics>& models,
                         const LogLikelihoodFn& loglik,
                         const FilterConfig& config, Rng& rng);

/// Deterministically stratified initial labels: regime r receives
/// floor(N * p_r) particles (assigned in contiguous blocks in regime order);
/// the remaining slots are drawn from the initial distribution with the rng.
std::vector<int> stratified_initial_regimes(int count,
                                            const Eigen::VectorXd& initial_probs,
                                            Rng& rng);

}  // namespace tracklab
