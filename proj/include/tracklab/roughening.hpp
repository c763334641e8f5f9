// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Post-resampling jitter that restores particle diversity after the
// duplication introduced by resampling. Each state component m receives
// independent zero-mean Gaussian noise scaled by K * M_m * N^(-1/d), where
// M_m is the spread (max minus min) of that component across the set, N the
// particle count and d the state dimension.

#pragma once

#include "tracklab/particles.hpp"
#include "tracklab/rng.hpp"

namespace tracklab {

struct RougheningParams {
  /// Tuning gain K. Zero disables roughening entirely.
  double tuning_gain = 0.2;

  /// When true (default), K * M_m * N^(-1/d) is interpreted as the noise
  /// *variance*, so the standard deviation is its square root. When false it
  /// is used directly as the standard deviation.
  bool scale_is_variance = true;
};

/// Adds roughening noise to every particle in place. Weights are untouched.
/// A single-particle set (N == 1) is returned unchanged, as is any set when
/// the tuning gain is zero. For each particle the per-component draws happen
/// in component order, fixing the rng stream layout.
void roughen(ParticleSet& set, const RougheningParams& params, Rng& rng);

/// Same jitter applied directly to a state matrix (one particle per column);
/// used by filters that carry extra per-particle data (for example regime
/// labels) that must not be perturbed.
void roughen_states(Eigen::MatrixXd& states, const RougheningParams& params,
                    Rng& rng);

}  // namespace tracklab
