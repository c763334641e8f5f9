// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Resampling machinery. Two inverse-CDF index samplers are provided: a
// per-draw linear scan (O(N*R)) and a stratified single-pass variant
// (O(max(N, R))) whose draws come out sorted. Built on top of them are the
// classic multinomial and systematic particle resamplers and a
// general-weight resampling step that reuses an arbitrary strictly positive
// selection weight while correcting the importance weights so the
// represented distribution is unchanged.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tracklab/particles.hpp"
#include "tracklab/rng.hpp"

namespace tracklab {

/// Particle resampling scheme.
enum class ResampleScheme {
  kMultinomial,
  kSystematic,
};

/// Index sampler used for the reuse-index maps in the partitioned filters.
enum class IndexSamplerMethod {
  kScan,        ///< independent per-draw inverse-CDF scan
  kStratified,  ///< single-pass stratified sweep (sorted output)
};

/// Draws `draws` indices from the categorical distribution `rho` (normalized,
/// length N) by inverse-CDF scan: for each draw u ~ U[0,1) the smallest m
/// with cum(m) >= u is selected, implemented as `while cum < u: advance`, so
/// a u exactly on a bin boundary selects the lower index.
std::vector<int> sample_indices_scan(const Eigen::VectorXd& rho, int draws,
                                     Rng& rng);

/// Draws `draws` indices from `rho` with one stratified sweep: a single
/// offset u1 ~ U[0, 1/draws) and grid points u_n = u1 + n/draws. Output is
/// nondecreasing; each index m appears either floor(draws*rho_m) or
/// ceil(draws*rho_m) times.
std::vector<int> sample_indices_stratified(const Eigen::VectorXd& rho,
                                           int draws, Rng& rng);

/// Multinomial resampling: N independent categorical draws from the linear
/// weights; the returned set has uniform weights.
ParticleSet multinomial_resample(const ParticleSet& set, Rng& rng);

/// Systematic resampling: one uniform offset u1 ~ U[0, 1/N), comb at spacing
/// 1/N; the returned set has uniform weights. Per-index copy counts are
/// floor(N*w_i) or ceil(N*w_i) on every run.
ParticleSet systematic_resample(const ParticleSet& set, Rng& rng);

/// Resamples with arbitrary strictly positive selection weights g (not
/// necessarily the importance weights): selection probabilities
/// rho_i = g_i / sum(g), new particle i is x^(j(i)) with corrected weight
/// proportional to w^(j(i)) / rho^(j(i)), renormalized. Preserves the
/// represented distribution for any valid g. Throws InvalidArgumentError when
/// any g_i <= 0 or sizes mismatch.
ParticleSet weighted_resample(const ParticleSet& set, const Eigen::VectorXd& g,
                              IndexSamplerMethod method, Rng& rng);

/// Dispatches to multinomial_resample or systematic_resample.
ParticleSet resample(const ParticleSet& set, ResampleScheme scheme, Rng& rng);

}  // namespace tracklab
