// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Independent-partition particle filter for jointly tracking several targets
// whose measurements are already associated. The joint state of K targets is
// stacked into one 4K-dimensional particle; each step proposes every
// partition (target sub-state) from its own transitional prior, scores it
// against its own measurement to form secondary selection weights, resamples
// partition indices independently (crossover), and reassembles joint
// particles whose importance weights correct for the biased selection:
//
//   w_t^(i)  proportional to
//     [ prod_k w_{t-1}^(j_k(i)) ] * p(z_t | x_t^(i)) / prod_k rho_k^(j_k(i))
//
// where rho_k are the normalized secondary weights of partition k and j_k(i)
// the crossover index map. Because each partition's measurement likelihood
// factorizes across partitions, p(z_t|x) = prod_k g_k(j_k(i)), and the update
// is computed in the log domain with exact cancellation.

#pragma once

#include <vector>

#include "tracklab/measurement.hpp"
#include "tracklab/single_filters.hpp"

namespace tracklab {

/// Joint particle set over stacked target partitions. `states` is
/// (4K) x N; partition k occupies rows [4k, 4k+4).
struct PartitionedSet {
  Eigen::MatrixXd states;
  Eigen::VectorXd log_weights;
  int num_partitions = 0;

  Eigen::Index count() const { return states.cols(); }
};

/// Per-partition measurement log-likelihood: log g_k(i) for partition k,
/// particle i.
using PartitionLogLikFn = std::function<double(
    int partition, const Eigen::Ref<const Eigen::Vector4d>& sub_state)>;

/// Draws one independent reuse-index map per partition from the given
/// selection distributions. For the stratified method the sorted sweep output
/// is shuffled (Fisher-Yates) within each partition so that index maps are
/// independent across partitions; without the shuffle the sorted maps would
/// couple partitions rank-by-rank and break the product-form weight
/// correction.
std::vector<std::vector<int>> crossover_indices(
    const std::vector<Eigen::VectorXd>& rho, int draws,
    IndexSamplerMethod method, Rng& rng);

/// Result of one partitioned filter step.
struct IppfStepResult {
  PartitionedSet set;
  /// Per-target estimates, computed from the weighted joint set before any
  /// resampling.
  std::vector<Estimate> estimates;
  bool resampled = false;
};

/// One independent-partition filter step with transitional-prior proposals.
/// `dynamics` supplies one 4x4 propagation bundle per partition, `loglik`
/// the per-partition measurement log likelihood. Throws
/// DegenerateWeightsError naming the partition whose secondary weights carry
/// no mass.
IppfStepResult ippf_step(const PartitionedSet& prev,
                         const std::vector<Dynamics>& dynamics,
                         const PartitionLogLikFn& loglik,
                         const FilterConfig& config, IndexSamplerMethod method,
                         Rng& rng);

}  // namespace tracklab
