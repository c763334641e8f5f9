// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Combinatorial data association for frames containing detections of K
// targets mixed with clutter. A joint association hypothesis is stored
// target-oriented: entry k holds the 1-based index of the measurement
// assigned to target k, or 0 when target k is undetected. The equivalent
// measurement-oriented view assigns each measurement its source target (0 =
// clutter). Hypothesis priors factorize sequentially over targets:
//
//   p(hypothesis) = p(M_C) * prod_k factor_k,
//   factor_k = 1 - P_D                      if target k undetected,
//            = P_D / M_k                    if detected,
//
// where M_k counts the measurements still unassigned when target k is
// processed and M_C is the clutter count, Poisson with the frame clutter
// rate. The product of the 1/M_k terms telescopes to 1/P(M, M_T), the
// number of ordered ways to pick the detected targets' measurements, so the
// factorized prior equals the uniform-assignment prior exactly.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tracklab/types.hpp"

namespace tracklab {

/// Detection and clutter model of one observer's frames.
struct AssociationModel {
  /// Probability that a target is detected in a frame.
  double detect_prob = 1.0;
  /// Expected number of clutter measurements per frame (Poisson mean).
  double clutter_rate = 0.0;
  /// Observation volume; each clutter measurement has density 1/volume.
  double volume = 1.0;
};

/// Target-oriented hypothesis: element k is the measurement assigned to
/// target k (1-based) or 0 for undetected.
using TargetToMeas = std::vector<int>;

/// Measurement-oriented hypothesis: element j is the target that produced
/// measurement j (1-based) or 0 for clutter.
using MeasToTarget = std::vector<int>;

/// Converts a target-oriented hypothesis to its measurement-oriented view.
/// Throws InvalidArgumentError on out-of-range or duplicated measurement
/// indices.
MeasToTarget to_measurement_oriented(const TargetToMeas& hypothesis,
                                     int num_meas);

/// Converts a measurement-oriented hypothesis to its target-oriented view.
/// Throws InvalidArgumentError on out-of-range or duplicated target indices.
TargetToMeas to_target_oriented(const MeasToTarget& hypothesis,
                                int num_targets);

/// Number of valid joint hypotheses for `num_targets` targets and `num_meas`
/// measurements when every measurement is a candidate for every target:
/// sum over the detected-target count d of C(K, d) * M!/(M-d)!.
std::uint64_t hypothesis_count(int num_targets, int num_meas);

/// Enumerates every valid target-oriented hypothesis given per-target
/// candidate measurement sets (1-based indices; candidates[k] lists the
/// measurements gated in for target k). Hypotheses appear in lexicographic
/// order: targets ascending, candidate 0 (undetected) first, then candidates
/// ascending, depth first.
std::vector<TargetToMeas> enumerate_hypotheses(
    const std::vector<std::vector<int>>& candidates, int num_meas);

/// Log prior probability of one hypothesis under the sequential factorized
/// model described above. Reused measurement indices yield -inf.
double association_log_prior(const TargetToMeas& hypothesis,
                             const AssociationModel& model, int num_meas);

/// Normalized posterior over the hypothesis list. `log_pred_lik` is an
/// (M x K) matrix of predictive measurement log likelihoods, entry (j-1, k)
/// giving log p(y_j | target k); entries for pairs outside any hypothesis
/// are never read. Clutter measurements contribute a 1/volume density each.
/// Throws DegenerateAssociationError when every hypothesis has zero
/// posterior mass.
Eigen::VectorXd joint_association_posterior(
    const std::vector<TargetToMeas>& hypotheses, const AssociationModel& model,
    int num_meas, const Eigen::MatrixXd& log_pred_lik);

/// Marginal association probabilities beta, an (M+1) x K matrix: row 0 holds
/// the probability that target k is undetected, row j (1-based) the
/// probability that measurement j belongs to target k. Columns sum to 1.
Eigen::MatrixXd marginal_association_probabilities(
    const std::vector<TargetToMeas>& hypotheses,
    const Eigen::VectorXd& posterior, int num_meas, int num_targets);

/// Greedy nearest-neighbour pairing of estimated positions to true
/// positions: repeatedly matches the globally closest unmatched pair.
/// Returns the permutation mapping estimate index -> truth index. Used to
/// score track-swap events.
std::vector<int> nearest_neighbor_assignment(
    const std::vector<Eigen::Vector2d>& estimates,
    const std::vector<Eigen::Vector2d>& truths);

}  // namespace tracklab
