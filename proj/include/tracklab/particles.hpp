// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Weighted particle sets. Weights are kept in the log domain and normalized
// with log-sum-exp; a normalized set satisfies log_sum_exp(log_weights) == 0.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tracklab/types.hpp"

namespace tracklab {

/// A weighted particle set: `states` holds one particle per column (d x N),
/// `log_weights` holds the matching log importance weights (length N,
/// normalized).
struct ParticleSet {
  Eigen::MatrixXd states;
  Eigen::VectorXd log_weights;

  Eigen::Index count() const { return states.cols(); }
  Eigen::Index dim() const { return states.rows(); }
};

/// Builds a uniformly weighted set over the given states.
ParticleSet make_uniform_set(const Eigen::MatrixXd& states);

/// Normalizes log weights in place so that log_sum_exp == 0. Throws
/// DegenerateWeightsError when every weight is -inf (zero total mass) or any
/// weight is NaN.
void normalize_log_weights(Eigen::VectorXd& log_weights);

/// Linear-domain weights of a normalized log-weight vector.
Eigen::VectorXd to_linear_weights(const Eigen::VectorXd& log_weights);

/// Effective sample size 1 / sum(w_i^2) of a normalized weight vector.
/// Equals N for uniform weights and 1 when a single particle carries all
/// mass. Throws InvalidArgumentError if the input is not normalized.
double effective_sample_size(const Eigen::VectorXd& log_weights);

/// First two weighted moments of a particle set.
struct MeanCov {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Weighted mean and covariance of a normalized particle set.
MeanCov weighted_mean_cov(const ParticleSet& set);

/// Gathers the selected columns into a new state matrix (duplicates allowed).
Eigen::MatrixXd gather_states(const Eigen::MatrixXd& states,
                              const std::vector<int>& indices);

}  // namespace tracklab
