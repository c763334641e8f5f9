// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/particles.hpp"

#include <cmath>

#include "tracklab/gaussian.hpp"

namespace tracklab {

ParticleSet make_uniform_set(const Eigen::MatrixXd& states) {
  if (states.cols() == 0) {
    throw InvalidArgumentError("make_uniform_set: empty state matrix");
  }
  ParticleSet set;
  set.states = states;
  set.log_weights = Eigen::VectorXd::Constant(
      states.cols(), -std::log(static_cast<double>(states.cols())));
  return set;
}

void normalize_log_weights(Eigen::VectorXd& log_weights) {
  if (log_weights.size() == 0) {
    throw InvalidArgumentError("normalize_log_weights: empty weight vector");
  }
  for (Eigen::Index i = 0; i < log_weights.size(); ++i) {
    if (std::isnan(log_weights[i])) {
      throw DegenerateWeightsError(
          "normalize_log_weights: NaN log weight encountered");
    }
  }
  const double total = log_sum_exp(log_weights);
  if (!std::isfinite(total)) {
    throw DegenerateWeightsError(
        "normalize_log_weights: total weight mass is zero");
  }
  log_weights.array() -= total;
}

Eigen::VectorXd to_linear_weights(const Eigen::VectorXd& log_weights) {
  return log_weights.array().exp();
}

double effective_sample_size(const Eigen::VectorXd& log_weights) {
  const double total = log_sum_exp(log_weights);
  if (!std::isfinite(total) || std::abs(total) > 1e-8) {
    throw InvalidArgumentError(
        "effective_sample_size: weights must be normalized");
  }
  // 1 / sum(w^2) computed in the log domain for stability.
  const double log_sum_sq = log_sum_exp(2.0 * log_weights.array());
  return std::exp(-log_sum_sq);
}

MeanCov weighted_mean_cov(const ParticleSet& set) {
  if (set.count() == 0) {
    throw InvalidArgumentError("weighted_mean_cov: empty particle set");
  }
  const Eigen::VectorXd w = to_linear_weights(set.log_weights);
  const Eigen::VectorXd mean = set.states * w;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(set.dim(), set.dim());
  for (Eigen::Index i = 0; i < set.count(); ++i) {
    const Eigen::VectorXd d = set.states.col(i) - mean;
    cov.noalias() += w[i] * d * d.transpose();
  }
  return MeanCov{mean, cov};
}

Eigen::MatrixXd gather_states(const Eigen::MatrixXd& states,
                              const std::vector<int>& indices) {
  Eigen::MatrixXd out(states.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int j = indices[i];
    if (j < 0 || j >= states.cols()) {
      throw InvalidArgumentError("gather_states: index out of range");
    }
    out.col(static_cast<Eigen::Index>(i)) = states.col(j);
  }
  return out;
}

}  // namespace tracklab
