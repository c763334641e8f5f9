// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/mmpf.hpp"

#include <cmath>

namespace tracklab {

namespace {

void check_row_stochastic(const Eigen::MatrixXd& pi) {
  if (pi.rows() != pi.cols() || pi.rows() == 0) {
    throw InvalidArgumentError(
        "regime_transition: transition matrix must be square and non-empty");
  }
  for (Eigen::Index r = 0; r < pi.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < pi.cols(); ++c) {
      if (!(pi(r, c) >= 0.0)) {
        throw InvalidArgumentError(
            "regime_transition: transition probabilities must be "
            "non-negative");
      }
      sum += pi(r, c);
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgumentError(
          "regime_transition: transition matrix rows must sum to 1");
    }
  }
}

/// Propagates each particle through the model its (already advanced) label
/// selects and accumulates the un-normalized weight update.
AugmentedParticleSet propagate_regimes(const AugmentedParticleSet& prev,
                                       const std::vector<int>& new_regimes,
                                       const std::vector<Dynamics>& models,
                                       const LogLikelihoodFn& loglik,
                                       Rng& rng) {
  const Eigen::Index n = prev.count();
  if (n == 0) {
    throw InvalidArgumentError("rc_sis_step: empty particle set");
  }
  if (static_cast<Eigen::Index>(new_regimes.size()) != n ||
      static_cast<Eigen::Index>(prev.regimes.size()) != n) {
    throw InvalidArgumentError("rc_sis_step: label count mismatch");
  }
  AugmentedParticleSet out;
  out.states.resize(prev.dim(), n);
  out.regimes = new_regimes;
  out.log_weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int m = new_regimes[static_cast<std::size_t>(i)];
    if (m < 0 || m >= static_cast<int>(models.size())) {
      throw InvalidArgumentError("rc_sis_step: label out of model range");
    }
    out.states.col(i) =
        models[static_cast<std::size_t>(m)].sample(prev.states.col(i), rng);
    out.log_weights[i] = prev.log_weights[i] + loglik(out.states.col(i));
  }
  return out;
}

}  // namespace

std::vector<int> regime_transition(const std::vector<int>& regimes,
                                   const Eigen::MatrixXd& pi, Rng& rng) {
  check_row_stochastic(pi);
  const int s = static_cast<int>(pi.rows());
  if (s == 1) {
    for (int r : regimes) {
      if (r != 0) {
        throw InvalidArgumentError("regime_transition: label out of range");
      }
    }
    return regimes;
  }
  std::vector<int> out(regimes.size());
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    const int from = regimes[i];
    if (from < 0 || from >= s) {
      throw InvalidArgumentError("regime_transition: label out of range");
    }
    const double u = rng.uniform();
    int to = 0;
    double cum = pi(from, 0);
    while (cum < u && to < s - 1) {
      ++to;
      cum += pi(from, to);
    }
    out[i] = to;
  }
  return out;
}

AugmentedParticleSet rc_sis_step(const AugmentedParticleSet& prev,
                                 const std::vector<int>& new_regimes,
                                 const std::vector<Dynamics>& models,
                                 const LogLikelihoodFn& loglik, Rng& rng) {
  AugmentedParticleSet out =
      propagate_regimes(prev, new_regimes, models, loglik, rng);
  normalize_log_weights(out.log_weights);
  return out;
}

Eigen::VectorXd mode_probabilities(const AugmentedParticleSet& set,
                                   int num_models) {
  if (num_models <= 0) {
    throw InvalidArgumentError("mode_probabilities: need at least one model");
  }
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(num_models);
  const Eigen::VectorXd w = to_linear_weights(set.log_weights);
  for (Eigen::Index i = 0; i < set.count(); ++i) {
    const int m = set.regimes[static_cast<std::size_t>(i)];
    if (m < 0 || m >= num_models) {
      throw InvalidArgumentError("mode_probabilities: label out of range");
    }
    probs[m] += w[i];
  }
  return probs;
}

MmpfStepResult mmpf_step(const AugmentedParticleSet& prev,
                         const Eigen::MatrixXd& pi,
                         const std::vector<Dynamics>& models,
                         const LogLikelihoodFn& loglik,
                         const FilterConfig& config, Rng& rng) {
  const int s = static_cast<int>(models.size());
  if (pi.rows() != s) {
    throw InvalidArgumentError(
        "mmpf_step: transition matrix size must match model count");
  }
  const std::vector<int> advanced = regime_transition(prev.regimes, pi, rng);

  MmpfStepResult result;
  result.set = propagate_regimes(prev, advanced, models, loglik, rng);
  try {
    normalize_log_weights(result.set.log_weights);
  } catch (const DegenerateWeightsError&) {
    // Recovery: keep the propagated particles, report the prior-predicted
    // estimate under the previous weights, then reset to uniform.
    result.degenerate = true;
    result.set.log_weights = prev.log_weights;
    const MeanCov prior_predicted =
        weighted_mean_cov(ParticleSet{result.set.states,
                                      result.set.log_weights});
    result.estimate = Estimate{prior_predicted.mean, prior_predicted.cov};
    result.mode_probs = mode_probabilities(result.set, s);
    result.set.log_weights = Eigen::VectorXd::Constant(
        prev.count(), -std::log(static_cast<double>(prev.count())));
    return result;
  }

  const MeanCov moments =
      weighted_mean_cov(ParticleSet{result.set.states, result.set.log_weights});
  result.estimate = Estimate{moments.mean, moments.cov};
  result.mode_probs = mode_probabilities(result.set, s);

  const double neff = effective_sample_size(result.set.log_weights);
  if (neff < config.resample_threshold) {
    const Eigen::VectorXd w = to_linear_weights(result.set.log_weights);
    const int n = static_cast<int>(result.set.count());
    const std::vector<int> idx =
        config.scheme == ResampleScheme::kMultinomial
            ? sample_indices_scan(w, n, rng)
            : sample_indices_stratified(w, n, rng);
    AugmentedParticleSet resampled;
    resampled.states = gather_states(result.set.states, idx);
    resampled.regimes.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      resampled.regimes[i] =
          result.set.regimes[static_cast<std::size_t>(idx[i])];
    }
    resampled.log_weights = Eigen::VectorXd::Constant(
        n, -std::log(static_cast<double>(n)));
    roughen_states(resampled.states, config.roughening, rng);
    result.set = std::move(resampled);
    result.resampled = true;
  }
  return result;
}

std::vector<int> stratified_initial_regimes(
    int count, const Eigen::VectorXd& initial_probs, Rng& rng) {
  if (count <= 0 || initial_probs.size() == 0) {
    throw InvalidArgumentError(
        "stratified_initial_regimes: need positive count and at least one "
        "regime");
  }
  double sum = 0.0;
  for (Eigen::Index r = 0; r < initial_probs.size(); ++r) {
    if (!(initial_probs[r] >= 0.0)) {
      throw InvalidArgumentError(
          "stratified_initial_regimes: probabilities must be non-negative");
    }
    sum += initial_probs[r];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgumentError(
        "stratified_initial_regimes: probabilities must sum to 1");
  }
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index r = 0; r < initial_probs.size(); ++r) {
    const int block =
        static_cast<int>(std::floor(initial_probs[r] * count));
    for (int i = 0; i < block; ++i) {
      labels.push_back(static_cast<int>(r));
    }
  }
  // Remaining slots (at most s - 1) drawn from the initial distribution.
  while (static_cast<int>(labels.size()) < count) {
    const double u = rng.uniform();
    int r = 0;
    double cum = initial_probs[0];
    while (cum < u && r < static_cast<int>(initial_probs.size()) - 1) {
      ++r;
      cum += initial_probs[r];
    }
    labels.push_back(r);
  }
  return labels;
}

}  // namespace tracklab
