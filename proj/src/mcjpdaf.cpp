// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/mcjpdaf.hpp"

#include <cmath>
#include <limits>

#include "tracklab/angles.hpp"
#include "tracklab/gaussian.hpp"

namespace tracklab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

PredictiveGaussian predictive_measurement_gaussian(
    const Eigen::MatrixXd& propagated_states, const Eigen::VectorXd& alpha,
    const SensorPose& sensor, const MeasurementNoise& noise) {
  const Eigen::Index n = propagated_states.cols();
  if (n == 0 || alpha.size() != n) {
    throw InvalidArgumentError(
        "predictive_measurement_gaussian: state/weight size mismatch");
  }
  Eigen::VectorXd ranges(n);
  Eigen::VectorXd bearings(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RangeBearing rb = range_bearing(propagated_states.col(i), sensor);
    ranges[i] = rb.range;
    bearings[i] = rb.bearing;
  }
  PredictiveGaussian out;
  out.mean[0] = alpha.dot(ranges);
  out.mean[1] = weighted_circular_mean(bearings, alpha);
  out.cov = Eigen::Matrix2d::Zero();
  out.cov(0, 0) = noise.sigma_range * noise.sigma_range;
  out.cov(1, 1) = noise.sigma_bearing * noise.sigma_bearing;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Vector2d d;
    d[0] = ranges[i] - out.mean[0];
    d[1] = wrap_angle(bearings[i] - out.mean[1]);
    out.cov.noalias() += alpha[i] * d * d.transpose();
  }
  return out;
}

std::vector<std::vector<int>> gate_measurements(
    const std::vector<RangeBearing>& frame,
    const std::vector<PredictiveGaussian>& predictions,
    double chi2_threshold) {
  if (!(chi2_threshold > 0.0)) {
    throw InvalidArgumentError(
        "gate_measurements: threshold must be positive");
  }
  std::vector<std::vector<int>> candidates(predictions.size());
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const PredictiveGaussian& pred = predictions[k];
    const double det = pred.cov.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) {
      throw NumericError(
          "gate_measurements: singular predictive covariance");
    }
    const Eigen::Matrix2d inv = pred.cov.inverse();
    for (std::size_t j = 0; j < frame.size(); ++j) {
      Eigen::Vector2d resid;
      resid[0] = frame[j].range - pred.mean[0];
      resid[1] = wrap_angle(frame[j].bearing - pred.mean[1]);
      const double d2 = resid.dot(inv * resid);
      if (d2 < chi2_threshold) {
        candidates[k].push_back(static_cast<int>(j) + 1);
      }
    }
  }
  return candidates;
}

namespace {

/// Internal pipeline shared by the single- and multiple-model trackers. Each
/// target carries regime labels; a single shared model makes the label
/// machinery a no-op that consumes no randomness.
struct CoreResult {
  std::vector<AugmentedParticleSet> targets;
  std::vector<Estimate> estimates;
  std::vector<Eigen::VectorXd> mode_probs;
  std::vector<ObserverAssociation> associations;
  int degenerate_observers = 0;
  int degenerate_targets = 0;
  bool resampled = false;
};

CoreResult jpda_core(const std::vector<AugmentedParticleSet>& targets,
                     const Eigen::MatrixXd& pi,
                     const std::vector<std::vector<Dynamics>>& target_models,
                     const std::vector<std::vector<RangeBearing>>& frames,
                     const std::vector<ObserverModel>& observers,
                     const JpdaParams& params, Rng& rng) {
  const std::size_t k_targets = targets.size();
  if (k_targets == 0) {
    throw InvalidArgumentError("jpda step: no targets");
  }
  if (target_models.size() != k_targets) {
    throw InvalidArgumentError(
        "jpda step: need one model list per target");
  }
  if (frames.size() != observers.size() || observers.empty()) {
    throw InvalidArgumentError(
        "jpda step: need one frame per observer and at least one observer");
  }

  // Stage 1: regime transition and transitional-prior propagation.
  std::vector<AugmentedParticleSet> propagated(k_targets);
  std::vector<Eigen::VectorXd> alpha(k_targets);
  for (std::size_t k = 0; k < k_targets; ++k) {
    const AugmentedParticleSet& prev = targets[k];
    if (prev.count() == 0) {
      throw InvalidArgumentError("jpda step: empty particle set");
    }
    const std::vector<int> advanced =
        regime_transition(prev.regimes, pi, rng);
    AugmentedParticleSet& next = propagated[k];
    next.states.resize(prev.dim(), prev.count());
    next.regimes = advanced;
    next.log_weights = prev.log_weights;
    for (Eigen::Index i = 0; i < prev.count(); ++i) {
      const int m = advanced[static_cast<std::size_t>(i)];
      if (m < 0 || m >= static_cast<int>(target_models[k].size())) {
        throw InvalidArgumentError("jpda step: label out of model range");
      }
      next.states.col(i) = target_models[k][static_cast<std::size_t>(m)]
                               .sample(prev.states.col(i), rng);
    }
    alpha[k] = to_linear_weights(prev.log_weights);
  }

  // Stage 2: per-observer association. Per-particle log factors accumulate
  // into the weight update.
  CoreResult result;
  result.associations.resize(observers.size());
  std::vector<Eigen::VectorXd> log_factor(k_targets);
  for (std::size_t k = 0; k < k_targets; ++k) {
    log_factor[k] = Eigen::VectorXd::Zero(propagated[k].count());
  }

  for (std::size_t i = 0; i < observers.size(); ++i) {
    const ObserverModel& obs = observers[i];
    const std::vector<RangeBearing>& frame = frames[i];
    const int m_count = static_cast<int>(frame.size());

    // Predictive Gaussians and gating.
    std::vector<PredictiveGaussian> predictions;
    predictions.reserve(k_targets);
    for (std::size_t k = 0; k < k_targets; ++k) {
      predictions.push_back(predictive_measurement_gaussian(
          propagated[k].states, alpha[k], obs.pose, obs.noise));
    }
    const std::vector<std::vector<int>> candidates =
        gate_measurements(frame, predictions, params.gate_threshold);

    // Per-particle measurement log likelihoods for gated pairs, and the
    // particle-approximated predictive log likelihood matrix.
    std::vector<Eigen::MatrixXd> loglik(k_targets);
    Eigen::MatrixXd log_pred_lik =
        Eigen::MatrixXd::Constant(m_count, static_cast<int>(k_targets),
                                  kNegInf);
    for (std::size_t k = 0; k < k_targets; ++k) {
      const Eigen::Index n = propagated[k].count();
      loglik[k] = Eigen::MatrixXd::Constant(m_count, n, kNegInf);
      for (int j : candidates[k]) {
        Eigen::VectorXd scored(n);
        for (Eigen::Index p = 0; p < n; ++p) {
          const double ll = range_bearing_logpdf(
              frame[static_cast<std::size_t>(j - 1)],
              propagated[k].states.col(p), obs.pose, obs.noise);
          loglik[k](j - 1, p) = ll;
          scored[p] = std::log(alpha[k][p]) + ll;
        }
        log_pred_lik(j - 1, static_cast<int>(k)) = log_sum_exp(scored);
      }
    }

    // Hypothesis posterior and marginals; a degenerate posterior downgrades
    // the frame to clutter-only.
    ObserverAssociation& assoc = result.associations[i];
    const std::vector<TargetToMeas> hypotheses =
        enumerate_hypotheses(candidates, m_count);
    try {
      const Eigen::VectorXd posterior = joint_association_posterior(
          hypotheses, obs.assoc, m_count, log_pred_lik);
      assoc.beta = marginal_association_probabilities(
          hypotheses, posterior, m_count, static_cast<int>(k_targets));
    } catch (const DegenerateAssociationError&) {
      assoc.degenerate = true;
      ++result.degenerate_observers;
      assoc.beta = Eigen::MatrixXd::Zero(m_count + 1,
                                         static_cast<int>(k_targets));
      assoc.beta.row(0).setOnes();
      continue;  // clutter-only frame: weight factors are 1.
    }

    // Per-particle soft update factor for this observer.
    for (std::size_t k = 0; k < k_targets; ++k) {
      const Eigen::Index n = propagated[k].count();
      std::vector<double> terms;
      for (Eigen::Index p = 0; p < n; ++p) {
        terms.clear();
        const double b0 = assoc.beta(0, static_cast<int>(k));
        if (b0 > 0.0) {
          terms.push_back(std::log(b0));
        }
        for (int j : candidates[k]) {
          const double bj = assoc.beta(j, static_cast<int>(k));
          if (bj > 0.0) {
            terms.push_back(std::log(bj) + loglik[k](j - 1, p));
          }
        }
        const double f =
            terms.empty()
                ? kNegInf
                : log_sum_exp(Eigen::Map<const Eigen::VectorXd>(
                      terms.data(), static_cast<Eigen::Index>(terms.size())));
        log_factor[k][p] += f;
      }
    }
  }

  // Stage 3: weight update, estimates, mode probabilities and conditional
  // resampling per target.
  result.targets.resize(k_targets);
  result.estimates.resize(k_targets);
  result.mode_probs.resize(k_targets);
  for (std::size_t k = 0; k < k_targets; ++k) {
    AugmentedParticleSet& set = propagated[k];
    const int s = static_cast<int>(target_models[k].size());
    Eigen::VectorXd lw = set.log_weights + log_factor[k];
    try {
      normalize_log_weights(lw);
      set.log_weights = std::move(lw);
    } catch (const DegenerateWeightsError&) {
      // Keep previous weights for the prior-predicted estimate, then reset
      // to uniform.
      ++result.degenerate_targets;
      const MeanCov prior_predicted =
          weighted_mean_cov(ParticleSet{set.states, set.log_weights});
      result.estimates[k] = Estimate{prior_predicted.mean,
                                     prior_predicted.cov};
      result.mode_probs[k] = mode_probabilities(set, s);
      set.log_weights = Eigen::VectorXd::Constant(
          set.count(), -std::log(static_cast<double>(set.count())));
      result.targets[k] = std::move(set);
      continue;
    }

    const MeanCov moments =
        weighted_mean_cov(ParticleSet{set.states, set.log_weights});
    result.estimates[k] = Estimate{moments.mean, moments.cov};
    result.mode_probs[k] = mode_probabilities(set, s);

    const double neff = effective_sample_size(set.log_weights);
    if (neff < params.filter.resample_threshold) {
      const Eigen::VectorXd w = to_linear_weights(set.log_weights);
      const int n = static_cast<int>(set.count());
      const std::vector<int> idx =
          params.filter.scheme == ResampleScheme::kMultinomial
              ? sample_indices_scan(w, n, rng)
              : sample_indices_stratified(w, n, rng);
      AugmentedParticleSet resampled;
      resampled.states = gather_states(set.states, idx);
      resampled.regimes.resize(idx.size());
      for (std::size_t p = 0; p < idx.size(); ++p) {
        resampled.regimes[p] =
            set.regimes[static_cast<std::size_t>(idx[p])];
      }
      resampled.log_weights = Eigen::VectorXd::Constant(
          n, -std::log(static_cast<double>(n)));
      roughen_states(resampled.states, params.filter.roughening, rng);
      set = std::move(resampled);
      result.resampled = true;
    }
    result.targets[k] = std::move(set);
  }
  return result;
}

}  // namespace

McjpdafStepResult mcjpdaf_step(
    const std::vector<ParticleSet>& targets,
    const std::vector<Dynamics>& dynamics,
    const std::vector<std::vector<RangeBearing>>& frames,
    const std::vector<ObserverModel>& observers, const JpdaParams& params,
    Rng& rng) {
  if (dynamics.size() != targets.size()) {
    throw InvalidArgumentError(
        "mcjpdaf_step: need one dynamics bundle per target");
  }
  std::vector<AugmentedParticleSet> augmented(targets.size());
  std::vector<std::vector<Dynamics>> models(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    augmented[k].states = targets[k].states;
    augmented[k].log_weights = targets[k].log_weights;
    augmented[k].regimes.assign(
        static_cast<std::size_t>(targets[k].count()), 0);
    models[k] = {dynamics[k]};
  }
  const Eigen::MatrixXd pi = Eigen::MatrixXd::Ones(1, 1);
  CoreResult core =
      jpda_core(augmented, pi, models, frames, observers, params, rng);

  McjpdafStepResult out;
  out.targets.resize(core.targets.size());
  for (std::size_t k = 0; k < core.targets.size(); ++k) {
    out.targets[k].states = std::move(core.targets[k].states);
    out.targets[k].log_weights = std::move(core.targets[k].log_weights);
  }
  out.estimates = std::move(core.estimates);
  out.associations = std::move(core.associations);
  out.degenerate_observers = core.degenerate_observers;
  out.degenerate_targets = core.degenerate_targets;
  out.resampled = core.resampled;
  return out;
}

McmmjpdafStepResult mcmmjpdaf_step(
    const std::vector<AugmentedParticleSet>& targets,
    const Eigen::MatrixXd& pi, const std::vector<Dynamics>& models,
    const std::vector<std::vector<RangeBearing>>& frames,
    const std::vector<ObserverModel>& observers, const JpdaParams& params,
    Rng& rng) {
  if (models.empty()) {
    throw InvalidArgumentError("mcmmjpdaf_step: need at least one model");
  }
  const std::vector<std::vector<Dynamics>> per_target(targets.size(), models);
  CoreResult core =
      jpda_core(targets, pi, per_target, frames, observers, params, rng);

  McmmjpdafStepResult out;
  out.targets = std::move(core.targets);
  out.estimates = std::move(core.estimates);
  out.mode_probs = std::move(core.mode_probs);
  out.associations = std::move(core.associations);
  out.degenerate_observers = core.degenerate_observers;
  out.degenerate_targets = core.degenerate_targets;
  out.resampled = core.resampled;
  return out;
}

}  // namespace tracklab
