// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/single_filters.hpp"

#include <cmath>

namespace tracklab {

namespace {

/// Propagates all particles and returns the un-normalized updated log
/// weights alongside the new states.
struct Propagated {
  Eigen::MatrixXd states;
  Eigen::VectorXd log_weights;  // un-normalized
};

Propagated propagate_and_weight(const ParticleSet& prev,
                                const ProposalDensity& proposal,
                                const Dynamics& dynamics,
                                const LogLikelihoodFn& loglik, Rng& rng) {
  const Eigen::Index n = prev.count();
  if (n == 0) {
    throw InvalidArgumentError("sis_step: empty particle set");
  }
  Propagated out;
  out.states.resize(prev.dim(), n);
  out.log_weights.resize(n);
  const bool prior_proposal = proposal.is_transitional_prior();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd next = proposal.propose(prev.states.col(i), rng);
    out.states.col(i) = next;
    double increment = loglik(next);
    if (!prior_proposal) {
      increment += mvn_logpdf(next, dynamics.mean(prev.states.col(i)),
                              dynamics.Q) -
                   proposal.logpdf(next, prev.states.col(i));
    }
    out.log_weights[i] = prev.log_weights[i] + increment;
  }
  return out;
}

}  // namespace

ParticleSet sis_step(const ParticleSet& prev, const ProposalDensity& proposal,
                     const Dynamics& dynamics, const LogLikelihoodFn& loglik,
                     Rng& rng) {
  Propagated p = propagate_and_weight(prev, proposal, dynamics, loglik, rng);
  normalize_log_weights(p.log_weights);
  return ParticleSet{std::move(p.states), std::move(p.log_weights)};
}

PfStepResult generic_pf_step(const ParticleSet& prev,
                             const ProposalDensity& proposal,
                             const Dynamics& dynamics,
                             const LogLikelihoodFn& loglik,
                             const FilterConfig& config, Rng& rng) {
  Propagated p = propagate_and_weight(prev, proposal, dynamics, loglik, rng);

  PfStepResult result;
  result.set.states = std::move(p.states);
  try {
    normalize_log_weights(p.log_weights);
    result.set.log_weights = std::move(p.log_weights);
  } catch (const DegenerateWeightsError&) {
    // Recovery: the measurement carried no usable information. Keep the
    // propagated particles with the previous weights for the estimate (the
    // prior prediction), then reset to uniform.
    result.degenerate = true;
    result.set.log_weights = prev.log_weights;
    const MeanCov prior_predicted = weighted_mean_cov(result.set);
    result.estimate = Estimate{prior_predicted.mean, prior_predicted.cov};
    result.set.log_weights = Eigen::VectorXd::Constant(
        prev.count(), -std::log(static_cast<double>(prev.count())));
    return result;
  }

  const MeanCov moments = weighted_mean_cov(result.set);
  result.estimate = Estimate{moments.mean, moments.cov};

  const double neff = effective_sample_size(result.set.log_weights);
  if (neff < config.resample_threshold) {
    result.set = resample(result.set, config.scheme, rng);
    roughen(result.set, config.roughening, rng);
    result.resampled = true;
  }
  return result;
}

PfStepResult bootstrap_step(const ParticleSet& prev, const Dynamics& dynamics,
                            const LogLikelihoodFn& loglik,
                            const FilterConfig& config, Rng& rng) {
  const PriorProposal proposal(dynamics);
  Propagated p = propagate_and_weight(prev, proposal, dynamics, loglik, rng);

  PfStepResult result;
  result.set.states = std::move(p.states);
  try {
    normalize_log_weights(p.log_weights);
    result.set.log_weights = std::move(p.log_weights);
  } catch (const DegenerateWeightsError&) {
    result.degenerate = true;
    result.set.log_weights = prev.log_weights;
    const MeanCov prior_predicted = weighted_mean_cov(result.set);
    result.estimate = Estimate{prior_predicted.mean, prior_predicted.cov};
    result.set.log_weights = Eigen::VectorXd::Constant(
        prev.count(), -std::log(static_cast<double>(prev.count())));
    return result;
  }

  const MeanCov moments = weighted_mean_cov(result.set);
  result.estimate = Estimate{moments.mean, moments.cov};

  result.set = resample(result.set, config.scheme, rng);
  roughen(result.set, config.roughening, rng);
  result.resampled = true;
  return result;
}

}  // namespace tracklab
