// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Sequential importance sampling and the single-state particle filters built
// on it. The weight recursion is
//
//   w_t  proportional to  w_{t-1} * p(z|x_t) * p(x_t|x_{t-1}) / q(x_t|...)
//
// carried in the log domain. When the proposal is the transitional prior the
// prior and proposal densities cancel exactly and the increment reduces to
// the measurement log likelihood; the implementation exploits this rather
// than evaluating two densities that would only cancel.

#pragma once

#include <functional>
#include <memory>

#include "tracklab/motion.hpp"
#include "tracklab/particles.hpp"
#include "tracklab/resampling.hpp"
#include "tracklab/roughening.hpp"

namespace tracklab {

/// Measurement log likelihood of one particle state.
using LogLikelihoodFn =
    std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

/// Importance proposal density q(x_t | x_{t-1}, z_t).
class ProposalDensity {
 public:
  virtual ~ProposalDensity() = default;

  /// Draws a successor state for one particle.
  virtual Eigen::VectorXd propose(const Eigen::Ref<const Eigen::VectorXd>& prev,
                                  Rng& rng) const = 0;

  /// Log density of the proposal at `next` given `prev`.
  virtual double logpdf(const Eigen::Ref<const Eigen::VectorXd>& next,
                        const Eigen::Ref<const Eigen::VectorXd>& prev)
      const = 0;

  /// True when the proposal equals the transition prior, letting the weight
  /// update skip the exactly cancelling density ratio.
  virtual bool is_transitional_prior() const { return false; }
};

/// The transitional prior p(x_t | x_{t-1}) as a proposal.
class PriorProposal : public ProposalDensity {
 public:
  explicit PriorProposal(Dynamics dynamics) : dynamics_(std::move(dynamics)) {}

  Eigen::VectorXd propose(const Eigen::Ref<const Eigen::VectorXd>& prev,
                          Rng& rng) const override {
    return dynamics_.sample(prev, rng);
  }

  double logpdf(const Eigen::Ref<const Eigen::VectorXd>& next,
                const Eigen::Ref<const Eigen::VectorXd>& prev) const override {
    return mvn_logpdf(next, dynamics_.mean(prev), dynamics_.Q);
  }

  bool is_transitional_prior() const override { return true; }

  const Dynamics& dynamics() const { return dynamics_; }

 private:
  Dynamics dynamics_;
};

/// Shared filter configuration.
struct FilterConfig {
  /// Resampling fires when the effective sample size drops strictly below
  /// this threshold (in particles). The conventional default is N/2; set to
  /// N to resample on any non-uniform weight vector.
  double resample_threshold = 0.0;

  ResampleScheme scheme = ResampleScheme::kSystematic;
  RougheningParams roughening;
};

/// Point estimate with covariance.
struct Estimate {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// One sequential-importance-sampling step: propagate every particle through
/// the proposal, apply the weight recursion, renormalize. No resampling.
/// Throws DegenerateWeightsError when the updated weights carry no mass.
ParticleSet sis_step(const ParticleSet& prev, const ProposalDensity& proposal,
                     const Dynamics& dynamics, const LogLikelihoodFn& loglik,
                     Rng& rng);

/// Result of one full particle-filter step.
struct PfStepResult {
  ParticleSet set;
  Estimate estimate;
  bool resampled = false;
  /// True when the weight update degenerated and the filter recovered by
  /// keeping the propagated particles with uniform weights; the estimate is
  /// then the prior prediction.
  bool degenerate = false;
};

/// Generic particle filter step: SIS update, estimate from the weighted set
/// (before any resampling), then conditional resampling when the effective
/// sample size drops below the threshold, followed by roughening. A
/// degenerate weight update is recovered by resetting to uniform weights
/// over the propagated particles.
PfStepResult generic_pf_step(const ParticleSet& prev,
                             const ProposalDensity& proposal,
                             const Dynamics& dynamics,
                             const LogLikelihoodFn& loglik,
                             const FilterConfig& config, Rng& rng);

/// Bootstrap particle filter step: transitional-prior proposal and
/// unconditional resampling every step.
PfStepResult bootstrap_step(const ParticleSet& prev, const Dynamics& dynamics,
                            const LogLikelihoodFn& loglik,
                            const FilterConfig& config, Rng& rng);

}  // namespace tracklab
