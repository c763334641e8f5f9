// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/ippf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tracklab/gaussian.hpp"

namespace tracklab {

std::vector<std::vector<int>> crossover_indices(
    const std::vector<Eigen::VectorXd>& rho, int draws,
    IndexSamplerMethod method, Rng& rng) {
  std::vector<std::vector<int>> maps;
  maps.reserve(rho.size());
  for (const Eigen::VectorXd& dist : rho) {
    std::vector<int> map = method == IndexSamplerMethod::kScan
                               ? sample_indices_scan(dist, draws, rng)
                               : sample_indices_stratified(dist, draws, rng);
    if (method == IndexSamplerMethod::kStratified) {
      std::shuffle(map.begin(), map.end(), rng.engine());
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

IppfStepResult ippf_step(const PartitionedSet& prev,
                         const std::vector<Dynamics>& dynamics,
                         const PartitionLogLikFn& loglik,
                         const FilterConfig& config, IndexSamplerMethod method,
                         Rng& rng) {
  const int k_targets = prev.num_partitions;
  const Eigen::Index n = prev.count();
  if (k_targets <= 0 || prev.states.rows() != 4 * k_targets) {
    throw InvalidArgumentError(
        "ippf_step: state rows must equal 4 * num_partitions");
  }
  if (static_cast<int>(dynamics.size()) != k_targets) {
    throw InvalidArgumentError(
        "ippf_step: need one dynamics bundle per partition");
  }
  if (n == 0) {
    throw InvalidArgumentError("ippf_step: empty particle set");
  }

  // Stage 1: propose each partition from its transitional prior and score it
  // against its own measurement (secondary weights).
  std::vector<Eigen::MatrixXd> proposed(static_cast<std::size_t>(k_targets));
  std::vector<Eigen::VectorXd> log_g(static_cast<std::size_t>(k_targets));
  std::vector<Eigen::VectorXd> rho(static_cast<std::size_t>(k_targets));
  for (int k = 0; k < k_targets; ++k) {
    Eigen::MatrixXd block(4, n);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      block.col(i) =
          dynamics[static_cast<std::size_t>(k)].sample(
              prev.states.block(4 * k, i, 4, 1), rng);
      g[i] = loglik(k, block.col(i));
    }
    const double total = log_sum_exp(g);
    if (!std::isfinite(total)) {
      throw DegenerateWeightsError(
          "ippf_step: secondary weights of partition " + std::to_string(k) +
          " carry no mass");
    }
    rho[static_cast<std::size_t>(k)] = (g.array() - total).exp();
    proposed[static_cast<std::size_t>(k)] = std::move(block);
    log_g[static_cast<std::size_t>(k)] = std::move(g);
  }

  // Stage 2: independent per-partition crossover index maps.
  const std::vector<std::vector<int>> maps =
      crossover_indices(rho, static_cast<int>(n), method, rng);

  // Stage 3: reassemble joint particles and correct the importance weights.
  IppfStepResult result;
  result.set.num_partitions = k_targets;
  result.set.states.resize(4 * k_targets, n);
  result.set.log_weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lw = 0.0;
    for (int k = 0; k < k_targets; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      const int j = maps[ks][static_cast<std::size_t>(i)];
      result.set.states.block(4 * k, i, 4, 1) = proposed[ks].col(j);
      // prev weight * g / rho, all in logs; g/rho contributes the joint
      // likelihood over the selection bias.
      lw += prev.log_weights[j] + log_g[ks][j] -
            std::log(rho[ks][j]);
    }
    result.set.log_weights[i] = lw;
  }
  normalize_log_weights(result.set.log_weights);

  // Stage 4: per-target estimates from the weighted joint set, before
  // resampling.
  const Eigen::VectorXd w = to_linear_weights(result.set.log_weights);
  result.estimates.reserve(static_cast<std::size_t>(k_targets));
  for (int k = 0; k < k_targets; ++k) {
    const Eigen::MatrixXd block = result.set.states.middleRows(4 * k, 4);
    const Eigen::VectorXd mean = block * w;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd d = block.col(i) - mean;
      cov.noalias() += w[i] * d * d.transpose();
    }
    result.estimates.push_back(Estimate{mean, cov});
  }

  // Stage 5: conditional resampling of whole joint particles.
  const double neff = effective_sample_size(result.set.log_weights);
  if (neff < config.resample_threshold) {
    ParticleSet flat{result.set.states, result.set.log_weights};
    flat = resample(flat, config.scheme, rng);
    roughen(flat, config.roughening, rng);
    result.set.states = std::move(flat.states);
    result.set.log_weights = std::move(flat.log_weights);
    result.resampled = true;
  }
  return result;
}

}  // namespace tracklab
