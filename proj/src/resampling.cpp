// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/resampling.hpp"

#include <cmath>

#include "tracklab/gaussian.hpp"

namespace tracklab {

namespace {

void check_categorical(const Eigen::VectorXd& rho, int draws,
                       const char* where) {
  if (rho.size() == 0) {
    throw InvalidArgumentError(std::string(where) + ": empty distribution");
  }
  if (draws <= 0) {
    throw InvalidArgumentError(std::string(where) +
                               ": draw count must be positive");
  }
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= 0.0)) {
      throw InvalidArgumentError(std::string(where) +
                                 ": probabilities must be non-negative");
    }
  }
}

}  // namespace

std::vector<int> sample_indices_scan(const Eigen::VectorXd& rho, int draws,
                                     Rng& rng) {
  check_categorical(rho, draws, "sample_indices_scan");
  const int n = static_cast<int>(rho.size());
  std::vector<int> out(static_cast<std::size_t>(draws));
  for (int r = 0; r < draws; ++r) {
    const double u = rng.uniform();
    int m = 0;
    double cum = rho[0];
    while (cum < u && m < n - 1) {
      ++m;
      cum += rho[m];
    }
    out[static_cast<std::size_t>(r)] = m;
  }
  return out;
}

std::vector<int> sample_indices_stratified(const Eigen::VectorXd& rho,
                                           int draws, Rng& rng) {
  check_categorical(rho, draws, "sample_indices_stratified");
  const int n = static_cast<int>(rho.size());
  const double u1 = rng.uniform() / static_cast<double>(draws);
  std::vector<int> out(static_cast<std::size_t>(draws));
  int m = 0;
  double cum = rho[0];
  for (int r = 0; r < draws; ++r) {
    const double u =
        u1 + static_cast<double>(r) / static_cast<double>(draws);
    while (cum < u && m < n - 1) {
      ++m;
      cum += rho[m];
    }
    out[static_cast<std::size_t>(r)] = m;
  }
  return out;
}

namespace {

ParticleSet gathered_uniform(const ParticleSet& set,
                             const std::vector<int>& idx) {
  ParticleSet out;
  out.states = gather_states(set.states, idx);
  out.log_weights = Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(idx.size()),
      -std::log(static_cast<double>(idx.size())));
  return out;
}

}  // namespace

ParticleSet multinomial_resample(const ParticleSet& set, Rng& rng) {
  const Eigen::VectorXd w = to_linear_weights(set.log_weights);
  const std::vector<int> idx =
      sample_indices_scan(w, static_cast<int>(set.count()), rng);
  return gathered_uniform(set, idx);
}

ParticleSet systematic_resample(const ParticleSet& set, Rng& rng) {
  const Eigen::VectorXd w = to_linear_weights(set.log_weights);
  const std::vector<int> idx =
      sample_indices_stratified(w, static_cast<int>(set.count()), rng);
  return gathered_uniform(set, idx);
}

ParticleSet weighted_resample(const ParticleSet& set, const Eigen::VectorXd& g,
                              IndexSamplerMethod method, Rng& rng) {
  if (g.size() != set.count()) {
    throw InvalidArgumentError(
        "weighted_resample: selection weight count must match particle "
        "count");
  }
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0)) {
      throw InvalidArgumentError(
          "weighted_resample: selection weights must be strictly positive");
    }
  }
  const Eigen::VectorXd rho = g / g.sum();
  const int n = static_cast<int>(set.count());
  const std::vector<int> idx =
      method == IndexSamplerMethod::kScan
          ? sample_indices_scan(rho, n, rng)
          : sample_indices_stratified(rho, n, rng);
  ParticleSet out;
  out.states = gather_states(set.states, idx);
  out.log_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = idx[static_cast<std::size_t>(i)];
    out.log_weights[i] = set.log_weights[j] - std::log(rho[j]);
  }
  normalize_log_weights(out.log_weights);
  return out;
}

ParticleSet resample(const ParticleSet& set, ResampleScheme scheme, Rng& rng) {
  switch (scheme) {
    case ResampleScheme::kMultinomial:
      return multinomial_resample(set, rng);
    case ResampleScheme::kSystematic:
      return systematic_resample(set, rng);
  }
  throw InvalidArgumentError("resample: unknown scheme");
}

}  // namespace tracklab
