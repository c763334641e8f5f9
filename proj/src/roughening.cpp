// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/roughening.hpp"

#include <cmath>

namespace tracklab {

void roughen_states(Eigen::MatrixXd& states, const RougheningParams& params,
                    Rng& rng) {
  if (params.tuning_gain < 0.0) {
    throw InvalidArgumentError("roughen: tuning gain must be non-negative");
  }
  const Eigen::Index n = states.cols();
  const Eigen::Index d = states.rows();
  if (n <= 1 || params.tuning_gain == 0.0) {
    return;
  }
  const double shrink =
      std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d));
  Eigen::VectorXd sigma(d);
  for (Eigen::Index m = 0; m < d; ++m) {
    const double spread =
        states.row(m).maxCoeff() - states.row(m).minCoeff();
    const double scale = params.tuning_gain * spread * shrink;
    sigma[m] = params.scale_is_variance ? std::sqrt(scale) : scale;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index m = 0; m < d; ++m) {
      states(m, i) += sigma[m] * rng.normal();
    }
  }
}

void roughen(ParticleSet& set, const RougheningParams& params, Rng& rng) {
  roughen_states(set.states, params, rng);
}

}  // namespace tracklab
