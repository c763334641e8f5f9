// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Angle arithmetic helpers. Every bearing residual in the library must pass
// through wrap_angle before entering a quadratic form; bearings live on the
// circle and naive subtraction produces spurious 2*pi jumps.

#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "tracklab/types.hpp"

namespace tracklab {

/// Wraps an angle in radians to the half-open interval (-pi, pi].
inline double wrap_angle(double a) {
  const double pi = std::numbers::pi;
  double r = std::remainder(a, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

/// Weighted circular mean of a set of angles: atan2 of the weighted average
/// sine and cosine. Weights need not be normalized but must not all be zero.
/// Returns a value in (-pi, pi].
inline double weighted_circular_mean(const Eigen::VectorXd& angles,
                                     const Eigen::VectorXd& weights) {
  if (angles.size() != weights.size() || angles.size() == 0) {
    throw InvalidArgumentError(
        "weighted_circular_mean: angle and weight vectors must be the same "
        "non-zero length");
  }
  double s = 0.0;
  double c = 0.0;
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    s += weights[i] * std::sin(angles[i]);
    c += weights[i] * std::cos(angles[i]);
  }
  if (s == 0.0 && c == 0.0) {
    throw NumericError(
        "weighted_circular_mean: resultant vector is zero; mean undefined");
  }
  return wrap_angle(std::atan2(s, c));
}

}  // namespace tracklab
