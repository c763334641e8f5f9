// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Extended Kalman filter baseline for the range/bearing and bearings-only
// measurement geometries. The measurement Jacobian is evaluated at the
// predicted mean and the bearing innovation is wrapped to (-pi, pi]; the
// covariance update uses the Joseph form for numerical symmetry.

#pragma once

#include <Eigen/Dense>

#include "tracklab/measurement.hpp"
#include "tracklab/motion.hpp"
#include "tracklab/types.hpp"

namespace tracklab {

/// Gaussian state belief.
struct GaussianBelief {
  StateVec mean;
  Eigen::Matrix4d cov;
};

/// Time update: mean -> F * mean - input, cov -> F * cov * F' + Q.
GaussianBelief ekf_predict(const GaussianBelief& belief,
                           const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q,
                           const Eigen::Vector4d& input =
                               Eigen::Vector4d::Zero());

/// Range/bearing measurement update. Throws NumericError when the innovation
/// covariance is singular.
GaussianBelief ekf_update_range_bearing(const GaussianBelief& predicted,
                                        const RangeBearing& z,
                                        const SensorPose& sensor,
                                        const MeasurementNoise& noise);

/// North-referenced bearings-only measurement update on a relative state.
GaussianBelief ekf_update_bearing_north(const GaussianBelief& predicted,
                                        double z_bearing,
                                        double sigma_bearing);

/// Convenience predict + range/bearing update.
GaussianBelief ekf_step(const GaussianBelief& belief, const RangeBearing& z,
                        const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q,
                        const SensorPose& sensor,
                        const MeasurementNoise& noise);

}  // namespace tracklab
