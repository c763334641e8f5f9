// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/ekf.hpp"

#include <cmath>

#include "tracklab/angles.hpp"

namespace tracklab {

namespace {

/// Joseph-form measurement update shared by both geometries.
template <int M>
GaussianBelief joseph_update(const GaussianBelief& predicted,
                             const Eigen::Matrix<double, M, 1>& innovation,
                             const Eigen::Matrix<double, M, 4>& h,
                             const Eigen::Matrix<double, M, M>& r) {
  const Eigen::Matrix<double, M, M> s =
      h * predicted.cov * h.transpose() + r;
  const double det = s.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
    throw NumericError("ekf update: singular innovation covariance");
  }
  const Eigen::Matrix<double, 4, M> k =
      predicted.cov * h.transpose() * s.inverse();
  GaussianBelief out;
  out.mean = predicted.mean + k * innovation;
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
  out.cov = ikh * predicted.cov * ikh.transpose() + k * r * k.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

}  // namespace

GaussianBelief ekf_predict(const GaussianBelief& belief,
                           const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q,
                           const Eigen::Vector4d& input) {
  GaussianBelief out;
  out.mean = F * belief.mean - input;
  out.cov = F * belief.cov * F.transpose() + Q;
  return out;
}

GaussianBelief ekf_update_range_bearing(const GaussianBelief& predicted,
                                        const RangeBearing& z,
                                        const SensorPose& sensor,
                                        const MeasurementNoise& noise) {
  const RangeBearing pred = range_bearing(predicted.mean, sensor);
  Eigen::Vector2d innovation;
  innovation[0] = z.range - pred.range;
  innovation[1] = wrap_angle(z.bearing - pred.bearing);
  const Eigen::Matrix<double, 2, 4> h =
      range_bearing_jacobian(predicted.mean, sensor);
  Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
  r(0, 0) = noise.sigma_range * noise.sigma_range;
  r(1, 1) = noise.sigma_bearing * noise.sigma_bearing;
  return joseph_update<2>(predicted, innovation, h, r);
}

GaussianBelief ekf_update_bearing_north(const GaussianBelief& predicted,
                                        double z_bearing,
                                        double sigma_bearing) {
  Eigen::Matrix<double, 1, 1> innovation;
  innovation[0] = wrap_angle(z_bearing - bearing_north(predicted.mean));
  const Eigen::Matrix<double, 1, 4> h =
      bearing_north_jacobian(predicted.mean);
  Eigen::Matrix<double, 1, 1> r;
  r(0, 0) = sigma_bearing * sigma_bearing;
  return joseph_update<1>(predicted, innovation, h, r);
}

GaussianBelief ekf_step(const GaussianBelief& belief, const RangeBearing& z,
                        const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q,
                        const SensorPose& sensor,
                        const MeasurementNoise& noise) {
  return ekf_update_range_bearing(ekf_predict(belief, F, Q), z, sensor, noise);
}

}  // namespace tracklab
