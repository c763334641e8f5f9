// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/measurement.hpp"

#include <cmath>
#include <numbers>

#include "tracklab/angles.hpp"
#include "tracklab/gaussian.hpp"

namespace tracklab {

RangeBearing range_bearing(const StateRef& x, const SensorPose& s) {
  const double dx = x[0] - s.x;
  const double dy = x[2] - s.y;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) {
    throw NumericError(
        "range_bearing: target coincides with the sensor; bearing undefined");
  }
  return RangeBearing{r, std::atan2(dy, dx)};
}

double range_bearing_logpdf(const RangeBearing& z, const StateRef& x,
                            const SensorPose& s,
                            const MeasurementNoise& noise) {
  if (!(noise.sigma_range > 0.0) || !(noise.sigma_bearing > 0.0)) {
    throw InvalidArgumentError(
        "range_bearing_logpdf: noise sigmas must be positive");
  }
  const RangeBearing pred = range_bearing(x, s);
  const double dr = (z.range - pred.range) / noise.sigma_range;
  const double db = wrap_angle(z.bearing - pred.bearing) / noise.sigma_bearing;
  return -0.5 * (dr * dr + db * db) -
         std::log(2.0 * std::numbers::pi * noise.sigma_range *
                  noise.sigma_bearing);
}

Eigen::Matrix<double, 2, 4> range_bearing_jacobian(const StateRef& x,
                                                   const SensorPose& s) {
  const double dx = x[0] - s.x;
  const double dy = x[2] - s.y;
  const double r2 = dx * dx + dy * dy;
  if (r2 == 0.0) {
    throw NumericError(
        "range_bearing_jacobian: target coincides with the sensor");
  }
  const double r = std::sqrt(r2);
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = dx / r;
  h(0, 2) = dy / r;
  h(1, 0) = -dy / r2;
  h(1, 2) = dx / r2;
  return h;
}

double bearing_north(const StateRef& relative) {
  const double rx = relative[0];
  const double ry = relative[2];
  if (rx == 0.0 && ry == 0.0) {
    throw NumericError(
        "bearing_north: relative position is zero; bearing undefined");
  }
  return std::atan2(rx, ry);
}

double bearing_north_logpdf(double z, const StateRef& relative,
                            double sigma_bearing) {
  if (!(sigma_bearing > 0.0)) {
    throw InvalidArgumentError(
        "bearing_north_logpdf: sigma must be positive");
  }
  const double resid = wrap_angle(z - bearing_north(relative));
  return normal_logpdf(resid, 0.0, sigma_bearing);
}

Eigen::Matrix<double, 1, 4> bearing_north_jacobian(const StateRef& relative) {
  const double rx = relative[0];
  const double ry = relative[2];
  const double r2 = rx * rx + ry * ry;
  if (r2 == 0.0) {
    throw NumericError(
        "bearing_north_jacobian: relative position is zero");
  }
  Eigen::Matrix<double, 1, 4> h = Eigen::Matrix<double, 1, 4>::Zero();
  h(0, 0) = ry / r2;
  h(0, 2) = -rx / r2;
  return h;
}

}  // namespace tracklab
