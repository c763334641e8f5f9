// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Measurement models. Two distinct geometries are provided:
//
//  * range_bearing_*: a fixed sensor measures range and bearing to an
//    absolute target state; the bearing is the mathematical polar angle
//    atan2(dy, dx) measured counter-clockwise from the east axis.
//
//  * bearing_north_*: a bearings-only sensor observes a *relative* state
//    (target minus observer); the bearing is measured clockwise from north,
//    atan2(dx, dy), the marine-navigation convention.
//
// All bearing residuals are wrapped to (-pi, pi] before entering quadratic
// forms.

#pragma once

#include <Eigen/Dense>

#include "tracklab/types.hpp"

namespace tracklab {

/// Noise-free range/bearing observation of state x from sensor s. Throws
/// NumericError when the target coincides with the sensor (bearing
/// undefined).
RangeBearing range_bearing(const StateRef& x, const SensorPose& s);

/// Log likelihood of observing z given state x: independent Gaussian range
/// and bearing channels, bearing residual wrapped.
double range_bearing_logpdf(const RangeBearing& z, const StateRef& x,
                            const SensorPose& s, const MeasurementNoise& noise);

/// Jacobian of the range/bearing observation with respect to the state
/// (x, vx, y, vy), evaluated at x.
Eigen::Matrix<double, 2, 4> range_bearing_jacobian(const StateRef& x,
                                                   const SensorPose& s);

/// Noise-free north-referenced clockwise bearing of a relative state
/// (rx, rvx, ry, rvy): atan2(rx, ry). Throws NumericError at the origin.
double bearing_north(const StateRef& relative);

/// Log likelihood of a north-referenced bearing observation z of the
/// relative state, with wrapped Gaussian residual.
double bearing_north_logpdf(double z, const StateRef& relative,
                            double sigma_bearing);

/// Jacobian of the north-referenced bearing with respect to the relative
/// state.
Eigen::Matrix<double, 1, 4> bearing_north_jacobian(const StateRef& relative);

}  // namespace tracklab
