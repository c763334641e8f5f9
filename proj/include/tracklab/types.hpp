// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Core state types, unit constants and the error hierarchy shared by every
// module in the library.

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tracklab {

/// Planar kinematic state, ordered (x, vx, y, vy): position and velocity on
/// the east axis followed by position and velocity on the north axis.
using StateVec = Eigen::Vector4d;

/// Read-only view of a 4-dimensional state, usable with segments of larger
/// (stacked multi-target) state vectors.
using StateRef = Eigen::Ref<const Eigen::Vector4d>;

/// Fixed planar position of a sensor platform.
struct SensorPose {
  double x = 0.0;
  double y = 0.0;
};

/// Standard deviations of the range and bearing measurement noise channels.
struct MeasurementNoise {
  double sigma_range = 1.0;
  double sigma_bearing = 1.0;
};

/// A single range/bearing observation. Bearings are in radians, wrapped to
/// (-pi, pi].
struct RangeBearing {
  double range = 0.0;
  double bearing = 0.0;
};

/// One international knot in metres per second.
inline constexpr double kKnotsToMps = 0.514444;

/// Base class for every error raised by the library.
class TrackError : public std::runtime_error {
 public:
  explicit TrackError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a caller violates a documented precondition (bad sizes, bad
/// configuration values, incompatible scenario/filter pairings). Maps to CLI
/// exit code 2.
class InvalidArgumentError : public TrackError {
 public:
  explicit InvalidArgumentError(const std::string& what) : TrackError(what) {}
};

/// Raised when a numeric operation cannot proceed (non-positive-definite
/// covariance after jitter retry, singular innovation covariance, ...). Maps
/// to CLI exit code 3.
class NumericError : public TrackError {
 public:
  explicit NumericError(const std::string& what) : TrackError(what) {}
};

/// Raised when an importance-weight vector has no usable mass (all weights
/// underflow to zero). Recoverable at the filter layer, which substitutes the
/// prior-predicted estimate and resets to uniform weights.
class DegenerateWeightsError : public NumericError {
 public:
  explicit DegenerateWeightsError(const std::string& what)
      : NumericError(what) {}
};

/// Raised when every data-association hypothesis for an observer scores zero
/// posterior probability. Recoverable at the tracker layer, which treats the
/// observer's frame as clutter-only for that step.
class DegenerateAssociationError : public NumericError {
 public:
  explicit DegenerateAssociationError(const std::string& what)
      : NumericError(what) {}
};

}  // namespace tracklab
