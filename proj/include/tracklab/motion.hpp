// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Linear-Gaussian motion models on the planar state (x, vx, y, vy):
// constant-velocity and coordinated-turn transition matrices, the
// discretized white-noise-acceleration process covariance, and the sampled /
// evaluated state transition density used by the particle filters.

#pragma once

#include <Eigen/Dense>

#include "tracklab/gaussian.hpp"
#include "tracklab/rng.hpp"
#include "tracklab/types.hpp"

namespace tracklab {

/// Kind of single-step kinematic model.
enum class MotionKind {
  kConstantVelocity,
  kCoordinatedTurn,
};

/// One kinematic regime: a model kind, its turn rate (rad/s, ignored for
/// constant velocity; positive rates turn counter-clockwise, negative rates
/// clockwise), and the sampling period in seconds.
struct TransitionModel {
  MotionKind kind = MotionKind::kConstantVelocity;
  double turn_rate = 0.0;
  double step = 1.0;
};

/// Constant-velocity transition matrix for sampling period T.
Eigen::Matrix4d cv_matrix(double T);

/// Coordinated-turn transition matrix for turn rate omega (rad/s) and
/// sampling period T. The velocity sub-block is a rotation by omega*T
/// (counter-clockwise for omega > 0). For |omega| below 1e-9 the analytic
/// constant-velocity limit is returned so the matrix is continuous in omega.
Eigen::Matrix4d ct_matrix(double omega, double T);

/// Transition matrix for an arbitrary model description.
Eigen::Matrix4d transition_matrix(const TransitionModel& model);

/// Discretized white-noise-acceleration process covariance with acceleration
/// power spectral densities sigma_x^2 and sigma_y^2 on the two axes:
/// per-axis block [[s^2 T^3/3, s^2 T^2/2], [s^2 T^2/2, s^2 T]] on the
/// (position, velocity) pair, zero cross-axis correlation.
Eigen::Matrix4d white_noise_q(double sigma_x, double sigma_y, double T);

/// Per-step propagation bundle: x_next = F * x - input + L * n with
/// n ~ N(0, I) and L the lower Cholesky factor of Q. `input` is a known
/// deterministic control term (zero by default; used by the relative-state
/// bearings-only geometry where it carries the observer's velocity change).
/// Matrices are dynamically sized so stacked multi-target states work with
/// block-diagonal F and Q.
struct Dynamics {
  Eigen::MatrixXd F;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd chol_q;
  Eigen::VectorXd input;

  static Dynamics make(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Q);
  static Dynamics make(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Q,
                       const Eigen::VectorXd& input);

  /// Draws one successor state.
  Eigen::VectorXd sample(const Eigen::Ref<const Eigen::VectorXd>& x,
                         Rng& rng) const;

  /// Deterministic part of the transition: F * x - input.
  Eigen::VectorXd mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Block-diagonal stacking of several per-target dynamics into one joint
/// propagation bundle (inputs concatenate).
Dynamics stack_dynamics(const std::vector<Dynamics>& parts);

/// Samples x_next ~ N(F * x, Q).
StateVec propagate_sample(const StateVec& x, const Eigen::Matrix4d& F,
                          const Eigen::Matrix4d& Q, Rng& rng);

/// Log density of the transition N(F * prev, Q) evaluated at next. Throws
/// NumericError when Q is singular.
double transition_logpdf(const StateVec& next, const StateVec& prev,
                         const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q);

/// Deterministic input picked up by a platform-relative state when the
/// observing platform moves between steps: U = own_next - F * own_prev, so
/// that relative kinematics follow x_next = F * x - U + noise. For a platform
/// whose position advances with its pre-step velocity this reduces to zeros
/// in the position slots and the velocity change in the velocity slots.
Eigen::Vector4d ownship_input(const StateVec& own_next, const StateVec& own_prev,
                              const Eigen::Matrix4d& F);

}  // namespace tracklab
