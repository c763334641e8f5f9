// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/motion.hpp"

#include <cmath>

namespace tracklab {

Eigen::Matrix4d cv_matrix(double T) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 1) = T;
  f(2, 3) = T;
  return f;
}

Eigen::Matrix4d ct_matrix(double omega, double T) {
  if (std::abs(omega) < 1e-9) {
    return cv_matrix(T);
  }
  const double s = std::sin(omega * T);
  const double c = std::cos(omega * T);
  Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
  f(0, 0) = 1.0;
  f(0, 1) = s / omega;
  f(0, 3) = -(1.0 - c) / omega;
  f(1, 1) = c;
  f(1, 3) = -s;
  f(2, 1) = (1.0 - c) / omega;
  f(2, 2) = 1.0;
  f(2, 3) = s / omega;
  f(3, 1) = s;
  f(3, 3) = c;
  return f;
}

Eigen::Matrix4d transition_matrix(const TransitionModel& model) {
  switch (model.kind) {
    case MotionKind::kConstantVelocity:
      return cv_matrix(model.step);
    case MotionKind::kCoordinatedTurn:
      return ct_matrix(model.turn_rate, model.step);
  }
  throw InvalidArgumentError("transition_matrix: unknown motion kind");
}

Eigen::Matrix4d white_noise_q(double sigma_x, double sigma_y, double T) {
  if (T <= 0.0) {
    throw InvalidArgumentError("white_noise_q: step T must be positive");
  }
  const double t3 = T * T * T / 3.0;
  const double t2 = T * T / 2.0;
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  const double sx2 = sigma_x * sigma_x;
  const double sy2 = sigma_y * sigma_y;
  q(0, 0) = sx2 * t3;
  q(0, 1) = sx2 * t2;
  q(1, 0) = sx2 * t2;
  q(1, 1) = sx2 * T;
  q(2, 2) = sy2 * t3;
  q(2, 3) = sy2 * t2;
  q(3, 2) = sy2 * t2;
  q(3, 3) = sy2 * T;
  return q;
}

Dynamics Dynamics::make(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Q) {
  return make(F, Q, Eigen::VectorXd::Zero(F.rows()));
}

Dynamics Dynamics::make(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Q,
                        const Eigen::VectorXd& input) {
  if (F.rows() != F.cols() || Q.rows() != Q.cols() || F.rows() != Q.rows() ||
      input.size() != F.rows()) {
    throw InvalidArgumentError("Dynamics::make: dimension mismatch");
  }
  Dynamics d;
  d.F = F;
  d.Q = Q;
  d.chol_q = cholesky_lower(Q);
  d.input = input;
  return d;
}

Eigen::VectorXd Dynamics::sample(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 Rng& rng) const {
  return sample_mvn(mean(x), chol_q, rng);
}

Eigen::VectorXd Dynamics::mean(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return F * x - input;
}

Dynamics stack_dynamics(const std::vector<Dynamics>& parts) {
  if (parts.empty()) {
    throw InvalidArgumentError("stack_dynamics: empty input");
  }
  Eigen::Index dim = 0;
  for (const Dynamics& p : parts) dim += p.F.rows();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  Eigen::Index at = 0;
  for (const Dynamics& p : parts) {
    const Eigen::Index n = p.F.rows();
    f.block(at, at, n, n) = p.F;
    q.block(at, at, n, n) = p.Q;
    u.segment(at, n) = p.input;
    at += n;
  }
  return Dynamics::make(f, q, u);
}

StateVec propagate_sample(const StateVec& x, const Eigen::Matrix4d& F,
                          const Eigen::Matrix4d& Q, Rng& rng) {
  return sample_mvn(F * x, cholesky_lower(Q), rng);
}

double transition_logpdf(const StateVec& next, const StateVec& prev,
                         const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q) {
  return mvn_logpdf(next, F * prev, Q);
}

Eigen::Vector4d ownship_input(const StateVec& own_next, const StateVec& own_prev,
                              const Eigen::Matrix4d& F) {
  return own_next - F * own_prev;
}

}  // namespace tracklab
