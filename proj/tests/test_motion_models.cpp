// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tracklab/angles.hpp"
#include "tracklab/measurement.hpp"
#include "tracklab/motion.hpp"
#include "tracklab/rng.hpp"
#include "tracklab/types.hpp"

namespace tracklab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(CvMatrix, HasUnitStepShape) {
  const Eigen::Matrix4d f = cv_matrix(1.0);
  Eigen::Matrix4d expected;
  expected << 1, 1, 0, 0,  //
      0, 1, 0, 0,          //
      0, 0, 1, 1,          //
      0, 0, 0, 1;
  EXPECT_EQ(f, expected);
}

TEST(CvMatrix, MovesPositionByVelocityTimesStep) {
  const Eigen::Matrix4d f = cv_matrix(2.0);
  const StateVec x(0.0, 1.0, 0.0, 2.0);
  const StateVec next = f * x;
  EXPECT_DOUBLE_EQ(next[0], 2.0);
  EXPECT_DOUBLE_EQ(next[1], 1.0);
  EXPECT_DOUBLE_EQ(next[2], 4.0);
  EXPECT_DOUBLE_EQ(next[3], 2.0);
}

TEST(CvMatrix, TinyStepApproachesIdentity) {
  const Eigen::Matrix4d f = cv_matrix(1e-9);
  EXPECT_LT((f - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(CtMatrix, QuarterTurnRateHasClosedFormEntries) {
  const Eigen::Matrix4d f = ct_matrix(kPi / 2.0, 1.0);
  EXPECT_NEAR(f(0, 1), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(f(0, 3), -2.0 / kPi, 1e-15);
  EXPECT_NEAR(f(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(f(1, 3), -1.0, 1e-15);
  EXPECT_NEAR(f(2, 1), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(f(3, 1), 1.0, 1e-15);
  EXPECT_NEAR(f(3, 3), 0.0, 1e-15);
}

TEST(CtMatrix, SmallTurnRateMatchesConstantVelocityLimit) {
  const Eigen::Matrix4d ct = ct_matrix(1e-12, 1.0);
  const Eigen::Matrix4d cv = cv_matrix(1.0);
  EXPECT_LT((ct - cv).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CtMatrix, ContinuityAcrossTheSmallRateCutover) {
  // Just above the cutover the closed form should still be within first-order
  // distance of the straight-line matrix.
  const Eigen::Matrix4d ct = ct_matrix(2e-9, 1.0);
  const Eigen::Matrix4d cv = cv_matrix(1.0);
  EXPECT_LT((ct - cv).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CtMatrix, PreservesSpeed) {
  const Eigen::Matrix4d f = ct_matrix(0.1641, 1.0);
  const StateVec x(3.0, 1.2, -7.0, -0.9);
  const StateVec next = f * x;
  const double speed_before = std::hypot(x[1], x[3]);
  const double speed_after = std::hypot(next[1], next[3]);
  EXPECT_NEAR(speed_after, speed_before, 1e-10);
}

TEST(CtMatrix, VelocityBlockIsARotation) {
  const Eigen::Matrix4d f = ct_matrix(0.7, 1.3);
  Eigen::Matrix2d vel;
  vel << f(1, 1), f(1, 3), f(3, 1), f(3, 3);
  EXPECT_NEAR(vel.determinant(), 1.0, 1e-12);
  EXPECT_LT((vel * vel.transpose() - Eigen::Matrix2d::Identity())
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(CtMatrix, RotatesVelocityByRateTimesStep) {
  const double omega = 0.25;
  const double step = 2.0;
  const Eigen::Matrix4d f = ct_matrix(omega, step);
  const StateVec x(0.0, 1.0, 0.0, 0.0);
  const StateVec next = f * x;
  const double heading = std::atan2(next[3], next[1]);
  EXPECT_NEAR(heading, omega * step, 1e-12);
}

TEST(TransitionMatrix, DispatchesOnMotionKind) {
  const Eigen::Matrix4d cv =
      transition_matrix({MotionKind::kConstantVelocity, 0.0, 1.5});
  EXPECT_EQ(cv, cv_matrix(1.5));
  const Eigen::Matrix4d ct =
      transition_matrix({MotionKind::kCoordinatedTurn, 0.3, 1.5});
  EXPECT_EQ(ct, ct_matrix(0.3, 1.5));
}

TEST(WhiteNoiseQ, ZeroSigmaGivesZeroMatrix) {
  EXPECT_TRUE(white_noise_q(0.0, 0.0, 1.0).isZero(0.0));
}

TEST(WhiteNoiseQ, UnitStepBlocksFollowTheContinuousWhiteNoiseKernel) {
  const double sigma = 5e-2;
  const Eigen::Matrix4d q = white_noise_q(sigma, sigma, 1.0);
  const double s2 = sigma * sigma;
  EXPECT_DOUBLE_EQ(q(0, 0), s2 / 3.0);
  EXPECT_DOUBLE_EQ(q(0, 1), s2 / 2.0);
  EXPECT_DOUBLE_EQ(q(1, 0), s2 / 2.0);
  EXPECT_DOUBLE_EQ(q(1, 1), s2);
  EXPECT_DOUBLE_EQ(q(2, 2), s2 / 3.0);
  EXPECT_DOUBLE_EQ(q(2, 3), s2 / 2.0);
  EXPECT_DOUBLE_EQ(q(3, 3), s2);
  EXPECT_DOUBLE_EQ(q(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(q(1, 3), 0.0);
}

TEST(WhiteNoiseQ, StaysPositiveSemidefiniteForSmallSigmaAndFractionalStep) {
  const Eigen::Matrix4d q = white_noise_q(5e-4, 5e-4, 1.28);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(q);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-18);
  EXPECT_LT((q - q.transpose()).cwiseAbs().maxCoeff(), 1e-18);
}

TEST(WhiteNoiseQ, ScalesAxesIndependently) {
  const Eigen::Matrix4d q = white_noise_q(2.0, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(q(1, 1), 4.0);
  EXPECT_DOUBLE_EQ(q(3, 3), 9.0);
}

TEST(WhiteNoiseQ, RejectsNonPositiveStep) {
  EXPECT_THROW(white_noise_q(1.0, 1.0, 0.0), InvalidArgumentError);
  EXPECT_THROW(white_noise_q(1.0, 1.0, -1.0), InvalidArgumentError);
}

TEST(PropagateSample, ZeroNoiseIsExactlyTheLinearMap) {
  Rng rng(11);
  const Eigen::Matrix4d f = cv_matrix(1.0);
  const StateVec x(1.0, 2.0, 3.0, 4.0);
  const StateVec next =
      propagate_sample(x, f, Eigen::Matrix4d::Zero(), rng);
  EXPECT_EQ(next, StateVec(f * x));
}

TEST(PropagateSample, SampleMomentsMatchMeanAndCovariance) {
  Rng rng(17);
  const Eigen::Matrix4d f = cv_matrix(1.0);
  Eigen::Matrix4d q = white_noise_q(0.8, 0.5, 1.0);
  const StateVec x(1.0, -2.0, 0.5, 3.0);
  const int n = 100000;
  Eigen::Matrix4Xd draws(4, n);
  for (int i = 0; i < n; ++i) draws.col(i) = propagate_sample(x, f, q, rng);

  const StateVec mean = draws.rowwise().mean();
  const StateVec expected = f * x;
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  for (int i = 0; i < n; ++i) {
    const StateVec d = draws.col(i) - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(n - 1);

  for (int m = 0; m < 4; ++m) {
    const double se = std::sqrt(q(m, m) / n);
    EXPECT_NEAR(mean[m], expected[m], 4.0 * se) << "component " << m;
  }
  EXPECT_LT((cov - q).norm() / q.norm(), 0.10);
}

TEST(TransitionLogpdf, PeaksAtThePredictedMeanWithUnitNormalization) {
  const Eigen::Matrix4d f = cv_matrix(1.0);
  const Eigen::Matrix4d q = Eigen::Matrix4d::Identity();
  const StateVec prev(0.3, -1.0, 2.0, 0.4);
  const StateVec mode = f * prev;
  const double at_mode = transition_logpdf(mode, prev, f, q);
  EXPECT_NEAR(at_mode, -2.0 * std::log(2.0 * kPi), 1e-12);
}

TEST(TransitionLogpdf, MatchesDenseQuadraticFormOracle) {
  Rng rng(23);
  const Eigen::Matrix4d f = ct_matrix(0.2, 1.0);
  Eigen::Matrix4d q = white_noise_q(0.7, 0.4, 1.0);
  q(0, 0) += 0.01;  // keep the inverse well conditioned
  q(2, 2) += 0.01;
  const Eigen::Matrix4d q_inv = q.inverse();
  const double log_norm =
      -0.5 * (4.0 * std::log(2.0 * kPi) + std::log(q.determinant()));
  for (int trial = 0; trial < 100; ++trial) {
    StateVec prev, next;
    for (int m = 0; m < 4; ++m) {
      prev[m] = 3.0 * rng.normal();
      next[m] = 3.0 * rng.normal();
    }
    const StateVec r = next - f * prev;
    const double expected = log_norm - 0.5 * r.dot(q_inv * r);
    EXPECT_NEAR(transition_logpdf(next, prev, f, q), expected, 1e-10);
  }
}

TEST(TransitionLogpdf, DecreasesAwayFromThePredictedMean) {
  const Eigen::Matrix4d f = cv_matrix(1.0);
  const Eigen::Matrix4d q = white_noise_q(1.0, 1.0, 1.0);
  const StateVec prev(0.0, 1.0, 0.0, -1.0);
  const StateVec mode = f * prev;
  const StateVec dir(0.3, 0.1, -0.2, 0.4);
  double last = transition_logpdf(mode, prev, f, q);
  for (int step = 1; step <= 5; ++step) {
    const double value =
        transition_logpdf(StateVec(mode + step * dir), prev, f, q);
    EXPECT_LT(value, last);
    last = value;
  }
}

TEST(TransitionLogpdf, RejectsSingularCovariance) {
  const Eigen::Matrix4d f = cv_matrix(1.0);
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  q(0, 0) = -1.0;  // indefinite: jitter retry cannot rescue it
  const StateVec x(1.0, 0.0, 0.0, 0.0);
  EXPECT_THROW(transition_logpdf(x, x, f, q), NumericError);
}

TEST(RangeBearing, EastTargetHasZeroBearing) {
  const StateVec x(100.0, 0.0, 0.0, 0.0);
  const RangeBearing z = range_bearing(x, SensorPose{0.0, 0.0});
  EXPECT_DOUBLE_EQ(z.range, 100.0);
  EXPECT_DOUBLE_EQ(z.bearing, 0.0);
}

TEST(RangeBearing, NorthTargetHasQuarterTurnBearing) {
  const StateVec x(0.0, 0.0, 100.0, 0.0);
  const RangeBearing z = range_bearing(x, SensorPose{0.0, 0.0});
  EXPECT_DOUBLE_EQ(z.range, 100.0);
  EXPECT_DOUBLE_EQ(z.bearing, kPi / 2.0);
}

TEST(RangeBearing, OffsetSensorUsesRelativeGeometry) {
  const StateVec x(-50.0, 0.0, 50.0, 0.0);
  const RangeBearing z = range_bearing(x, SensorPose{-45.0, -45.0});
  EXPECT_DOUBLE_EQ(z.range, std::sqrt(9050.0));
  EXPECT_DOUBLE_EQ(z.bearing, std::atan2(95.0, -5.0));
}

TEST(RangeBearing, RejectsCoincidentSensorAndTarget) {
  const StateVec x(1.0, 0.0, -2.0, 0.0);
  EXPECT_THROW(range_bearing(x, SensorPose{1.0, -2.0}), NumericError);
}

TEST(RangeBearingLogpdf, PeaksAtTheExactMeasurementWithUnitNormalization) {
  const StateVec x(30.0, 0.0, 40.0, 0.0);
  const SensorPose sensor{0.0, 0.0};
  const MeasurementNoise noise{2.0, 0.05};
  const RangeBearing z = range_bearing(x, sensor);
  const double expected =
      -std::log(2.0 * kPi * noise.sigma_range * noise.sigma_bearing);
  EXPECT_NEAR(range_bearing_logpdf(z, x, sensor, noise), expected, 1e-12);
}

TEST(RangeBearingLogpdf, WrapsBearingResidualAcrossTheSeam) {
  const StateVec x(-100.0, 0.0, -1.0, 0.0);  // bearing just below +/- pi
  const SensorPose sensor{0.0, 0.0};
  const MeasurementNoise noise{1.0, 0.1};
  const RangeBearing pred = range_bearing(x, sensor);
  // Nudge the measured bearing 0.02 rad across the seam; the residual must be
  // 0.02, not nearly 2 pi.
  RangeBearing z{pred.range, wrap_angle(pred.bearing - 0.02)};
  const double expected =
      -0.5 * (0.02 / noise.sigma_bearing) * (0.02 / noise.sigma_bearing) -
      std::log(2.0 * kPi * noise.sigma_range * noise.sigma_bearing);
  EXPECT_NEAR(range_bearing_logpdf(z, x, sensor, noise), expected, 1e-12);
}

TEST(RangeBearingLogpdf, InvariantUnderFullTurnBearingShifts) {
  const StateVec x(12.0, 0.0, -7.0, 0.0);
  const SensorPose sensor{1.0, 1.0};
  const MeasurementNoise noise{0.5, 0.02};
  const RangeBearing z{13.5, 0.9};
  const double base = range_bearing_logpdf(z, x, sensor, noise);
  for (int k = -2; k <= 2; ++k) {
    const RangeBearing shifted{z.range, z.bearing + 2.0 * kPi * k};
    EXPECT_NEAR(range_bearing_logpdf(shifted, x, sensor, noise), base, 1e-9);
  }
}

TEST(RangeBearingLogpdf, IntegratesToOneOverTheMeasurementSpace) {
  const StateVec x(20.0, 0.0, 15.0, 0.0);
  const SensorPose sensor{0.0, 0.0};
  const MeasurementNoise noise{1.5, 0.08};
  const RangeBearing pred = range_bearing(x, sensor);
  // Midpoint quadrature over +/- 8 sigma in each coordinate.
  const int cells = 400;
  const double r_lo = pred.range - 8.0 * noise.sigma_range;
  const double r_hi = pred.range + 8.0 * noise.sigma_range;
  const double b_lo = pred.bearing - 8.0 * noise.sigma_bearing;
  const double b_hi = pred.bearing + 8.0 * noise.sigma_bearing;
  const double dr = (r_hi - r_lo) / cells;
  const double db = (b_hi - b_lo) / cells;
  double mass = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double r = r_lo + (i + 0.5) * dr;
    for (int j = 0; j < cells; ++j) {
      const double b = b_lo + (j + 0.5) * db;
      mass += std::exp(range_bearing_logpdf({r, b}, x, sensor, noise));
    }
  }
  mass *= dr * db;
  EXPECT_NEAR(mass, 1.0, 0.01);
}

TEST(RangeBearingLogpdf, RejectsNonPositiveSigmas) {
  const StateVec x(10.0, 0.0, 0.0, 0.0);
  EXPECT_THROW(
      range_bearing_logpdf({10.0, 0.0}, x, SensorPose{0.0, 0.0}, {0.0, 0.1}),
      InvalidArgumentError);
  EXPECT_THROW(
      range_bearing_logpdf({10.0, 0.0}, x, SensorPose{0.0, 0.0}, {1.0, -0.1}),
      InvalidArgumentError);
}

TEST(RangeBearingJacobian, MatchesFiniteDifferences) {
  const StateVec x(13.0, 1.0, -8.0, -2.0);
  const SensorPose sensor{2.0, 3.0};
  const Eigen::Matrix<double, 2, 4> h = range_bearing_jacobian(x, sensor);
  const double eps = 1e-6;
  for (int m = 0; m < 4; ++m) {
    StateVec lo = x, hi = x;
    lo[m] -= eps;
    hi[m] += eps;
    const RangeBearing zl = range_bearing(lo, sensor);
    const RangeBearing zh = range_bearing(hi, sensor);
    EXPECT_NEAR(h(0, m), (zh.range - zl.range) / (2.0 * eps), 1e-6);
    EXPECT_NEAR(h(1, m), wrap_angle(zh.bearing - zl.bearing) / (2.0 * eps),
                1e-6);
  }
}

TEST(BearingNorth, DueNorthIsZero) {
  const StateVec rel(0.0, 0.0, 50.0, 0.0);
  EXPECT_DOUBLE_EQ(bearing_north(rel), 0.0);
}

TEST(BearingNorth, DueEastIsQuarterTurn) {
  const StateVec rel(50.0, 0.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(bearing_north(rel), kPi / 2.0);
}

TEST(BearingNorth, RoundTripsAThreeQuarterViewAngle) {
  // A direction of 265 degrees clockwise from North, expressed in the
  // wrapped (-pi, pi] convention.
  const double angle = 265.0 * kPi / 180.0;
  const double r = 42.0;
  const StateVec rel(r * std::sin(angle), 0.0, r * std::cos(angle), 0.0);
  EXPECT_NEAR(bearing_north(rel), wrap_angle(angle), 1e-12);
}

TEST(BearingNorth, RejectsZeroRelativePosition) {
  const StateVec rel(0.0, 1.0, 0.0, 1.0);
  EXPECT_THROW(bearing_north(rel), NumericError);
}

TEST(BearingNorthLogpdf, WrapsResidualAndNormalizesLikeAScalarGaussian) {
  const StateVec rel(0.0, 0.0, 10.0, 0.0);  // bearing 0
  const double sigma = 0.05;
  const double at_mode = bearing_north_logpdf(0.0, rel, sigma);
  EXPECT_NEAR(at_mode, -std::log(sigma) - 0.5 * std::log(2.0 * kPi), 1e-12);
  // 2 pi shifts of the measured bearing change nothing.
  EXPECT_NEAR(bearing_north_logpdf(2.0 * kPi, rel, sigma), at_mode, 1e-9);
}

TEST(BearingNorthJacobian, MatchesFiniteDifferences) {
  const StateVec rel(7.0, 0.3, -11.0, 0.1);
  const Eigen::Matrix<double, 1, 4> h = bearing_north_jacobian(rel);
  const double eps = 1e-6;
  for (int m = 0; m < 4; ++m) {
    StateVec lo = rel, hi = rel;
    lo[m] -= eps;
    hi[m] += eps;
    EXPECT_NEAR(h(0, m),
                wrap_angle(bearing_north(hi) - bearing_north(lo)) / (2.0 * eps),
                1e-6);
  }
}

TEST(OwnshipInput, ConstantVelocityPlatformNeedsNoCorrection) {
  const Eigen::Matrix4d f = cv_matrix(1.0);
  const StateVec prev(100.0, 3.0, -50.0, 4.0);
  const StateVec next = f * prev;  // platform actually follows the model
  EXPECT_TRUE(ownship_input(next, prev, f).isZero(0.0));
}

TEST(OwnshipInput, CourseChangeShowsUpOnlyInTheVelocitySlots) {
  // A platform switching legs: the position still advances with the old leg
  // velocity over the step, then the velocity jumps to the new course.
  const double speed = 12.0 * 0.514444;  // knots to m/s
  const double step = 2.0;
  const Eigen::Matrix4d f = cv_matrix(step);
  const double c_old = kPi;                     // due South
  const double c_new = 115.0 * kPi / 180.0;     // new course
  const Eigen::Vector2d v_old(speed * std::sin(c_old), speed * std::cos(c_old));
  const Eigen::Vector2d v_new(speed * std::sin(c_new), speed * std::cos(c_new));
  StateVec prev(10.0, v_old[0], 20.0, v_old[1]);
  StateVec next(prev[0] + step * v_old[0], v_new[0], prev[2] + step * v_old[1],
                v_new[1]);
  const Eigen::Vector4d u = ownship_input(next, prev, f);
  EXPECT_NEAR(u[0], 0.0, 1e-12);
  EXPECT_NEAR(u[2], 0.0, 1e-12);
  EXPECT_NEAR(u[1], v_new[0] - v_old[0], 1e-12);
  EXPECT_NEAR(u[3], v_new[1] - v_old[1], 1e-12);
}

TEST(OwnshipInput, RecoversRelativeFramePropagationIdentity) {
  // Subtracting the platform track from an absolute track and propagating
  // with the correction term lands exactly on the next relative state.
  const Eigen::Matrix4d f = cv_matrix(1.0);
  const StateVec target_prev(200.0, -3.0, 90.0, 1.0);
  const StateVec target_next = f * target_prev;
  const StateVec own_prev(10.0, 5.0, -4.0, 2.0);
  const StateVec own_next(17.0, 4.0, 0.0, 2.5);  // maneuvering platform
  const Eigen::Vector4d u = ownship_input(own_next, own_prev, f);
  const StateVec rel_prev = target_prev - own_prev;
  const StateVec rel_next = f * rel_prev - u;
  EXPECT_LT((rel_next - (target_next - own_next)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(DynamicsBundle, MeanAppliesLinearMapMinusInput) {
  const Eigen::Matrix4d f = cv_matrix(1.0);
  const Eigen::Matrix4d q = Eigen::Matrix4d::Identity() * 0.01;
  Eigen::Vector4d u;
  u << 1.0, 2.0, 3.0, 4.0;
  const Dynamics dyn = Dynamics::make(f, q, u);
  const StateVec x(5.0, 6.0, 7.0, 8.0);
  EXPECT_EQ(StateVec(dyn.mean(x)), StateVec(f * x - u));
}

TEST(DynamicsBundle, StackingBuildsBlockDiagonalJointModel) {
  const Dynamics a =
      Dynamics::make(cv_matrix(1.0), white_noise_q(0.1, 0.1, 1.0));
  const Dynamics b =
      Dynamics::make(ct_matrix(0.3, 1.0), white_noise_q(0.2, 0.2, 1.0));
  const Dynamics joint = stack_dynamics({a, b});
  ASSERT_EQ(joint.F.rows(), 8);
  EXPECT_EQ(joint.F.topLeftCorner(4, 4), a.F);
  EXPECT_EQ(joint.F.bottomRightCorner(4, 4), b.F);
  EXPECT_TRUE(joint.F.topRightCorner(4, 4).isZero(0.0));
  EXPECT_EQ(joint.Q.topLeftCorner(4, 4), a.Q);
  EXPECT_EQ(joint.Q.bottomRightCorner(4, 4), b.Q);
}

TEST(DynamicsBundle, RejectsMismatchedShapes) {
  EXPECT_THROW(Dynamics::make(Eigen::MatrixXd::Identity(4, 4),
                              Eigen::MatrixXd::Identity(3, 3)),
               InvalidArgumentError);
}

TEST(WrapAngle, MapsIntoTheHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(-3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(kPi + 0.1), -kPi + 0.1, 1e-12);
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi - 1e-15);
    EXPECT_LE(w, kPi + 1e-15);
    EXPECT_NEAR(std::remainder(w - a, 2.0 * kPi), 0.0, 1e-9);
  }
}

}  // namespace
}  // namespace tracklab
