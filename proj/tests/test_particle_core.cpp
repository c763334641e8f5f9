// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tracklab/particles.hpp"
#include "tracklab/resampling.hpp"
#include "tracklab/rng.hpp"
#include "tracklab/roughening.hpp"
#include "tracklab/types.hpp"

namespace tracklab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd log_of(std::initializer_list<double> weights) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(weights.size()));
  Eigen::Index i = 0;
  for (double w : weights) out[i++] = std::log(w);
  return out;
}

TEST(NormalizeLogWeights, TwoEqualWeightsBecomeHalves) {
  Eigen::VectorXd lw(2);
  lw << 3.7, 3.7;
  normalize_log_weights(lw);
  EXPECT_NEAR(lw[0], std::log(0.5), 1e-15);
  EXPECT_NEAR(lw[1], std::log(0.5), 1e-15);
}

TEST(NormalizeLogWeights, KeepsZeroMassComponentsAtMinusInfinity) {
  Eigen::VectorXd lw(2);
  lw << 0.0, -kInf;
  normalize_log_weights(lw);
  EXPECT_DOUBLE_EQ(lw[0], 0.0);
  EXPECT_EQ(lw[1], -kInf);
}

TEST(NormalizeLogWeights, LargeRandomVectorSumsToOneAndKeepsTheArgmax) {
  Rng rng(5);
  Eigen::VectorXd lw(1000);
  for (Eigen::Index i = 0; i < lw.size(); ++i) lw[i] = 50.0 * rng.normal();
  Eigen::Index argmax_before;
  lw.maxCoeff(&argmax_before);
  normalize_log_weights(lw);
  Eigen::Index argmax_after;
  lw.maxCoeff(&argmax_after);
  EXPECT_EQ(argmax_after, argmax_before);
  EXPECT_NEAR(to_linear_weights(lw).sum(), 1.0, 1e-12);
}

TEST(NormalizeLogWeights, RejectsTotalMassZero) {
  Eigen::VectorXd lw = Eigen::VectorXd::Constant(4, -kInf);
  EXPECT_THROW(normalize_log_weights(lw), DegenerateWeightsError);
}

TEST(NormalizeLogWeights, RejectsNaN) {
  Eigen::VectorXd lw(3);
  lw << 0.0, std::nan(""), -1.0;
  EXPECT_THROW(normalize_log_weights(lw), DegenerateWeightsError);
}

TEST(NormalizeLogWeights, RejectsEmptyInput) {
  Eigen::VectorXd lw(0);
  EXPECT_THROW(normalize_log_weights(lw), InvalidArgumentError);
}

TEST(EffectiveSampleSize, UniformWeightsGiveTheFullCount) {
  Eigen::VectorXd lw = Eigen::VectorXd::Constant(100, -std::log(100.0));
  EXPECT_NEAR(effective_sample_size(lw), 100.0, 1e-9);
}

TEST(EffectiveSampleSize, PointMassGivesOne) {
  Eigen::VectorXd lw = Eigen::VectorXd::Constant(50, -kInf);
  lw[17] = 0.0;
  EXPECT_NEAR(effective_sample_size(lw), 1.0, 1e-12);
}

TEST(EffectiveSampleSize, HandWorkedThreeParticleCase) {
  const Eigen::VectorXd lw = log_of({0.5, 0.25, 0.25});
  // 1 / (0.25 + 0.0625 + 0.0625) = 8/3.
  EXPECT_NEAR(effective_sample_size(lw), 8.0 / 3.0, 1e-12);
}

TEST(EffectiveSampleSize, StaysBetweenOneAndTheCount) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd lw(20);
    for (Eigen::Index i = 0; i < lw.size(); ++i) lw[i] = 3.0 * rng.normal();
    normalize_log_weights(lw);
    const double neff = effective_sample_size(lw);
    EXPECT_GE(neff, 1.0 - 1e-9);
    EXPECT_LE(neff, 20.0 + 1e-9);
  }
}

TEST(EffectiveSampleSize, RejectsUnnormalizedWeights) {
  Eigen::VectorXd lw = Eigen::VectorXd::Constant(10, 0.0);
  EXPECT_THROW(effective_sample_size(lw), InvalidArgumentError);
}

TEST(WeightedMeanCov, SingleParticleHasZeroCovariance) {
  ParticleSet set;
  set.states.resize(4, 1);
  set.states.col(0) << 1.0, 2.0, 3.0, 4.0;
  set.log_weights = Eigen::VectorXd::Zero(1);
  const MeanCov mc = weighted_mean_cov(set);
  EXPECT_EQ(StateVec(mc.mean), StateVec(1.0, 2.0, 3.0, 4.0));
  EXPECT_TRUE(mc.cov.isZero(0.0));
}

TEST(WeightedMeanCov, HandWorkedScalarPairInFourDimensions) {
  ParticleSet set;
  set.states = Eigen::MatrixXd::Zero(4, 2);
  set.states(0, 0) = 0.0;
  set.states(0, 1) = 2.0;
  set.log_weights = log_of({0.5, 0.5});
  const MeanCov mc = weighted_mean_cov(set);
  EXPECT_NEAR(mc.mean[0], 1.0, 1e-15);
  EXPECT_NEAR(mc.cov(0, 0), 1.0, 1e-15);
}

TEST(WeightedMeanCov, CovarianceIsSymmetricPositiveSemidefinite) {
  Rng rng(9);
  ParticleSet set;
  set.states.resize(4, 60);
  Eigen::VectorXd lw(60);
  for (int i = 0; i < 60; ++i) {
    for (int m = 0; m < 4; ++m) set.states(m, i) = rng.normal();
    lw[i] = rng.normal();
  }
  normalize_log_weights(lw);
  set.log_weights = lw;
  const MeanCov mc = weighted_mean_cov(set);
  EXPECT_LT((mc.cov - mc.cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mc.cov);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
}

TEST(GatherStates, CopiesColumnsInIndexOrder) {
  Eigen::MatrixXd states(2, 3);
  states << 1, 2, 3, 4, 5, 6;
  const Eigen::MatrixXd out = gather_states(states, {2, 0, 2});
  ASSERT_EQ(out.cols(), 3);
  EXPECT_EQ(out(0, 0), 3.0);
  EXPECT_EQ(out(0, 1), 1.0);
  EXPECT_EQ(out(0, 2), 3.0);
}

TEST(GatherStates, RejectsOutOfRangeIndices) {
  Eigen::MatrixXd states(2, 3);
  states.setZero();
  EXPECT_THROW(gather_states(states, {0, 3}), InvalidArgumentError);
  EXPECT_THROW(gather_states(states, {-1}), InvalidArgumentError);
}

TEST(MakeUniformSet, AssignsEqualLogWeights) {
  const ParticleSet set = make_uniform_set(Eigen::MatrixXd::Zero(4, 8));
  EXPECT_EQ(set.count(), 8);
  for (Eigen::Index i = 0; i < 8; ++i)
    EXPECT_DOUBLE_EQ(set.log_weights[i], -std::log(8.0));
}

TEST(Roughen, ZeroGainLeavesParticlesUntouched) {
  Rng rng(3);
  ParticleSet set = make_uniform_set(Eigen::MatrixXd::Random(4, 20));
  const Eigen::MatrixXd before = set.states;
  roughen(set, RougheningParams{0.0, true}, rng);
  EXPECT_EQ(set.states, before);
}

TEST(Roughen, SingleParticleIsLeftAlone) {
  Rng rng(3);
  ParticleSet set = make_uniform_set(Eigen::MatrixXd::Random(4, 1));
  const Eigen::MatrixXd before = set.states;
  roughen(set, RougheningParams{0.2, true}, rng);
  EXPECT_EQ(set.states, before);
}

TEST(Roughen, CollapsedCloudHasZeroSpreadAndStaysCollapsed) {
  Rng rng(3);
  ParticleSet set =
      make_uniform_set(Eigen::MatrixXd::Ones(4, 30) * 2.5);
  roughen(set, RougheningParams{0.2, true}, rng);
  EXPECT_TRUE((set.states.array() == 2.5).all());
}

TEST(Roughen, JitterScaleTracksSpreadCountAndGain) {
  // With the gain read as a variance, the per-dimension jitter must have
  // standard deviation sqrt(K * spread_m * N^(-1/d)).
  Rng rng(41);
  const int n = 20000;
  const int d = 4;
  const double gain = 0.2;
  ParticleSet set;
  set.states.resize(d, n);
  for (int i = 0; i < n; ++i) {
    set.states(0, i) = 10.0 * rng.uniform();
    set.states(1, i) = 2.0 * rng.uniform();
    set.states(2, i) = 5.0 * rng.uniform();
    set.states(3, i) = 0.5 * rng.uniform();
  }
  set.log_weights = Eigen::VectorXd::Constant(n, -std::log(double(n)));
  const Eigen::MatrixXd before = set.states;
  const Eigen::VectorXd lw_before = set.log_weights;

  roughen(set, RougheningParams{gain, true}, rng);

  const double shrink = std::pow(double(n), -1.0 / double(d));
  for (int m = 0; m < d; ++m) {
    const double spread =
        before.row(m).maxCoeff() - before.row(m).minCoeff();
    const double sigma = std::sqrt(gain * spread * shrink);
    const Eigen::VectorXd noise =
        (set.states.row(m) - before.row(m)).transpose();
    const double mean = noise.mean();
    const double sd = std::sqrt(
        (noise.array() - mean).square().sum() / double(n - 1));
    EXPECT_NEAR(sd, sigma, 0.05 * sigma) << "dimension " << m;
    // The jitter is zero-mean: the cloud centroid moves by at most a few
    // standard errors.
    EXPECT_LT(std::abs(mean), 4.0 * sigma / std::sqrt(double(n)))
        << "dimension " << m;
  }
  EXPECT_EQ(set.log_weights, lw_before);
}

TEST(Roughen, LinearScaleModeUsesTheGainAsAStandardDeviationFactor) {
  Rng rng(43);
  const int n = 20000;
  ParticleSet set;
  set.states.resize(2, n);
  for (int i = 0; i < n; ++i) {
    set.states(0, i) = 4.0 * rng.uniform();
    set.states(1, i) = 1.0 * rng.uniform();
  }
  set.log_weights = Eigen::VectorXd::Constant(n, -std::log(double(n)));
  const Eigen::MatrixXd before = set.states;
  const double gain = 0.1;
  roughen(set, RougheningParams{gain, false}, rng);
  const double shrink = std::pow(double(n), -0.5);
  for (int m = 0; m < 2; ++m) {
    const double spread = before.row(m).maxCoeff() - before.row(m).minCoeff();
    const double sigma = gain * spread * shrink;
    const Eigen::VectorXd noise =
        (set.states.row(m) - before.row(m)).transpose();
    const double sd = std::sqrt(
        (noise.array() - noise.mean()).square().sum() / double(n - 1));
    EXPECT_NEAR(sd, sigma, 0.05 * sigma) << "dimension " << m;
  }
}

TEST(Roughen, RejectsNegativeGain) {
  Rng rng(3);
  ParticleSet set = make_uniform_set(Eigen::MatrixXd::Random(4, 5));
  EXPECT_THROW(roughen(set, RougheningParams{-0.1, true}, rng),
               InvalidArgumentError);
}

TEST(WeightedResample, OutputWeightRatiosEqualSourceWeightOverSelection) {
  // Each survivor carries weight proportional to w_j / rho_j; with distinct
  // state values the source of every copy is identifiable, so the pairwise
  // weight ratios are checkable exactly.
  Rng rng(51);
  ParticleSet set;
  set.states.resize(1, 5);
  set.states << 1.0, 2.0, 3.0, 4.0, 5.0;
  set.log_weights = log_of({0.05, 0.1, 0.2, 0.3, 0.35});
  Eigen::VectorXd g(5);
  g << 5.0, 1.0, 2.0, 1.0, 1.0;
  const Eigen::VectorXd rho = g / g.sum();
  const Eigen::VectorXd w = to_linear_weights(set.log_weights);
  for (int rep = 0; rep < 20; ++rep) {
    const ParticleSet out =
        weighted_resample(set, g, IndexSamplerMethod::kScan, rng);
    for (Eigen::Index a = 0; a < out.count(); ++a) {
      const int ja = static_cast<int>(out.states(0, a)) - 1;
      for (Eigen::Index b = 0; b < out.count(); ++b) {
        const int jb = static_cast<int>(out.states(0, b)) - 1;
        const double expected =
            std::log(w[ja] / rho[ja]) - std::log(w[jb] / rho[jb]);
        EXPECT_NEAR(out.log_weights[a] - out.log_weights[b], expected, 1e-12);
      }
    }
    EXPECT_NEAR(to_linear_weights(out.log_weights).sum(), 1.0, 1e-12);
  }
}

TEST(WeightedResample, UniformSelectionEstimatorIsConsistentAtLargeCounts) {
  // The self-normalized estimator carries O(1/N) ratio bias, so the check
  // runs at a particle count where that bias sits well inside the Monte
  // Carlo band.
  Rng rng(51);
  const int n = 5000;
  ParticleSet set;
  set.states.resize(1, n);
  Eigen::VectorXd lw(n);
  const double base_w[5] = {0.05, 0.1, 0.2, 0.3, 0.35};
  for (int i = 0; i < n; ++i) {
    set.states(0, i) = 1.0 + i % 5;
    lw[i] = std::log(base_w[i % 5]);
  }
  normalize_log_weights(lw);
  set.log_weights = lw;
  const Eigen::VectorXd w = to_linear_weights(set.log_weights);
  const double target =
      (set.states.row(0).transpose().array() * w.array()).sum();
  const Eigen::VectorXd g = Eigen::VectorXd::Ones(n);
  const int reps = 200;
  double acc = 0.0;
  double acc_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const ParticleSet out =
        weighted_resample(set, g, IndexSamplerMethod::kScan, rng);
    const Eigen::VectorXd ow = to_linear_weights(out.log_weights);
    const double mean =
        (out.states.row(0).transpose().array() * ow.array()).sum();
    acc += mean;
    acc_sq += mean * mean;
  }
  const double mc_mean = acc / reps;
  const double se =
      std::sqrt((acc_sq / reps - mc_mean * mc_mean) / reps);
  EXPECT_NEAR(mc_mean, target, 4.0 * se + 1e-3);
}

TEST(WeightedResample, PeakedSelectionWeightsAreCorrectedExactly) {
  // Even a strongly biased selection distribution leaves the estimator
  // unbiased once weights are divided by the selection probability.
  Rng rng(53);
  ParticleSet set;
  set.states.resize(1, 4);
  set.states << -2.0, -1.0, 1.0, 2.0;
  set.log_weights = log_of({0.25, 0.25, 0.25, 0.25});
  Eigen::VectorXd g(4);
  g << 10.0, 1.0, 1.0, 10.0;  // prefer the tails
  const double target = 0.0;  // symmetric cloud, flat target weights
  const int reps = 20000;
  double acc = 0.0;
  double acc_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const ParticleSet out =
        weighted_resample(set, g, IndexSamplerMethod::kStratified, rng);
    const Eigen::VectorXd w = to_linear_weights(out.log_weights);
    const double mean =
        (out.states.row(0).transpose().array() * w.array()).sum();
    acc += mean;
    acc_sq += mean * mean;
  }
  const double mc_mean = acc / reps;
  const double se =
      std::sqrt((acc_sq / reps - mc_mean * mc_mean) / reps);
  EXPECT_NEAR(mc_mean, target, 4.0 * se + 1e-12);
}

TEST(WeightedResample, SingleParticleIsAFixedPoint) {
  Rng rng(55);
  ParticleSet set;
  set.states.resize(4, 1);
  set.states.col(0) << 1.0, 2.0, 3.0, 4.0;
  set.log_weights = Eigen::VectorXd::Zero(1);
  const ParticleSet out = weighted_resample(
      set, Eigen::VectorXd::Ones(1), IndexSamplerMethod::kScan, rng);
  EXPECT_EQ(out.states, set.states);
  EXPECT_NEAR(out.log_weights[0], 0.0, 1e-15);
}

TEST(WeightedResample, RejectsNonPositiveSelectionWeights) {
  Rng rng(57);
  ParticleSet set = make_uniform_set(Eigen::MatrixXd::Random(2, 3));
  Eigen::VectorXd g(3);
  g << 1.0, 0.0, 1.0;
  EXPECT_THROW(weighted_resample(set, g, IndexSamplerMethod::kScan, rng),
               InvalidArgumentError);
  g << 1.0, -1.0, 1.0;
  EXPECT_THROW(weighted_resample(set, g, IndexSamplerMethod::kScan, rng),
               InvalidArgumentError);
}

TEST(WeightedResample, RejectsMismatchedSelectionWeightCount) {
  Rng rng(59);
  ParticleSet set = make_uniform_set(Eigen::MatrixXd::Random(2, 3));
  EXPECT_THROW(weighted_resample(set, Eigen::VectorXd::Ones(2),
                                 IndexSamplerMethod::kScan, rng),
               InvalidArgumentError);
}

}  // namespace
}  // namespace tracklab
