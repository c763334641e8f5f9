// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/simulator.hpp"

#include <cmath>
#include <utility>

#include "tracklab/angles.hpp"
#include "tracklab/gaussian.hpp"
#include "tracklab/measurement.hpp"
#include "tracklab/motion.hpp"

namespace tracklab {
namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TruthData simulate_truth(const Scenario& scenario, Rng& rng) {
  const bool noisy =
      scenario.truth_sigma_x > 0.0 || scenario.truth_sigma_y > 0.0;
  Eigen::Matrix4d noise_chol = Eigen::Matrix4d::Zero();
  if (noisy) {
    noise_chol = cholesky_lower(white_noise_q(
        scenario.truth_sigma_x, scenario.truth_sigma_y, scenario.step));
  }

  TruthData truth;
  truth.targets.reserve(scenario.targets.size());
  for (const TargetSpec& target : scenario.targets) {
    const std::vector<Eigen::Matrix4d> transitions =
        segment_transitions(target, scenario.step, scenario.horizon);
    Eigen::Matrix4Xd track(4, scenario.horizon + 1);
    track.col(0) = target.initial;
    for (int t = 0; t < scenario.horizon; ++t) {
      StateVec next = transitions[t] * track.col(t);
      if (noisy) next = sample_mvn(next, noise_chol, rng);
      track.col(t + 1) = next;
    }
    truth.targets.push_back(std::move(track));
  }
  return truth;
}

std::vector<std::vector<ObservationFrame>> simulate_observations(
    const Scenario& scenario, const TruthData& truth, Rng& rng) {
  if (scenario.kind != MeasurementKind::kRangeBearing)
    throw InvalidArgumentError(
        "range/bearing frames require a range_bearing scenario");
  if (truth.targets.size() != scenario.targets.size())
    throw InvalidArgumentError("truth does not match the scenario targets");

  const int num_targets = static_cast<int>(truth.targets.size());
  const DetectionSpec& det = scenario.detection;

  std::vector<std::vector<ObservationFrame>> frames(scenario.horizon);
  for (int t = 1; t <= scenario.horizon; ++t) {
    std::vector<ObservationFrame>& step_frames = frames[t - 1];
    step_frames.resize(scenario.observers.size());
    for (std::size_t i = 0; i < scenario.observers.size(); ++i) {
      const ObserverSpec& obs = scenario.observers[i];
      ObservationFrame& frame = step_frames[i];

      for (int k = 0; k < num_targets; ++k) {
        const RangeBearing ideal =
            range_bearing(truth.targets[k].col(t), obs.pose);
        if (det.range_limited && ideal.range > obs.max_range) continue;
        if (det.detect_prob < 1.0 && rng.uniform() >= det.detect_prob)
          continue;
        RangeBearing z;
        z.range = ideal.range + obs.noise.sigma_range * rng.normal();
        z.bearing =
            wrap_angle(ideal.bearing + obs.noise.sigma_bearing * rng.normal());
        frame.measurements.push_back(z);
        frame.source.push_back(k + 1);
      }

      if (det.clutter_rate > 0.0) {
        const int clutter = rng.poisson(det.clutter_rate);
        for (int c = 0; c < clutter; ++c) {
          RangeBearing z;
          z.range = rng.uniform() * obs.max_range;
          z.bearing = wrap_angle(rng.uniform() * 2.0 * kPi - kPi);
          frame.measurements.push_back(z);
          frame.source.push_back(0);
        }
      }

      // Fisher-Yates shuffle so reporting order carries no information.
      for (std::size_t m = frame.measurements.size(); m > 1; --m) {
        const std::size_t j =
            static_cast<std::size_t>(rng.uniform_below(m));
        std::swap(frame.measurements[m - 1], frame.measurements[j]);
        std::swap(frame.source[m - 1], frame.source[j]);
      }
    }
  }
  return frames;
}

BearingsOnlyData simulate_bearings_only(const Scenario& scenario,
                                        const TruthData& truth, Rng& rng) {
  if (scenario.kind != MeasurementKind::kBearingsOnly)
    throw InvalidArgumentError(
        "bearing streams require a bearings_only scenario");
  if (truth.targets.size() != 1)
    throw InvalidArgumentError("bearings_only truth must hold one target");

  const double sigma = scenario.observers.front().noise.sigma_bearing;
  BearingsOnlyData data;
  data.ownship = ownship_track(scenario.ownship, scenario.step,
                               scenario.horizon);
  data.bearings.resize(scenario.horizon);
  for (int t = 1; t <= scenario.horizon; ++t) {
    const StateVec relative = truth.targets[0].col(t) - data.ownship.col(t);
    data.bearings[t - 1] =
        wrap_angle(bearing_north(relative) + sigma * rng.normal());
  }
  return data;
}

}  // namespace tracklab
