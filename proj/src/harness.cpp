// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "tracklab/ekf.hpp"
#include "tracklab/gaussian.hpp"
#include "tracklab/ippf.hpp"
#include "tracklab/mcjpdaf.hpp"
#include "tracklab/measurement.hpp"
#include "tracklab/mmpf.hpp"
#include "tracklab/motion.hpp"
#include "tracklab/particles.hpp"
#include "tracklab/simulator.hpp"
#include "tracklab/single_filters.hpp"

namespace tracklab {
namespace {

FilterConfig make_filter_config(const HarnessConfig& config) {
  FilterConfig fc;
  fc.resample_threshold =
      config.scenario.filter.resample_threshold_fraction * config.particles;
  fc.scheme = config.scheme;
  fc.roughening = config.scenario.filter.roughening;
  return fc;
}

Dynamics model_dynamics(const Scenario& sc, int target,
                        const ModelSpec& model) {
  const Eigen::Matrix4d f =
      transition_matrix({model.kind, model.turn_rate, sc.step});
  const Eigen::Matrix4d q = sc.filter.process[target].covariance(sc.step);
  return Dynamics::make(f, q);
}

/// Initial particle cloud for one target, drawn from
/// N(initial mean, diag(initial_cov_diag)); one draw block per particle.
Eigen::MatrixXd sample_initial_single(const StateVec& mean,
                                      const Eigen::Vector4d& cov_diag,
                                      int particles, Rng& rng) {
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(4, 4);
  chol.diagonal() = cov_diag.cwiseSqrt();
  Eigen::MatrixXd states(4, particles);
  for (int n = 0; n < particles; ++n)
    states.col(n) = sample_mvn(mean, chol, rng);
  return states;
}

/// Initial joint cloud over all targets stacked; per particle the components
/// are drawn target-major.
Eigen::MatrixXd sample_initial_joint(const Scenario& sc, int particles,
                                     Rng& rng) {
  const int num_targets = sc.target_count();
  Eigen::VectorXd mean(4 * num_targets);
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(4 * num_targets, 4 * num_targets);
  for (int k = 0; k < num_targets; ++k) {
    mean.segment<4>(4 * k) = sc.filter.initial_means[k];
    chol.diagonal().segment<4>(4 * k) =
        sc.filter.initial_cov_diag.cwiseSqrt();
  }
  Eigen::MatrixXd states(4 * num_targets, particles);
  for (int n = 0; n < particles; ++n)
    states.col(n) = sample_mvn(mean, chol, rng);
  return states;
}

/// The measurement a known-association frame carries for target `target`
/// (1-based). Only valid when the scenario guarantees one measurement per
/// target per frame.
const RangeBearing& labeled_measurement(const ObservationFrame& frame,
                                        int target) {
  for (std::size_t i = 0; i < frame.source.size(); ++i) {
    if (frame.source[i] == target) return frame.measurements[i];
  }
  throw TrackError("frame lacks the measurement of target " +
                   std::to_string(target));
}

TargetTrack make_track(const Eigen::Matrix4Xd& truth, const StateVec& init_mean,
                       double init_cov_trace,
                       const Eigen::VectorXd& init_mode_probs) {
  TargetTrack track;
  track.truth = truth;
  track.estimate.setZero(4, truth.cols());
  track.estimate.col(0) = init_mean;
  track.cov_trace.setZero(truth.cols());
  track.cov_trace[0] = init_cov_trace;
  if (init_mode_probs.size() > 0) {
    track.mode_probs.setZero(init_mode_probs.size(), truth.cols());
    track.mode_probs.col(0) = init_mode_probs;
  }
  return track;
}

std::vector<ObserverModel> build_observers(const Scenario& sc) {
  std::vector<ObserverModel> observers;
  observers.reserve(sc.observers.size());
  for (const ObserverSpec& spec : sc.observers) {
    ObserverModel obs;
    obs.pose = spec.pose;
    obs.noise = spec.noise;
    obs.max_range = spec.max_range;
    obs.assoc.detect_prob = sc.detection.detect_prob;
    obs.assoc.clutter_rate = sc.detection.clutter_rate;
    obs.assoc.volume = 2.0 * 3.14159265358979323846 * spec.max_range;
    observers.push_back(obs);
  }
  return observers;
}

void run_ekf_range_bearing(const HarnessConfig& config, const TruthData& truth,
                           const std::vector<std::vector<ObservationFrame>>& frames,
                           RunRecord* record) {
  const Scenario& sc = config.scenario;
  const ModelSpec& model = sc.filter.models.front();
  const Eigen::Matrix4d f =
      transition_matrix({model.kind, model.turn_rate, sc.step});
  const Eigen::Matrix4d q = sc.filter.process[0].covariance(sc.step);

  GaussianBelief belief{sc.filter.initial_means[0],
                        sc.filter.initial_cov_diag.asDiagonal()};
  TargetTrack track = make_track(truth.targets[0], belief.mean,
                                 belief.cov.trace(), Eigen::VectorXd());
  for (int t = 1; t <= sc.horizon; ++t) {
    belief = ekf_predict(belief, f, q);
    const RangeBearing& z = labeled_measurement(frames[t - 1][0], 1);
    belief = ekf_update_range_bearing(belief, z, sc.observers[0].pose,
                                      sc.observers[0].noise);
    track.estimate.col(t) = belief.mean;
    track.cov_trace[t] = belief.cov.trace();
  }
  record->targets.push_back(std::move(track));
}

void run_ekf_bearings_only(const HarnessConfig& config, const TruthData& truth,
                           const BearingsOnlyData& data, RunRecord* record) {
  const Scenario& sc = config.scenario;
  const ModelSpec& model = sc.filter.models.front();
  const Eigen::Matrix4d f =
      transition_matrix({model.kind, model.turn_rate, sc.step});
  const Eigen::Matrix4d q = sc.filter.process[0].covariance(sc.step);
  const double sigma = sc.observers[0].noise.sigma_bearing;

  GaussianBelief belief{sc.filter.initial_means[0],
                        sc.filter.initial_cov_diag.asDiagonal()};
  TargetTrack track =
      make_track(truth.targets[0],
                 StateVec(belief.mean + data.ownship.col(0)),
                 belief.cov.trace(), Eigen::VectorXd());
  for (int t = 1; t <= sc.horizon; ++t) {
    const Eigen::Vector4d input =
        ownship_input(data.ownship.col(t), data.ownship.col(t - 1), f);
    belief = ekf_predict(belief, f, q, input);
    belief = ekf_update_bearing_north(belief, data.bearings[t - 1], sigma);
    track.estimate.col(t) = belief.mean + data.ownship.col(t);
    track.cov_trace[t] = belief.cov.trace();
  }
  record->targets.push_back(std::move(track));
}

void run_pf_range_bearing(const HarnessConfig& config, const TruthData& truth,
                          const std::vector<std::vector<ObservationFrame>>& frames,
                          Rng& rng, RunRecord* record) {
  const Scenario& sc = config.scenario;
  const int num_targets = sc.target_count();
  const ModelSpec& model = sc.filter.models.front();

  std::vector<Dynamics> parts;
  parts.reserve(num_targets);
  for (int k = 0; k < num_targets; ++k)
    parts.push_back(model_dynamics(sc, k, model));
  const Dynamics joint = stack_dynamics(parts);
  const PriorProposal proposal(joint);
  const FilterConfig fc = make_filter_config(config);

  ParticleSet set =
      make_uniform_set(sample_initial_joint(sc, config.particles, rng));
  const double init_trace = sc.filter.initial_cov_diag.sum();
  std::vector<TargetTrack> tracks;
  for (int k = 0; k < num_targets; ++k)
    tracks.push_back(make_track(truth.targets[k], sc.filter.initial_means[k],
                                init_trace, Eigen::VectorXd()));

  for (int t = 1; t <= sc.horizon; ++t) {
    const std::vector<ObservationFrame>& step_frames = frames[t - 1];
    const LogLikelihoodFn loglik =
        [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
          double ll = 0.0;
          for (std::size_t i = 0; i < sc.observers.size(); ++i) {
            for (int k = 0; k < num_targets; ++k) {
              const RangeBearing& z = labeled_measurement(step_frames[i], k + 1);
              ll += range_bearing_logpdf(z, x.segment<4>(4 * k),
                                         sc.observers[i].pose,
                                         sc.observers[i].noise);
            }
          }
          return ll;
        };
    PfStepResult res =
        config.filter == FilterKind::kBootstrap
            ? bootstrap_step(set, joint, loglik, fc, rng)
            : generic_pf_step(set, proposal, joint, loglik, fc, rng);
    set = std::move(res.set);
    if (res.degenerate) ++record->degenerate_weight_events;
    for (int k = 0; k < num_targets; ++k) {
      tracks[k].estimate.col(t) = res.estimate.mean.segment<4>(4 * k);
      tracks[k].cov_trace[t] =
          res.estimate.cov.block<4, 4>(4 * k, 4 * k).trace();
    }
  }
  for (TargetTrack& track : tracks) record->targets.push_back(std::move(track));
}

void run_pf_bearings_only(const HarnessConfig& config, const TruthData& truth,
                          const BearingsOnlyData& data, Rng& rng,
                          RunRecord* record) {
  const Scenario& sc = config.scenario;
  const ModelSpec& model = sc.filter.models.front();
  const Eigen::Matrix4d f =
      transition_matrix({model.kind, model.turn_rate, sc.step});
  const Eigen::Matrix4d q = sc.filter.process[0].covariance(sc.step);
  const double sigma = sc.observers[0].noise.sigma_bearing;
  const FilterConfig fc = make_filter_config(config);

  ParticleSet set = make_uniform_set(sample_initial_single(
      sc.filter.initial_means[0], sc.filter.initial_cov_diag,
      config.particles, rng));
  TargetTrack track = make_track(
      truth.targets[0],
      StateVec(sc.filter.initial_means[0] + data.ownship.col(0)),
      sc.filter.initial_cov_diag.sum(), Eigen::VectorXd());

  for (int t = 1; t <= sc.horizon; ++t) {
    const Dynamics dyn = Dynamics::make(
        f, q, ownship_input(data.ownship.col(t), data.ownship.col(t - 1), f));
    const PriorProposal proposal(dyn);
    const double z = data.bearings[t - 1];
    const LogLikelihoodFn loglik =
        [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
          return bearing_north_logpdf(z, x.head<4>(), sigma);
        };
    PfStepResult res = config.filter == FilterKind::kBootstrap
                           ? bootstrap_step(set, dyn, loglik, fc, rng)
                           : generic_pf_step(set, proposal, dyn, loglik, fc, rng);
    set = std::move(res.set);
    if (res.degenerate) ++record->degenerate_weight_events;
    track.estimate.col(t) = res.estimate.mean + data.ownship.col(t);
    track.cov_trace[t] = res.estimate.cov.trace();
  }
  record->targets.push_back(std::move(track));
}

void run_ippf(const HarnessConfig& config, const TruthData& truth,
              const std::vector<std::vector<ObservationFrame>>& frames,
              Rng& rng, RunRecord* record) {
  const Scenario& sc = config.scenario;
  const int num_targets = sc.target_count();
  const ModelSpec& model = sc.filter.models.front();

  std::vector<Dynamics> parts;
  parts.reserve(num_targets);
  for (int k = 0; k < num_targets; ++k)
    parts.push_back(model_dynamics(sc, k, model));
  const FilterConfig fc = make_filter_config(config);

  PartitionedSet pset;
  pset.states = sample_initial_joint(sc, config.particles, rng);
  pset.log_weights = Eigen::VectorXd::Constant(
      config.particles, -std::log(static_cast<double>(config.particles)));
  pset.num_partitions = num_targets;

  const double init_trace = sc.filter.initial_cov_diag.sum();
  std::vector<TargetTrack> tracks;
  for (int k = 0; k < num_targets; ++k)
    tracks.push_back(make_track(truth.targets[k], sc.filter.initial_means[k],
                                init_trace, Eigen::VectorXd()));

  for (int t = 1; t <= sc.horizon; ++t) {
    const std::vector<ObservationFrame>& step_frames = frames[t - 1];
    const PartitionLogLikFn loglik =
        [&](int k, const Eigen::Ref<const Eigen::Vector4d>& x) {
          double ll = 0.0;
          for (std::size_t i = 0; i < sc.observers.size(); ++i) {
            const RangeBearing& z = labeled_measurement(step_frames[i], k + 1);
            ll += range_bearing_logpdf(z, x, sc.observers[i].pose,
                                       sc.observers[i].noise);
          }
          return ll;
        };
    IppfStepResult res =
        ippf_step(pset, parts, loglik, fc, config.crossover, rng);
    pset = std::move(res.set);
    for (int k = 0; k < num_targets; ++k) {
      tracks[k].estimate.col(t) = res.estimates[k].mean;
      tracks[k].cov_trace[t] = res.estimates[k].cov.trace();
    }
  }
  for (TargetTrack& track : tracks) record->targets.push_back(std::move(track));
}

void run_mmpf(const HarnessConfig& config, const TruthData& truth,
              const std::vector<std::vector<ObservationFrame>>& frames,
              Rng& rng, RunRecord* record) {
  const Scenario& sc = config.scenario;
  const FilterSpec& fs = sc.filter;
  const FilterConfig fc = make_filter_config(config);

  std::vector<Dynamics> models;
  models.reserve(fs.models.size());
  for (const ModelSpec& model : fs.models)
    models.push_back(model_dynamics(sc, 0, model));

  AugmentedParticleSet aset;
  aset.states = sample_initial_single(fs.initial_means[0], fs.initial_cov_diag,
                                      config.particles, rng);
  aset.regimes =
      stratified_initial_regimes(config.particles, fs.initial_mode_probs, rng);
  aset.log_weights = Eigen::VectorXd::Constant(
      config.particles, -std::log(static_cast<double>(config.particles)));

  TargetTrack track = make_track(truth.targets[0], fs.initial_means[0],
                                 fs.initial_cov_diag.sum(),
                                 fs.initial_mode_probs);
  for (int t = 1; t <= sc.horizon; ++t) {
    const std::vector<ObservationFrame>& step_frames = frames[t - 1];
    const LogLikelihoodFn loglik =
        [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
          double ll = 0.0;
          for (std::size_t i = 0; i < sc.observers.size(); ++i) {
            const RangeBearing& z = labeled_measurement(step_frames[i], 1);
            ll += range_bearing_logpdf(z, x.head<4>(), sc.observers[i].pose,
                                       sc.observers[i].noise);
          }
          return ll;
        };
    MmpfStepResult res =
        mmpf_step(aset, fs.mode_transition, models, loglik, fc, rng);
    aset = std::move(res.set);
    if (res.degenerate) ++record->degenerate_weight_events;
    track.estimate.col(t) = res.estimate.mean;
    track.cov_trace[t] = res.estimate.cov.trace();
    track.mode_probs.col(t) = res.mode_probs;
  }
  record->targets.push_back(std::move(track));
}

std::vector<std::vector<RangeBearing>> frame_measurements(
    const std::vector<ObservationFrame>& step_frames) {
  std::vector<std::vector<RangeBearing>> frames;
  frames.reserve(step_frames.size());
  for (const ObservationFrame& frame : step_frames)
    frames.push_back(frame.measurements);
  return frames;
}

void run_mcjpdaf(const HarnessConfig& config, const TruthData& truth,
                 const std::vector<std::vector<ObservationFrame>>& frames,
                 Rng& rng, RunRecord* record) {
  const Scenario& sc = config.scenario;
  const int num_targets = sc.target_count();
  const ModelSpec& model = sc.filter.models.front();

  std::vector<Dynamics> dynamics;
  dynamics.reserve(num_targets);
  for (int k = 0; k < num_targets; ++k)
    dynamics.push_back(model_dynamics(sc, k, model));
  const std::vector<ObserverModel> observers = build_observers(sc);
  JpdaParams params;
  params.gate_threshold = sc.filter.gate_threshold;
  params.filter = make_filter_config(config);

  std::vector<ParticleSet> sets;
  sets.reserve(num_targets);
  for (int k = 0; k < num_targets; ++k) {
    sets.push_back(make_uniform_set(
        sample_initial_single(sc.filter.initial_means[k],
                              sc.filter.initial_cov_diag, config.particles,
                              rng)));
  }

  const double init_trace = sc.filter.initial_cov_diag.sum();
  std::vector<TargetTrack> tracks;
  for (int k = 0; k < num_targets; ++k)
    tracks.push_back(make_track(truth.targets[k], sc.filter.initial_means[k],
                                init_trace, Eigen::VectorXd()));

  for (int t = 1; t <= sc.horizon; ++t) {
    McjpdafStepResult res =
        mcjpdaf_step(sets, dynamics, frame_measurements(frames[t - 1]),
                     observers, params, rng);
    sets = std::move(res.targets);
    record->degenerate_association_events += res.degenerate_observers;
    record->degenerate_weight_events += res.degenerate_targets;
    for (int k = 0; k < num_targets; ++k) {
      tracks[k].estimate.col(t) = res.estimates[k].mean;
      tracks[k].cov_trace[t] = res.estimates[k].cov.trace();
    }
  }
  for (TargetTrack& track : tracks) record->targets.push_back(std::move(track));
}

void run_mcmmjpdaf(const HarnessConfig& config, const TruthData& truth,
                   const std::vector<std::vector<ObservationFrame>>& frames,
                   Rng& rng, RunRecord* record) {
  const Scenario& sc = config.scenario;
  const FilterSpec& fs = sc.filter;
  const int num_targets = sc.target_count();

  std::vector<Dynamics> models;
  models.reserve(fs.models.size());
  for (const ModelSpec& model : fs.models)
    models.push_back(model_dynamics(sc, 0, model));
  const std::vector<ObserverModel> observers = build_observers(sc);
  JpdaParams params;
  params.gate_threshold = fs.gate_threshold;
  params.filter = make_filter_config(config);

  std::vector<AugmentedParticleSet> sets(num_targets);
  for (int k = 0; k < num_targets; ++k) {
    sets[k].states = sample_initial_single(
        fs.initial_means[k], fs.initial_cov_diag, config.particles, rng);
    sets[k].regimes = stratified_initial_regimes(config.particles,
                                                 fs.initial_mode_probs, rng);
    sets[k].log_weights = Eigen::VectorXd::Constant(
        config.particles, -std::log(static_cast<double>(config.particles)));
  }

  const double init_trace = fs.initial_cov_diag.sum();
  std::vector<TargetTrack> tracks;
  for (int k = 0; k < num_targets; ++k)
    tracks.push_back(make_track(truth.targets[k], fs.initial_means[k],
                                init_trace, fs.initial_mode_probs));

  for (int t = 1; t <= sc.horizon; ++t) {
    McmmjpdafStepResult res = mcmmjpdaf_step(
        sets, fs.mode_transition, models, frame_measurements(frames[t - 1]),
        observers, params, rng);
    sets = std::move(res.targets);
    record->degenerate_association_events += res.degenerate_observers;
    record->degenerate_weight_events += res.degenerate_targets;
    for (int k = 0; k < num_targets; ++k) {
      tracks[k].estimate.col(t) = res.estimates[k].mean;
      tracks[k].cov_trace[t] = res.estimates[k].cov.trace();
      tracks[k].mode_probs.col(t) = res.mode_probs[k];
    }
  }
  for (TargetTrack& track : tracks) record->targets.push_back(std::move(track));
}

void append_number(std::string* out, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  *out += buffer;
}

}  // namespace

FilterKind parse_filter_kind(const std::string& name) {
  if (name == "ekf") return FilterKind::kEkf;
  if (name == "bootstrap") return FilterKind::kBootstrap;
  if (name == "pf") return FilterKind::kGenericPf;
  if (name == "ippf") return FilterKind::kIppf;
  if (name == "mmpf") return FilterKind::kMmpf;
  if (name == "mcjpdaf") return FilterKind::kMcJpdaf;
  if (name == "mcmmjpdaf") return FilterKind::kMcMmJpdaf;
  throw InvalidArgumentError(
      "unknown filter '" + name +
      "' (expected ekf, bootstrap, pf, ippf, mmpf, mcjpdaf, or mcmmjpdaf)");
}

std::string filter_kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::kEkf: return "ekf";
    case FilterKind::kBootstrap: return "bootstrap";
    case FilterKind::kGenericPf: return "pf";
    case FilterKind::kIppf: return "ippf";
    case FilterKind::kMmpf: return "mmpf";
    case FilterKind::kMcJpdaf: return "mcjpdaf";
    case FilterKind::kMcMmJpdaf: return "mcmmjpdaf";
  }
  throw InvalidArgumentError("unknown filter kind");
}

HarnessConfig make_harness_config(Scenario scenario) {
  HarnessConfig config;
  config.filter = parse_filter_kind(scenario.default_filter);
  config.particles = scenario.filter.particles;
  config.runs = scenario.default_runs;
  config.seed = scenario.default_seed;
  config.divergence_threshold = scenario.divergence_threshold;
  config.scenario = std::move(scenario);
  return config;
}

void validate_config(const HarnessConfig& config) {
  const Scenario& sc = config.scenario;
  const std::string name = filter_kind_name(config.filter);
  if (config.particles < 1)
    throw InvalidArgumentError("particles must be >= 1");
  if (config.runs < 1) throw InvalidArgumentError("runs must be >= 1");
  if (config.threads < 0)
    throw InvalidArgumentError("threads must be >= 0");
  if (!(config.divergence_threshold > 0.0))
    throw InvalidArgumentError("divergence threshold must be positive");

  const bool jpda = config.filter == FilterKind::kMcJpdaf ||
                    config.filter == FilterKind::kMcMmJpdaf;
  if (sc.kind == MeasurementKind::kBearingsOnly) {
    if (config.filter != FilterKind::kEkf &&
        config.filter != FilterKind::kBootstrap &&
        config.filter != FilterKind::kGenericPf)
      throw InvalidArgumentError("scenario '" + sc.name +
                                 "' is bearings-only; it supports the ekf, "
                                 "bootstrap, and pf trackers, not " +
                                 name);
  }
  if (!jpda && !sc.association_known())
    throw InvalidArgumentError(
        "tracker '" + name + "' assumes known measurement origins, but " +
        "scenario '" + sc.name +
        "' has missed detections or clutter; use mcjpdaf or mcmmjpdaf");
  if (config.filter == FilterKind::kEkf &&
      (sc.target_count() != 1 || sc.observers.size() != 1))
    throw InvalidArgumentError(
        "the ekf tracker supports exactly one target and one observer");
  if (config.filter == FilterKind::kMmpf && sc.target_count() != 1)
    throw InvalidArgumentError("the mmpf tracker supports exactly one target");
  if (jpda) {
    for (std::size_t i = 0; i < sc.observers.size(); ++i) {
      if (!(sc.observers[i].max_range > 0.0))
        throw InvalidArgumentError(
            "association trackers need max_range > 0 on every observer "
            "(observer " +
            std::to_string(i + 1) + " of scenario '" + sc.name + "')");
    }
  }
  if (config.filter == FilterKind::kMcMmJpdaf) {
    const Eigen::Matrix4d q0 = sc.filter.process[0].covariance(sc.step);
    for (int k = 1; k < sc.target_count(); ++k) {
      if (sc.filter.process[k].covariance(sc.step) != q0)
        throw InvalidArgumentError(
            "mcmmjpdaf shares one model set across targets and needs a "
            "common process noise");
    }
  }
}

RunRecord run_single(const HarnessConfig& config, int run_index) {
  const Scenario& sc = config.scenario;
  const std::uint64_t run_seed =
      config.seed ^ static_cast<std::uint64_t>(run_index);
  Rng rng(run_seed);
  const auto start = std::chrono::steady_clock::now();

  RunRecord record;
  record.run = run_index;
  record.seed = run_seed;

  TruthData truth = simulate_truth(sc, rng);
  if (sc.kind == MeasurementKind::kRangeBearing) {
    const std::vector<std::vector<ObservationFrame>> frames =
        simulate_observations(sc, truth, rng);
    switch (config.filter) {
      case FilterKind::kEkf:
        run_ekf_range_bearing(config, truth, frames, &record);
        break;
      case FilterKind::kBootstrap:
      case FilterKind::kGenericPf:
        run_pf_range_bearing(config, truth, frames, rng, &record);
        break;
      case FilterKind::kIppf:
        run_ippf(config, truth, frames, rng, &record);
        break;
      case FilterKind::kMmpf:
        run_mmpf(config, truth, frames, rng, &record);
        break;
      case FilterKind::kMcJpdaf:
        run_mcjpdaf(config, truth, frames, rng, &record);
        break;
      case FilterKind::kMcMmJpdaf:
        run_mcmmjpdaf(config, truth, frames, rng, &record);
        break;
    }
  } else {
    const BearingsOnlyData data = simulate_bearings_only(sc, truth, rng);
    switch (config.filter) {
      case FilterKind::kEkf:
        run_ekf_bearings_only(config, truth, data, &record);
        break;
      case FilterKind::kBootstrap:
      case FilterKind::kGenericPf:
        run_pf_bearings_only(config, truth, data, rng, &record);
        break;
      default:
        throw InvalidArgumentError(
            "bearings-only scenarios support ekf, bootstrap, and pf");
    }
  }

  record.diverged = detect_divergence(record, config.divergence_threshold);
  record.swapped = detect_swap(record);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

HarnessResult run_monte_carlo(const HarnessConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();

  HarnessResult result;
  result.records.resize(config.runs);

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, config.runs));

  if (threads == 1) {
    for (int i = 0; i < config.runs; ++i)
      result.records[i] = run_single(config, i);
  } else {
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= config.runs) return;
        try {
          result.records[i] = run_single(config, i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
    if (error) std::rethrow_exception(error);
  }

  result.report = aggregate_metrics(
      result.records, config.scenario.name, filter_kind_name(config.filter),
      config.particles, config.seed, config.scenario.step,
      config.divergence_threshold);
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

std::string tracks_csv(const HarnessResult& result) {
  if (result.records.empty() || result.records.front().targets.empty())
    throw InvalidArgumentError("tracks_csv: empty result");
  const Eigen::Index mode_rows =
      result.records.front().targets.front().mode_probs.rows();

  std::string out =
      "run,t,target,true_x,true_y,true_vx,true_vy,est_x,est_y,est_vx,est_vy,"
      "cov_trace";
  for (Eigen::Index m = 1; m <= mode_rows; ++m)
    out += ",mode_prob_" + std::to_string(m);
  out += "\n";

  for (const RunRecord& record : result.records) {
    const Eigen::Index length = record.targets.front().truth.cols();
    for (Eigen::Index t = 0; t < length; ++t) {
      for (std::size_t k = 0; k < record.targets.size(); ++k) {
        const TargetTrack& track = record.targets[k];
        out += std::to_string(record.run);
        out += ',';
        out += std::to_string(t);
        out += ',';
        out += std::to_string(k + 1);
        const double values[] = {track.truth(0, t),    track.truth(2, t),
                                 track.truth(1, t),    track.truth(3, t),
                                 track.estimate(0, t), track.estimate(2, t),
                                 track.estimate(1, t), track.estimate(3, t),
                                 track.cov_trace[t]};
        for (double value : values) {
          out += ',';
          append_number(&out, value);
        }
        for (Eigen::Index m = 0; m < mode_rows; ++m) {
          out += ',';
          append_number(&out, track.mode_probs(m, t));
        }
        out += '\n';
      }
    }
  }
  return out;
}

std::string mse_csv(const MetricsReport& report) {
  std::string out = "t,target,position_mse\n";
  for (Eigen::Index t = 0; t < report.mse_position.cols(); ++t) {
    for (Eigen::Index k = 0; k < report.mse_position.rows(); ++k) {
      out += std::to_string(t);
      out += ',';
      out += std::to_string(k + 1);
      out += ',';
      append_number(&out, report.mse_position(k, t));
      out += '\n';
    }
  }
  return out;
}

}  // namespace tracklab
