// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace tracklab {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw InvalidArgumentError(origin + ": " + message);
}

/// Rejects unknown keys so config typos surface as errors, not silent
/// defaults.
void check_keys(const json& node, const std::string& origin,
                const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(origin, "unknown key '" + it.key() + "' in " + context);
  }
}

const json& require(const json& node, const std::string& origin,
                    const std::string& context, const char* key) {
  auto it = node.find(key);
  if (it == node.end())
    fail(origin, context + " is missing required key '" + std::string(key) + "'");
  return *it;
}

double as_number(const json& node, const std::string& origin,
                 const std::string& what) {
  if (!node.is_number()) fail(origin, what + " must be a number");
  return node.get<double>();
}

int as_int(const json& node, const std::string& origin,
           const std::string& what) {
  if (!node.is_number_integer()) fail(origin, what + " must be an integer");
  return node.get<int>();
}

bool as_bool(const json& node, const std::string& origin,
             const std::string& what) {
  if (!node.is_boolean()) fail(origin, what + " must be a boolean");
  return node.get<bool>();
}

std::string as_string(const json& node, const std::string& origin,
                      const std::string& what) {
  if (!node.is_string()) fail(origin, what + " must be a string");
  return node.get<std::string>();
}

Eigen::Vector2d as_vec2(const json& node, const std::string& origin,
                        const std::string& what) {
  if (!node.is_array() || node.size() != 2)
    fail(origin, what + " must be an array of 2 numbers");
  return {as_number(node[0], origin, what), as_number(node[1], origin, what)};
}

Eigen::Vector4d as_vec4(const json& node, const std::string& origin,
                        const std::string& what) {
  if (!node.is_array() || node.size() != 4)
    fail(origin, what + " must be an array of 4 numbers");
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) v[i] = as_number(node[i], origin, what);
  return v;
}

/// State built from {"position": [x, y], "velocity": [vx, vy]}.
StateVec as_state(const json& node, const std::string& origin,
                  const std::string& context) {
  if (!node.is_object()) fail(origin, context + " must be an object");
  check_keys(node, origin, context, {"position", "velocity"});
  Eigen::Vector2d p =
      as_vec2(require(node, origin, context, "position"), origin,
              context + ".position");
  Eigen::Vector2d v =
      as_vec2(require(node, origin, context, "velocity"), origin,
              context + ".velocity");
  StateVec x;
  x << p.x(), v.x(), p.y(), v.y();
  return x;
}

/// Shared reader for {"model": "cv"|"ct", "turn_rate"|"turn_rate_deg"}.
void read_model(const json& node, const std::string& origin,
                const std::string& context, MotionKind* kind,
                double* turn_rate) {
  std::string model = as_string(require(node, origin, context, "model"),
                                origin, context + ".model");
  bool has_rad = node.contains("turn_rate");
  bool has_deg = node.contains("turn_rate_deg");
  if (model == "cv") {
    if (has_rad || has_deg)
      fail(origin, context + ": a cv model takes no turn rate");
    *kind = MotionKind::kConstantVelocity;
    *turn_rate = 0.0;
  } else if (model == "ct") {
    if (has_rad == has_deg)
      fail(origin, context +
                       ": a ct model needs exactly one of 'turn_rate' "
                       "(rad/s) or 'turn_rate_deg'");
    *kind = MotionKind::kCoordinatedTurn;
    *turn_rate = has_rad ? as_number(node["turn_rate"], origin,
                                     context + ".turn_rate")
                         : as_number(node["turn_rate_deg"], origin,
                                     context + ".turn_rate_deg") *
                               kPi / 180.0;
  } else {
    fail(origin, context + ".model must be 'cv' or 'ct', got '" + model + "'");
  }
}

MotionSegment parse_segment(const json& node, const std::string& origin,
                            const std::string& context) {
  if (!node.is_object()) fail(origin, context + " must be an object");
  check_keys(node, origin, context,
             {"model", "turn_rate", "turn_rate_deg", "steps"});
  MotionSegment seg;
  read_model(node, origin, context, &seg.kind, &seg.turn_rate);
  seg.steps = as_int(require(node, origin, context, "steps"), origin,
                     context + ".steps");
  if (seg.steps < 1) fail(origin, context + ".steps must be >= 1");
  return seg;
}

/// Resolves a noise scale given either the std-deviation key or the variance
/// key (exactly one).
double noise_scale(const json& node, const std::string& origin,
                   const std::string& context, const char* sigma_key,
                   const char* variance_key) {
  bool has_sigma = node.contains(sigma_key);
  bool has_var = node.contains(variance_key);
  if (has_sigma == has_var)
    fail(origin, context + " needs exactly one of '" + sigma_key + "' or '" +
                     variance_key + "'");
  double value = has_sigma
                     ? as_number(node[sigma_key], origin,
                                 context + "." + sigma_key)
                     : std::sqrt(as_number(node[variance_key], origin,
                                           context + "." + variance_key));
  if (!(value > 0.0)) fail(origin, context + ": noise scale must be positive");
  return value;
}

TargetSpec parse_target(const json& node, const std::string& origin,
                        const std::string& context, MeasurementKind kind,
                        const OwnshipSpec& ownship) {
  if (!node.is_object()) fail(origin, context + " must be an object");
  check_keys(node, origin, context,
             {"initial", "placement", "segments"});
  TargetSpec target;
  bool has_initial = node.contains("initial");
  bool has_placement = node.contains("placement");
  if (has_initial == has_placement)
    fail(origin,
         context + " needs exactly one of 'initial' or 'placement'");
  if (has_initial) {
    target.initial = as_state(node["initial"], origin, context + ".initial");
  } else {
    if (kind != MeasurementKind::kBearingsOnly)
      fail(origin, context +
                       ".placement (range/bearing relative to the platform) "
                       "is only valid in bearings_only scenarios");
    const json& pl = node["placement"];
    const std::string pctx = context + ".placement";
    if (!pl.is_object()) fail(origin, pctx + " must be an object");
    check_keys(pl, origin, pctx,
               {"range", "bearing_deg", "course_deg", "speed_knots"});
    double range = as_number(require(pl, origin, pctx, "range"), origin,
                             pctx + ".range");
    double bearing = as_number(require(pl, origin, pctx, "bearing_deg"),
                               origin, pctx + ".bearing_deg") *
                     kPi / 180.0;
    double course = as_number(require(pl, origin, pctx, "course_deg"), origin,
                              pctx + ".course_deg") *
                    kPi / 180.0;
    double speed = as_number(require(pl, origin, pctx, "speed_knots"), origin,
                             pctx + ".speed_knots") *
                   kKnotsToMps;
    if (!(range > 0.0)) fail(origin, pctx + ".range must be positive");
    // North-referenced clockwise angles: x is East, y is North.
    target.initial << ownship.initial_position.x() + range * std::sin(bearing),
        speed * std::sin(course),
        ownship.initial_position.y() + range * std::cos(bearing),
        speed * std::cos(course);
  }
  if (node.contains("segments")) {
    const json& segs = node["segments"];
    if (!segs.is_array()) fail(origin, context + ".segments must be an array");
    for (std::size_t j = 0; j < segs.size(); ++j) {
      target.segments.push_back(parse_segment(
          segs[j], origin, context + ".segments[" + std::to_string(j) + "]"));
    }
  }
  return target;
}

ProcessNoiseSpec parse_process_noise(const json& node,
                                     const std::string& origin,
                                     const std::string& context) {
  if (!node.is_object()) fail(origin, context + " must be an object");
  check_keys(node, origin, context, {"q_diag", "white_noise"});
  bool has_diag = node.contains("q_diag");
  bool has_white = node.contains("white_noise");
  if (has_diag == has_white)
    fail(origin,
         context + " needs exactly one of 'q_diag' or 'white_noise'");
  ProcessNoiseSpec spec;
  if (has_diag) {
    spec.white_noise = false;
    spec.q_diag = as_vec4(node["q_diag"], origin, context + ".q_diag");
    if ((spec.q_diag.array() < 0.0).any())
      fail(origin, context + ".q_diag entries must be non-negative");
  } else {
    const json& wn = node["white_noise"];
    const std::string wctx = context + ".white_noise";
    if (!wn.is_object()) fail(origin, wctx + " must be an object");
    check_keys(wn, origin, wctx, {"sigma_x", "sigma_y"});
    spec.white_noise = true;
    spec.sigma_x = as_number(require(wn, origin, wctx, "sigma_x"), origin,
                             wctx + ".sigma_x");
    spec.sigma_y = as_number(require(wn, origin, wctx, "sigma_y"), origin,
                             wctx + ".sigma_y");
    if (!(spec.sigma_x > 0.0) || !(spec.sigma_y > 0.0))
      fail(origin, wctx + " intensities must be positive");
  }
  return spec;
}

FilterSpec parse_filter(const json& node, const std::string& origin,
                        int target_count) {
  const std::string context = "filter";
  if (!node.is_object()) fail(origin, context + " must be an object");
  check_keys(node, origin, context,
             {"initial_mean_from_truth", "initial_means", "initial_cov_diag",
              "process_noise", "models", "mode_transition",
              "initial_mode_probs", "particles",
              "resample_threshold_fraction", "roughening_gain",
              "gate_threshold"});
  FilterSpec filter;

  bool from_truth = node.contains("initial_mean_from_truth") &&
                    as_bool(node["initial_mean_from_truth"], origin,
                            "filter.initial_mean_from_truth");
  bool has_means = node.contains("initial_means");
  if (from_truth == has_means)
    fail(origin,
         "filter needs exactly one of 'initial_mean_from_truth: true' or "
         "'initial_means'");
  filter.initial_mean_from_truth = from_truth;
  if (has_means) {
    const json& means = node["initial_means"];
    if (!means.is_array() ||
        means.size() != static_cast<std::size_t>(target_count))
      fail(origin, "filter.initial_means must list one state per target");
    for (std::size_t k = 0; k < means.size(); ++k) {
      filter.initial_means.push_back(
          as_state(means[k], origin,
                   "filter.initial_means[" + std::to_string(k) + "]"));
    }
  }

  filter.initial_cov_diag =
      as_vec4(require(node, origin, context, "initial_cov_diag"), origin,
              "filter.initial_cov_diag");
  if ((filter.initial_cov_diag.array() < 0.0).any())
    fail(origin, "filter.initial_cov_diag entries must be non-negative");

  const json& process = require(node, origin, context, "process_noise");
  if (!process.is_array() || process.empty())
    fail(origin, "filter.process_noise must be a non-empty array");
  if (process.size() != 1 &&
      process.size() != static_cast<std::size_t>(target_count))
    fail(origin,
         "filter.process_noise must have one entry (shared) or one per "
         "target");
  for (std::size_t k = 0; k < process.size(); ++k) {
    filter.process.push_back(parse_process_noise(
        process[k], origin, "filter.process_noise[" + std::to_string(k) + "]"));
  }
  while (static_cast<int>(filter.process.size()) < target_count)
    filter.process.push_back(filter.process.front());

  const json& models = require(node, origin, context, "models");
  if (!models.is_array() || models.empty())
    fail(origin, "filter.models must be a non-empty array");
  for (std::size_t m = 0; m < models.size(); ++m) {
    const json& mnode = models[m];
    const std::string mctx = "filter.models[" + std::to_string(m) + "]";
    if (!mnode.is_object()) fail(origin, mctx + " must be an object");
    check_keys(mnode, origin, mctx, {"model", "turn_rate", "turn_rate_deg"});
    ModelSpec spec;
    read_model(mnode, origin, mctx, &spec.kind, &spec.turn_rate);
    filter.models.push_back(spec);
  }
  const int s = filter.model_count();

  if (node.contains("mode_transition")) {
    const json& pi = node["mode_transition"];
    if (!pi.is_array() || pi.size() != static_cast<std::size_t>(s))
      fail(origin, "filter.mode_transition must be an s x s matrix");
    filter.mode_transition.resize(s, s);
    for (int r = 0; r < s; ++r) {
      const json& row = pi[r];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(s))
        fail(origin, "filter.mode_transition must be an s x s matrix");
      for (int c = 0; c < s; ++c)
        filter.mode_transition(r, c) =
            as_number(row[c], origin, "filter.mode_transition");
    }
  } else {
    filter.mode_transition = Eigen::MatrixXd::Identity(s, s);
    if (s > 1)
      fail(origin,
           "filter.mode_transition is required with more than one model");
  }
  for (int r = 0; r < s; ++r) {
    if ((filter.mode_transition.row(r).array() < 0.0).any() ||
        std::abs(filter.mode_transition.row(r).sum() - 1.0) > 1e-9)
      fail(origin, "filter.mode_transition rows must be probabilities "
                   "summing to 1");
  }

  if (node.contains("initial_mode_probs")) {
    const json& p0 = node["initial_mode_probs"];
    if (!p0.is_array() || p0.size() != static_cast<std::size_t>(s))
      fail(origin, "filter.initial_mode_probs must have one entry per model");
    filter.initial_mode_probs.resize(s);
    for (int m = 0; m < s; ++m)
      filter.initial_mode_probs[m] =
          as_number(p0[m], origin, "filter.initial_mode_probs");
  } else {
    filter.initial_mode_probs = Eigen::VectorXd::Constant(s, 1.0 / s);
  }
  if ((filter.initial_mode_probs.array() < 0.0).any() ||
      std::abs(filter.initial_mode_probs.sum() - 1.0) > 1e-9)
    fail(origin, "filter.initial_mode_probs must sum to 1");

  if (node.contains("particles")) {
    filter.particles = as_int(node["particles"], origin, "filter.particles");
    if (filter.particles < 1) fail(origin, "filter.particles must be >= 1");
  }
  if (node.contains("resample_threshold_fraction")) {
    filter.resample_threshold_fraction =
        as_number(node["resample_threshold_fraction"], origin,
                  "filter.resample_threshold_fraction");
    if (filter.resample_threshold_fraction < 0.0 ||
        filter.resample_threshold_fraction > 1.0)
      fail(origin, "filter.resample_threshold_fraction must lie in [0, 1]");
  }
  if (node.contains("roughening_gain")) {
    filter.roughening.tuning_gain =
        as_number(node["roughening_gain"], origin, "filter.roughening_gain");
    if (filter.roughening.tuning_gain < 0.0)
      fail(origin, "filter.roughening_gain must be non-negative");
  }
  filter.gate_threshold = -2.0 * std::log(0.01);
  if (node.contains("gate_threshold")) {
    filter.gate_threshold =
        as_number(node["gate_threshold"], origin, "filter.gate_threshold");
    if (!(filter.gate_threshold > 0.0))
      fail(origin, "filter.gate_threshold must be positive");
  }
  return filter;
}

int total_steps(const std::vector<MotionSegment>& segments) {
  int total = 0;
  for (const MotionSegment& seg : segments) total += seg.steps;
  return total;
}

void validate(Scenario& sc, const std::string& origin) {
  if (sc.name.empty()) fail(origin, "name must be non-empty");
  if (!(sc.step > 0.0)) fail(origin, "step must be positive");
  if (sc.horizon < 1) fail(origin, "horizon must be >= 1");
  if (sc.targets.empty()) fail(origin, "at least one target is required");

  for (std::size_t k = 0; k < sc.targets.size(); ++k) {
    TargetSpec& target = sc.targets[k];
    if (target.segments.empty()) {
      target.segments.push_back(
          {MotionKind::kConstantVelocity, 0.0, sc.horizon});
    }
    if (total_steps(target.segments) != sc.horizon)
      fail(origin, "target " + std::to_string(k + 1) +
                       ": segment steps must sum to the horizon");
  }

  if (sc.observers.empty()) fail(origin, "at least one observer is required");
  if (sc.detection.detect_prob <= 0.0 || sc.detection.detect_prob > 1.0)
    fail(origin, "detection.probability must lie in (0, 1]");
  if (sc.detection.clutter_rate < 0.0)
    fail(origin, "detection.clutter_rate must be non-negative");
  const bool needs_range =
      sc.detection.clutter_rate > 0.0 || sc.detection.range_limited;
  for (std::size_t i = 0; i < sc.observers.size(); ++i) {
    const ObserverSpec& obs = sc.observers[i];
    if (sc.kind == MeasurementKind::kRangeBearing &&
        !(obs.noise.sigma_range > 0.0))
      fail(origin, "observer " + std::to_string(i + 1) +
                       ": range noise must be positive");
    if (!(obs.noise.sigma_bearing > 0.0))
      fail(origin, "observer " + std::to_string(i + 1) +
                       ": bearing noise must be positive");
    if (needs_range && !(obs.max_range > 0.0))
      fail(origin, "observer " + std::to_string(i + 1) +
                       ": max_range must be positive when clutter or "
                       "range-limited detection is enabled");
  }

  if (sc.kind == MeasurementKind::kBearingsOnly) {
    if (sc.targets.size() != 1)
      fail(origin, "bearings_only scenarios support exactly one target");
    if (sc.observers.size() != 1)
      fail(origin, "bearings_only scenarios support exactly one observer");
    if (!sc.association_known())
      fail(origin,
           "bearings_only scenarios require probability 1 and no clutter");
    if (sc.ownship.legs.empty())
      fail(origin, "bearings_only scenarios require ownship legs");
    int steps = 0;
    for (const OwnshipLeg& leg : sc.ownship.legs) {
      if (leg.steps < 1) fail(origin, "ownship leg steps must be >= 1");
      if (leg.speed < 0.0) fail(origin, "ownship leg speed must be >= 0");
      steps += leg.steps;
    }
    if (steps != sc.horizon)
      fail(origin, "ownship leg steps must sum to the horizon");
  } else if (!sc.ownship.legs.empty()) {
    fail(origin, "ownship is only valid in bearings_only scenarios");
  }

  if (!sc.filter.initial_mean_from_truth &&
      sc.filter.initial_means.size() != sc.targets.size())
    fail(origin, "filter.initial_means must list one state per target");
  if (sc.filter.initial_mean_from_truth) {
    sc.filter.initial_means.clear();
    const Eigen::Matrix4Xd own =
        sc.kind == MeasurementKind::kBearingsOnly
            ? ownship_track(sc.ownship, sc.step, sc.horizon)
            : Eigen::Matrix4Xd::Zero(4, 1);
    for (const TargetSpec& target : sc.targets) {
      StateVec mean = target.initial;
      // Bearings-only trackers run on the platform-relative state.
      if (sc.kind == MeasurementKind::kBearingsOnly) mean -= own.col(0);
      sc.filter.initial_means.push_back(mean);
    }
  }
  if (!(sc.divergence_threshold > 0.0))
    fail(origin, "divergence_threshold must be positive");
  if (sc.default_runs < 1) fail(origin, "defaults.runs must be >= 1");
}

}  // namespace

Eigen::Matrix4d ProcessNoiseSpec::covariance(double step) const {
  if (white_noise) return white_noise_q(sigma_x, sigma_y, step);
  return q_diag.asDiagonal();
}

Scenario parse_scenario(const std::string& json_text,
                        const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text, /*cb=*/nullptr, /*allow_exceptions=*/true,
                       /*ignore_comments=*/true);
  } catch (const json::parse_error& err) {
    fail(origin, std::string("JSON parse error: ") + err.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  check_keys(root, origin, "scenario",
             {"name", "kind", "step", "horizon", "targets", "truth_noise",
              "observers", "detection", "ownship", "filter", "defaults",
              "divergence_threshold"});

  Scenario sc;
  sc.name = as_string(require(root, origin, "scenario", "name"), origin,
                      "name");
  std::string kind = as_string(require(root, origin, "scenario", "kind"),
                               origin, "kind");
  if (kind == "range_bearing") {
    sc.kind = MeasurementKind::kRangeBearing;
  } else if (kind == "bearings_only") {
    sc.kind = MeasurementKind::kBearingsOnly;
  } else {
    fail(origin, "kind must be 'range_bearing' or 'bearings_only', got '" +
                     kind + "'");
  }
  sc.step = as_number(require(root, origin, "scenario", "step"), origin,
                      "step");
  sc.horizon = as_int(require(root, origin, "scenario", "horizon"), origin,
                      "horizon");

  if (root.contains("ownship")) {
    const json& own = root["ownship"];
    if (!own.is_object()) fail(origin, "ownship must be an object");
    check_keys(own, origin, "ownship", {"initial_position", "legs"});
    if (own.contains("initial_position"))
      sc.ownship.initial_position = as_vec2(own["initial_position"], origin,
                                            "ownship.initial_position");
    const json& legs = require(own, origin, "ownship", "legs");
    if (!legs.is_array()) fail(origin, "ownship.legs must be an array");
    for (std::size_t i = 0; i < legs.size(); ++i) {
      const json& lnode = legs[i];
      const std::string lctx = "ownship.legs[" + std::to_string(i) + "]";
      if (!lnode.is_object()) fail(origin, lctx + " must be an object");
      check_keys(lnode, origin, lctx, {"course_deg", "speed_knots", "steps"});
      OwnshipLeg leg;
      leg.course = as_number(require(lnode, origin, lctx, "course_deg"),
                             origin, lctx + ".course_deg") *
                   kPi / 180.0;
      leg.speed = as_number(require(lnode, origin, lctx, "speed_knots"),
                            origin, lctx + ".speed_knots") *
                  kKnotsToMps;
      leg.steps =
          as_int(require(lnode, origin, lctx, "steps"), origin, lctx + ".steps");
      sc.ownship.legs.push_back(leg);
    }
  }

  const json& targets = require(root, origin, "scenario", "targets");
  if (!targets.is_array() || targets.empty())
    fail(origin, "targets must be a non-empty array");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    sc.targets.push_back(parse_target(targets[k], origin,
                                      "targets[" + std::to_string(k) + "]",
                                      sc.kind, sc.ownship));
  }

  if (root.contains("truth_noise")) {
    const json& tn = root["truth_noise"];
    if (!tn.is_object()) fail(origin, "truth_noise must be an object");
    check_keys(tn, origin, "truth_noise", {"sigma_x", "sigma_y"});
    sc.truth_sigma_x = as_number(require(tn, origin, "truth_noise", "sigma_x"),
                                 origin, "truth_noise.sigma_x");
    sc.truth_sigma_y = as_number(require(tn, origin, "truth_noise", "sigma_y"),
                                 origin, "truth_noise.sigma_y");
    if (sc.truth_sigma_x < 0.0 || sc.truth_sigma_y < 0.0)
      fail(origin, "truth_noise intensities must be non-negative");
  }

  const json& observers = require(root, origin, "scenario", "observers");
  if (!observers.is_array() || observers.empty())
    fail(origin, "observers must be a non-empty array");
  for (std::size_t i = 0; i < observers.size(); ++i) {
    const json& onode = observers[i];
    const std::string octx = "observers[" + std::to_string(i) + "]";
    if (!onode.is_object()) fail(origin, octx + " must be an object");
    check_keys(onode, origin, octx,
               {"position", "sigma_range", "range_variance", "sigma_bearing",
                "bearing_variance", "max_range"});
    ObserverSpec obs;
    if (onode.contains("position")) {
      Eigen::Vector2d p = as_vec2(onode["position"], origin, octx + ".position");
      obs.pose = {p.x(), p.y()};
    }
    if (sc.kind == MeasurementKind::kRangeBearing) {
      obs.noise.sigma_range =
          noise_scale(onode, origin, octx, "sigma_range", "range_variance");
    } else if (onode.contains("sigma_range") ||
               onode.contains("range_variance")) {
      fail(origin, octx + ": bearings_only observers take no range noise");
    }
    obs.noise.sigma_bearing =
        noise_scale(onode, origin, octx, "sigma_bearing", "bearing_variance");
    if (onode.contains("max_range")) {
      obs.max_range = as_number(onode["max_range"], origin, octx + ".max_range");
      if (!(obs.max_range > 0.0))
        fail(origin, octx + ".max_range must be positive");
    }
    sc.observers.push_back(obs);
  }

  if (root.contains("detection")) {
    const json& det = root["detection"];
    if (!det.is_object()) fail(origin, "detection must be an object");
    check_keys(det, origin, "detection",
               {"probability", "clutter_rate", "range_limited"});
    if (det.contains("probability"))
      sc.detection.detect_prob =
          as_number(det["probability"], origin, "detection.probability");
    if (det.contains("clutter_rate"))
      sc.detection.clutter_rate =
          as_number(det["clutter_rate"], origin, "detection.clutter_rate");
    if (det.contains("range_limited"))
      sc.detection.range_limited =
          as_bool(det["range_limited"], origin, "detection.range_limited");
  }

  sc.filter = parse_filter(require(root, origin, "scenario", "filter"), origin,
                           static_cast<int>(sc.targets.size()));

  if (root.contains("defaults")) {
    const json& defaults = root["defaults"];
    if (!defaults.is_object()) fail(origin, "defaults must be an object");
    check_keys(defaults, origin, "defaults", {"filter", "runs", "seed"});
    if (defaults.contains("filter"))
      sc.default_filter =
          as_string(defaults["filter"], origin, "defaults.filter");
    if (defaults.contains("runs"))
      sc.default_runs = as_int(defaults["runs"], origin, "defaults.runs");
    if (defaults.contains("seed")) {
      const json& seed = defaults["seed"];
      if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
        fail(origin, "defaults.seed must be a non-negative integer");
      sc.default_seed = seed.get<std::uint64_t>();
    }
  }
  if (root.contains("divergence_threshold"))
    sc.divergence_threshold = as_number(root["divergence_threshold"], origin,
                                        "divergence_threshold");

  validate(sc, origin);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

std::vector<std::string> list_scenarios(const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::directory_iterator it(directory, ec);
  if (ec)
    throw InvalidArgumentError("cannot read scenario directory: " + directory);
  std::vector<std::string> names;
  for (const fs::directory_entry& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<Eigen::Matrix4d> segment_transitions(const TargetSpec& target,
                                                 double step, int horizon) {
  if (total_steps(target.segments) != horizon)
    throw InvalidArgumentError(
        "segment steps do not sum to the requested horizon");
  std::vector<Eigen::Matrix4d> result;
  result.reserve(horizon);
  for (const MotionSegment& seg : target.segments) {
    const Eigen::Matrix4d f =
        transition_matrix({seg.kind, seg.turn_rate, step});
    for (int i = 0; i < seg.steps; ++i) result.push_back(f);
  }
  return result;
}

Eigen::Matrix4Xd ownship_track(const OwnshipSpec& ownship, double step,
                               int horizon) {
  int total = 0;
  for (const OwnshipLeg& leg : ownship.legs) total += leg.steps;
  if (total != horizon)
    throw InvalidArgumentError("ownship leg steps do not sum to the horizon");
  // Velocity in effect at index t (North-referenced clockwise course).
  std::vector<Eigen::Vector2d> velocity(horizon + 1);
  int t = 0;
  for (const OwnshipLeg& leg : ownship.legs) {
    const Eigen::Vector2d v(leg.speed * std::sin(leg.course),
                            leg.speed * std::cos(leg.course));
    for (int i = 0; i < leg.steps; ++i) velocity[t++] = v;
  }
  velocity[horizon] = velocity[horizon - 1];

  Eigen::Matrix4Xd track(4, horizon + 1);
  Eigen::Vector2d position = ownship.initial_position;
  for (int i = 0; i <= horizon; ++i) {
    track.col(i) << position.x(), velocity[i].x(), position.y(),
        velocity[i].y();
    if (i < horizon) position += step * velocity[i];
  }
  return track;
}

}  // namespace tracklab
