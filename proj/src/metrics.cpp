// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/metrics.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "tracklab/association.hpp"
#include "tracklab/types.hpp"

namespace tracklab {
namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& node, const char* what) {
  if (!node.is_array())
    throw InvalidArgumentError(std::string("metrics JSON: ") + what +
                               " must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(node.size());
  Eigen::Index cols = 0;
  if (rows > 0) {
    if (!node[0].is_array())
      throw InvalidArgumentError(std::string("metrics JSON: ") + what +
                                 " rows must be arrays");
    cols = static_cast<Eigen::Index>(node[0].size());
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = node[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidArgumentError(std::string("metrics JSON: ") + what +
                                 " rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[c].is_number())
        throw InvalidArgumentError(std::string("metrics JSON: ") + what +
                                   " entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& node, const char* what) {
  if (!node.is_array())
    throw InvalidArgumentError(std::string("metrics JSON: ") + what +
                               " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!node[i].is_number())
      throw InvalidArgumentError(std::string("metrics JSON: ") + what +
                                 " entries must be numbers");
    v[i] = node[i].get<double>();
  }
  return v;
}

const json& field(const json& root, const char* key) {
  auto it = root.find(key);
  if (it == root.end())
    throw InvalidArgumentError(std::string("metrics JSON: missing key '") +
                               key + "'");
  return *it;
}

}  // namespace

double position_error(const TargetTrack& track, int t) {
  if (t < 0 || t >= track.truth.cols() || track.estimate.cols() != track.truth.cols())
    throw InvalidArgumentError("position_error: step index out of range");
  const double dx = track.estimate(0, t) - track.truth(0, t);
  const double dy = track.estimate(2, t) - track.truth(2, t);
  return std::sqrt(dx * dx + dy * dy);
}

Eigen::VectorXd compute_position_mse(
    const std::vector<Eigen::Matrix4Xd>& estimates,
    const std::vector<Eigen::Matrix4Xd>& truths) {
  if (estimates.empty() || estimates.size() != truths.size())
    throw InvalidArgumentError(
        "compute_position_mse: need matching, non-empty estimate and truth "
        "lists");
  const Eigen::Index length = estimates.front().cols();
  Eigen::VectorXd mse = Eigen::VectorXd::Zero(length);
  for (std::size_t r = 0; r < estimates.size(); ++r) {
    if (estimates[r].cols() != length || truths[r].cols() != length)
      throw InvalidArgumentError(
          "compute_position_mse: series lengths do not match");
    for (Eigen::Index t = 0; t < length; ++t) {
      const double dx = estimates[r](0, t) - truths[r](0, t);
      const double dy = estimates[r](2, t) - truths[r](2, t);
      mse[t] += dx * dx + dy * dy;
    }
  }
  mse /= static_cast<double>(estimates.size());
  return mse;
}

bool detect_divergence(const RunRecord& record, double threshold) {
  for (const TargetTrack& track : record.targets) {
    const int last = static_cast<int>(track.truth.cols()) - 1;
    if (position_error(track, last) > threshold) return true;
  }
  return false;
}

bool detect_swap(const RunRecord& record) {
  const int num_targets = static_cast<int>(record.targets.size());
  if (num_targets < 2) return false;
  std::vector<Eigen::Vector2d> estimates;
  std::vector<Eigen::Vector2d> truths;
  estimates.reserve(num_targets);
  truths.reserve(num_targets);
  for (const TargetTrack& track : record.targets) {
    const int last = static_cast<int>(track.truth.cols()) - 1;
    estimates.emplace_back(track.estimate(0, last), track.estimate(2, last));
    truths.emplace_back(track.truth(0, last), track.truth(2, last));
  }
  const std::vector<int> assignment =
      nearest_neighbor_assignment(estimates, truths);
  for (int k = 0; k < num_targets; ++k) {
    if (assignment[k] != k) return true;
  }
  return false;
}

std::string MetricsReport::to_json() const {
  json root;
  root["scenario"] = scenario;
  root["filter"] = filter;
  root["particles"] = particles;
  root["runs"] = runs;
  root["seed"] = seed;
  root["targets"] = targets;
  root["horizon"] = horizon;
  root["step"] = step;
  root["divergence_threshold"] = divergence_threshold;
  root["mse_position"] = matrix_to_json(mse_position);
  root["rmse_time_avg"] = vector_to_json(rmse_time_avg);
  root["rmse_final"] = vector_to_json(rmse_final);
  root["final_position_errors"] = matrix_to_json(final_position_errors);
  root["diverged_runs"] = diverged_runs;
  root["divergence_count"] = divergence_count();
  root["swapped_runs"] = swapped_runs;
  root["swap_count"] = swap_count();
  root["degenerate_weight_events"] = degenerate_weight_events;
  root["degenerate_association_events"] = degenerate_association_events;
  json modes = json::array();
  for (const Eigen::MatrixXd& m : mode_probability_means)
    modes.push_back(matrix_to_json(m));
  root["mode_probability_means"] = std::move(modes);
  root["wall_seconds"] = wall_seconds;
  return root.dump(2);
}

MetricsReport MetricsReport::from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw InvalidArgumentError(std::string("metrics JSON parse error: ") +
                               err.what());
  }
  if (!root.is_object())
    throw InvalidArgumentError("metrics JSON: top level must be an object");
  MetricsReport report;
  report.scenario = field(root, "scenario").get<std::string>();
  report.filter = field(root, "filter").get<std::string>();
  report.particles = field(root, "particles").get<int>();
  report.runs = field(root, "runs").get<int>();
  report.seed = field(root, "seed").get<std::uint64_t>();
  report.targets = field(root, "targets").get<int>();
  report.horizon = field(root, "horizon").get<int>();
  report.step = field(root, "step").get<double>();
  report.divergence_threshold =
      field(root, "divergence_threshold").get<double>();
  report.mse_position = matrix_from_json(field(root, "mse_position"),
                                         "mse_position");
  report.rmse_time_avg =
      vector_from_json(field(root, "rmse_time_avg"), "rmse_time_avg");
  report.rmse_final = vector_from_json(field(root, "rmse_final"), "rmse_final");
  report.final_position_errors = matrix_from_json(
      field(root, "final_position_errors"), "final_position_errors");
  report.diverged_runs = field(root, "diverged_runs").get<std::vector<int>>();
  report.swapped_runs = field(root, "swapped_runs").get<std::vector<int>>();
  report.degenerate_weight_events =
      field(root, "degenerate_weight_events").get<int>();
  report.degenerate_association_events =
      field(root, "degenerate_association_events").get<int>();
  const json& modes = field(root, "mode_probability_means");
  if (!modes.is_array())
    throw InvalidArgumentError(
        "metrics JSON: mode_probability_means must be an array");
  for (const json& m : modes)
    report.mode_probability_means.push_back(
        matrix_from_json(m, "mode_probability_means"));
  report.wall_seconds = field(root, "wall_seconds").get<double>();
  return report;
}

bool MetricsReport::operator==(const MetricsReport& other) const {
  auto same_matrix = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  auto same_vector = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == b.size() && a == b;
  };
  if (mode_probability_means.size() != other.mode_probability_means.size())
    return false;
  for (std::size_t k = 0; k < mode_probability_means.size(); ++k) {
    if (!same_matrix(mode_probability_means[k],
                     other.mode_probability_means[k]))
      return false;
  }
  return scenario == other.scenario && filter == other.filter &&
         particles == other.particles && runs == other.runs &&
         seed == other.seed && targets == other.targets &&
         horizon == other.horizon && step == other.step &&
         divergence_threshold == other.divergence_threshold &&
         same_matrix(mse_position, other.mse_position) &&
         same_vector(rmse_time_avg, other.rmse_time_avg) &&
         same_vector(rmse_final, other.rmse_final) &&
         same_matrix(final_position_errors, other.final_position_errors) &&
         diverged_runs == other.diverged_runs &&
         swapped_runs == other.swapped_runs &&
         degenerate_weight_events == other.degenerate_weight_events &&
         degenerate_association_events ==
             other.degenerate_association_events &&
         wall_seconds == other.wall_seconds;
}

MetricsReport aggregate_metrics(const std::vector<RunRecord>& records,
                                const std::string& scenario_name,
                                const std::string& filter_name, int particles,
                                std::uint64_t seed, double step,
                                double divergence_threshold) {
  if (records.empty())
    throw InvalidArgumentError("aggregate_metrics: no runs to aggregate");
  const int num_targets = static_cast<int>(records.front().targets.size());
  const int length = static_cast<int>(records.front().targets.front().truth.cols());

  MetricsReport report;
  report.scenario = scenario_name;
  report.filter = filter_name;
  report.particles = particles;
  report.runs = static_cast<int>(records.size());
  report.seed = seed;
  report.targets = num_targets;
  report.horizon = length - 1;
  report.step = step;
  report.divergence_threshold = divergence_threshold;
  report.mse_position.setZero(num_targets, length);
  report.final_position_errors.resize(records.size(), num_targets);

  for (int k = 0; k < num_targets; ++k) {
    std::vector<Eigen::Matrix4Xd> estimates;
    std::vector<Eigen::Matrix4Xd> truths;
    estimates.reserve(records.size());
    truths.reserve(records.size());
    for (const RunRecord& record : records) {
      if (static_cast<int>(record.targets.size()) != num_targets)
        throw InvalidArgumentError(
            "aggregate_metrics: runs disagree on the target count");
      estimates.push_back(record.targets[k].estimate);
      truths.push_back(record.targets[k].truth);
    }
    report.mse_position.row(k) =
        compute_position_mse(estimates, truths).transpose();
  }

  report.rmse_time_avg.setZero(num_targets);
  report.rmse_final.setZero(num_targets);
  for (int k = 0; k < num_targets; ++k) {
    double sum = 0.0;
    for (int t = 1; t < length; ++t)
      sum += std::sqrt(report.mse_position(k, t));
    report.rmse_time_avg[k] = sum / static_cast<double>(length - 1);
    report.rmse_final[k] = std::sqrt(report.mse_position(k, length - 1));
  }

  for (std::size_t r = 0; r < records.size(); ++r) {
    const RunRecord& record = records[r];
    for (int k = 0; k < num_targets; ++k)
      report.final_position_errors(static_cast<Eigen::Index>(r), k) =
          position_error(record.targets[k], length - 1);
    if (record.diverged) report.diverged_runs.push_back(record.run);
    if (record.swapped) report.swapped_runs.push_back(record.run);
    report.degenerate_weight_events += record.degenerate_weight_events;
    report.degenerate_association_events +=
        record.degenerate_association_events;
    report.wall_seconds += record.wall_seconds;
  }

  const Eigen::Index mode_rows = records.front().targets.front().mode_probs.rows();
  if (mode_rows > 0) {
    for (int k = 0; k < num_targets; ++k) {
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(mode_rows, length);
      for (const RunRecord& record : records)
        mean += record.targets[k].mode_probs;
      mean /= static_cast<double>(records.size());
      report.mode_probability_means.push_back(std::move(mean));
    }
  }
  return report;
}

}  // namespace tracklab
