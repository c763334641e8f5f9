// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/association.hpp"

#include <cmath>
#include <limits>

#include "tracklab/gaussian.hpp"

namespace tracklab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Log Poisson pmf at count with the given mean; mean == 0 concentrates all
/// mass on count == 0.
double log_poisson(int count, double mean) {
  if (count < 0) return kNegInf;
  if (mean == 0.0) return count == 0 ? 0.0 : kNegInf;
  return count * std::log(mean) - mean - std::lgamma(count + 1.0);
}

}  // namespace

MeasToTarget to_measurement_oriented(const TargetToMeas& hypothesis,
                                     int num_meas) {
  MeasToTarget out(static_cast<std::size_t>(num_meas), 0);
  for (std::size_t k = 0; k < hypothesis.size(); ++k) {
    const int j = hypothesis[k];
    if (j == 0) continue;
    if (j < 1 || j > num_meas) {
      throw InvalidArgumentError(
          "to_measurement_oriented: measurement index out of range");
    }
    if (out[static_cast<std::size_t>(j - 1)] != 0) {
      throw InvalidArgumentError(
          "to_measurement_oriented: measurement assigned to two targets");
    }
    out[static_cast<std::size_t>(j - 1)] = static_cast<int>(k) + 1;
  }
  return out;
}

TargetToMeas to_target_oriented(const MeasToTarget& hypothesis,
                                int num_targets) {
  TargetToMeas out(static_cast<std::size_t>(num_targets), 0);
  for (std::size_t j = 0; j < hypothesis.size(); ++j) {
    const int k = hypothesis[j];
    if (k == 0) continue;
    if (k < 1 || k > num_targets) {
      throw InvalidArgumentError(
          "to_target_oriented: target index out of range");
    }
    if (out[static_cast<std::size_t>(k - 1)] != 0) {
      throw InvalidArgumentError(
          "to_target_oriented: target assigned two measurements");
    }
    out[static_cast<std::size_t>(k - 1)] = static_cast<int>(j) + 1;
  }
  return out;
}

std::uint64_t hypothesis_count(int num_targets, int num_meas) {
  if (num_targets < 0 || num_meas < 0) {
    throw InvalidArgumentError("hypothesis_count: counts must be >= 0");
  }
  const int limit = std::min(num_targets, num_meas);
  std::uint64_t total = 0;
  for (int d = 0; d <= limit; ++d) {
    // C(K, d): which targets are detected.
    std::uint64_t choose = 1;
    for (int i = 0; i < d; ++i) {
      choose = choose * static_cast<std::uint64_t>(num_targets - i) /
               static_cast<std::uint64_t>(i + 1);
    }
    // P(M, d): ordered assignment of measurements to the detected targets.
    std::uint64_t perm = 1;
    for (int i = 0; i < d; ++i) {
      perm *= static_cast<std::uint64_t>(num_meas - i);
    }
    total += choose * perm;
  }
  return total;
}

namespace {

void enumerate_recursive(const std::vector<std::vector<int>>& candidates,
                         std::vector<bool>& used, TargetToMeas& current,
                         std::size_t k, std::vector<TargetToMeas>& out) {
  if (k == candidates.size()) {
    out.push_back(current);
    return;
  }
  // Candidate 0 (undetected) first, then gated measurements ascending.
  current[k] = 0;
  enumerate_recursive(candidates, used, current, k + 1, out);
  for (int j : candidates[k]) {
    if (used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(j)] = true;
    current[k] = j;
    enumerate_recursive(candidates, used, current, k + 1, out);
    used[static_cast<std::size_t>(j)] = false;
  }
  current[k] = 0;
}

}  // namespace

std::vector<TargetToMeas> enumerate_hypotheses(
    const std::vector<std::vector<int>>& candidates, int num_meas) {
  for (const std::vector<int>& c : candidates) {
    int prev = 0;
    for (int j : c) {
      if (j < 1 || j > num_meas) {
        throw InvalidArgumentError(
            "enumerate_hypotheses: candidate index out of range");
      }
      if (j <= prev) {
        throw InvalidArgumentError(
            "enumerate_hypotheses: candidate lists must be strictly "
            "ascending");
      }
      prev = j;
    }
  }
  std::vector<TargetToMeas> out;
  std::vector<bool> used(static_cast<std::size_t>(num_meas) + 1, false);
  TargetToMeas current(candidates.size(), 0);
  enumerate_recursive(candidates, used, current, 0, out);
  return out;
}

double association_log_prior(const TargetToMeas& hypothesis,
                             const AssociationModel& model, int num_meas) {
  if (model.detect_prob < 0.0 || model.detect_prob > 1.0) {
    throw InvalidArgumentError(
        "association_log_prior: detection probability must lie in [0, 1]");
  }
  if (model.clutter_rate < 0.0) {
    throw InvalidArgumentError(
        "association_log_prior: clutter rate must be >= 0");
  }
  std::vector<bool> used(static_cast<std::size_t>(num_meas) + 1, false);
  int assigned = 0;
  double log_prior = 0.0;
  for (int j : hypothesis) {
    if (j == 0) {
      if (model.detect_prob == 1.0) return kNegInf;
      log_prior += std::log1p(-model.detect_prob);
      continue;
    }
    if (j < 1 || j > num_meas) {
      throw InvalidArgumentError(
          "association_log_prior: measurement index out of range");
    }
    if (used[static_cast<std::size_t>(j)]) return kNegInf;
    used[static_cast<std::size_t>(j)] = true;
    const int available = num_meas - assigned;
    if (model.detect_prob == 0.0) return kNegInf;
    log_prior += std::log(model.detect_prob) - std::log(available);
    ++assigned;
  }
  const int clutter = num_meas - assigned;
  return log_prior + log_poisson(clutter, model.clutter_rate);
}

Eigen::VectorXd joint_association_posterior(
    const std::vector<TargetToMeas>& hypotheses, const AssociationModel& model,
    int num_meas, const Eigen::MatrixXd& log_pred_lik) {
  if (hypotheses.empty()) {
    throw InvalidArgumentError(
        "joint_association_posterior: empty hypothesis list");
  }
  if (!(model.volume > 0.0)) {
    throw InvalidArgumentError(
        "joint_association_posterior: observation volume must be positive");
  }
  const double log_volume = std::log(model.volume);
  Eigen::VectorXd log_post(static_cast<Eigen::Index>(hypotheses.size()));
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    const TargetToMeas& hyp = hypotheses[h];
    double lp = association_log_prior(hyp, model, num_meas);
    int assigned = 0;
    for (std::size_t k = 0; k < hyp.size(); ++k) {
      const int j = hyp[k];
      if (j == 0) continue;
      ++assigned;
      lp += log_pred_lik(j - 1, static_cast<Eigen::Index>(k));
    }
    lp -= (num_meas - assigned) * log_volume;
    log_post[static_cast<Eigen::Index>(h)] = lp;
  }
  const double total = log_sum_exp(log_post);
  if (!std::isfinite(total)) {
    throw DegenerateAssociationError(
        "joint_association_posterior: every hypothesis has zero posterior "
        "mass");
  }
  return (log_post.array() - total).exp();
}

Eigen::MatrixXd marginal_association_probabilities(
    const std::vector<TargetToMeas>& hypotheses,
    const Eigen::VectorXd& posterior, int num_meas, int num_targets) {
  if (static_cast<Eigen::Index>(hypotheses.size()) != posterior.size()) {
    throw InvalidArgumentError(
        "marginal_association_probabilities: hypothesis/posterior size "
        "mismatch");
  }
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(num_meas + 1, num_targets);
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    const TargetToMeas& hyp = hypotheses[h];
    if (static_cast<int>(hyp.size()) != num_targets) {
      throw InvalidArgumentError(
          "marginal_association_probabilities: hypothesis size mismatch");
    }
    const double p = posterior[static_cast<Eigen::Index>(h)];
    for (int k = 0; k < num_targets; ++k) {
      beta(hyp[static_cast<std::size_t>(k)], k) += p;
    }
  }
  return beta;
}

std::vector<int> nearest_neighbor_assignment(
    const std::vector<Eigen::Vector2d>& estimates,
    const std::vector<Eigen::Vector2d>& truths) {
  if (estimates.size() != truths.size()) {
    throw InvalidArgumentError(
        "nearest_neighbor_assignment: size mismatch");
  }
  const std::size_t n = estimates.size();
  std::vector<int> out(n, -1);
  std::vector<bool> est_used(n, false);
  std::vector<bool> truth_used(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_e = 0;
    std::size_t best_t = 0;
    for (std::size_t e = 0; e < n; ++e) {
      if (est_used[e]) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (truth_used[t]) continue;
        const double d = (estimates[e] - truths[t]).squaredNorm();
        if (d < best) {
          best = d;
          best_e = e;
          best_t = t;
        }
      }
    }
    est_used[best_e] = true;
    truth_used[best_t] = true;
    out[best_e] = static_cast<int>(best_t);
  }
  return out;
}

}  // namespace tracklab
