// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors

#include "tracklab/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tracklab {

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) {
    throw InvalidArgumentError("cholesky_lower: matrix must be square");
  }
  if (cov.isZero(0.0)) {
    return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  const double jitter = 1e-12 * cov.trace();
  Eigen::MatrixXd bumped = cov;
  bumped.diagonal().array() += jitter;
  llt.compute(bumped);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  throw NumericError(
      "cholesky_lower: matrix is not positive definite (jitter retry "
      "failed)");
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& chol_lower, Rng& rng) {
  if (chol_lower.rows() != mean.size() || chol_lower.cols() != mean.size()) {
    throw InvalidArgumentError("sample_mvn: dimension mismatch");
  }
  Eigen::VectorXd n(mean.size());
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    n[i] = rng.normal();
  }
  return mean + chol_lower * n;
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const Eigen::MatrixXd& cov) {
  if (x.size() != mean.size() || cov.rows() != x.size() ||
      cov.cols() != x.size()) {
    throw InvalidArgumentError("mvn_logpdf: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    Eigen::MatrixXd bumped = cov;
    bumped.diagonal().array() += 1e-12 * cov.trace();
    llt.compute(bumped);
    if (llt.info() != Eigen::Success) {
      throw NumericError("mvn_logpdf: covariance is not positive definite");
    }
  }
  const Eigen::VectorXd diff = x - mean;
  const Eigen::VectorXd alpha = llt.matrixL().solve(diff);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  const double d = static_cast<double>(x.size());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det +
                 alpha.squaredNorm());
}

double normal_logpdf(double x, double mean, double sigma) {
  if (!(sigma > 0.0)) {
    throw InvalidArgumentError("normal_logpdf: sigma must be positive");
  }
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

double log_sum_exp(const Eigen::VectorXd& v) {
  if (v.size() == 0) {
    throw InvalidArgumentError("log_sum_exp: empty input");
  }
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) {
    // All -inf (or a NaN/+inf pathologies propagate naturally).
    return m;
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += std::exp(v[i] - m);
  }
  return m + std::log(acc);
}

}  // namespace tracklab
