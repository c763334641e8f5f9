// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Multivariate Gaussian utilities: Cholesky factorization with a single
// jitter retry, sampling, log-density evaluation, and log-sum-exp.

#pragma once

#include <Eigen/Dense>

#include "tracklab/rng.hpp"
#include "tracklab/types.hpp"

namespace tracklab {

/// Lower-triangular Cholesky factor of a symmetric positive semi-definite
/// matrix. An exactly zero matrix factors to zero. If the factorization
/// fails, one retry is made with 1e-12 * trace added to the diagonal; if that
/// also fails a NumericError is raised.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& cov);

/// Draws x = mean + L * n with n ~ N(0, I), where L is a lower Cholesky
/// factor of the desired covariance. Components of n are drawn in index
/// order, which fixes the rng stream layout.
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& chol_lower, Rng& rng);

/// Log density of N(mean, cov) at x. Throws NumericError when cov is not
/// positive definite (after the jitter retry).
double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const Eigen::MatrixXd& cov);

/// Log density of the scalar normal N(mean, sigma^2) at x (sigma > 0).
double normal_logpdf(double x, double mean, double sigma);

/// Numerically stable log(sum(exp(v))). Returns -inf for an all-(-inf)
/// input.
double log_sum_exp(const Eigen::VectorXd& v);

}  // namespace tracklab
