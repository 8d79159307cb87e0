#pragma once

#include "lidreg/types.hpp"

#include <cstdint>

namespace lidreg {

// Weighted statistics over per-batch quantities. Vector-valued quantities are
// the rows of an m x d matrix, scalar quantities a length-m vector. All of
// them use the normalized weights beta^b / beta^B and throw
// DegenerateWeightsError when beta^B == 0.

/// E_beta[h^b] for per-batch vectors (rows).
Vector weighted_mean(const Matrix& values, const WeightVector& beta);
/// E_beta[h^b] for per-batch scalars.
double weighted_mean(const Vector& values, const WeightVector& beta);
/// Var_beta(h^b) = E_beta[(h^b - E_beta[h])^2].
double weighted_variance(const Vector& values, const WeightVector& beta);

/// Approximate top eigenpair of Cov_beta over per-batch vectors.
struct EigPair {
  Vector u;             ///< unit vector
  double lambda = 0.0;  ///< Rayleigh quotient u' Cov u
  bool converged = false;
  int iterations = 0;
};

/// Power iteration on the weighted covariance, applied matrix-free as
/// v -> sum_b (beta^b/beta^B) (z^b - mu) ((z^b - mu) . v). Stops once the
/// Rayleigh quotient changes by less than `tol` (relative). Never throws on
/// non-convergence; `converged` reports it instead.
EigPair cov_top_eig(const Matrix& values, const WeightVector& beta, double tol = 1e-6, int max_iter = 1000,
                    std::uint64_t seed = 0);

/// inf{v : sum_{b : values^b >= v} beta^b <= mass}, realized at a data point.
///
/// Values are scanned in descending order in blocks of equal value; the
/// result is the first block at which the cumulative weight exceeds `mass`.
/// When the full weight is <= mass the set is unbounded below and the
/// smallest supported value is returned instead.
double weighted_upper_quantile(const Vector& values, const WeightVector& beta, double mass);

}  // namespace lidreg
