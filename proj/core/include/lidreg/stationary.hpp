#pragma once

#include "lidreg/types.hpp"

namespace lidreg {

struct SolverReport {
  Vector w;
  double grad_norm = 0.0;  ///< ||E_beta[grad f^b(w, kappa)]|| at w
  double objective = 0.0;  ///< E_beta[f^b(w, kappa)] at w
  int iterations = 0;
  bool converged = false;
};

struct SolverOptions {
  int max_iter = 10000;
  double backtrack = 0.5;            ///< step shrink factor
  double sufficient_decrease = 1e-4;  ///< Armijo constant
};

/// E_beta[f^b(w, kappa)].
double weighted_clipped_loss(const BatchCollection& coll, const WeightVector& beta, const Vector& w, double kappa);
/// E_beta[grad f^b(w, kappa)].
Vector weighted_clipped_grad(const BatchCollection& coll, const WeightVector& beta, const Vector& w, double kappa);

/// Largest eigenvalue of E_beta[(1/n) sum_i x_i x_i'], by power iteration.
/// Bounds the Lipschitz constant of the weighted clipped-loss gradient.
double weighted_second_moment_norm(const BatchCollection& coll, const WeightVector& beta);

/// Default stationarity tolerance scale * log(2/alpha) sigma / (8 sqrt(n alpha)).
double stationary_tolerance(const AlgoConfig& cfg, std::size_t n);

/// Gradient descent with Armijo backtracking on the convex objective
/// E_beta[f^b(w, kappa)], starting from `w_init` (zero when empty) and
/// stopping once the weighted mean clipped gradient has norm <= tol.
/// Returns converged = false with the last iterate if the budget runs out.
SolverReport solve_stationary(const BatchCollection& coll, const WeightVector& beta, double kappa, double tol,
                              const Vector& w_init = Vector(), const SolverOptions& options = {});

}  // namespace lidreg
