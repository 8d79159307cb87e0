#pragma once

#include "lidreg/stationary.hpp"
#include "lidreg/types.hpp"

namespace lidreg {

/// Constants tying the clipping parameter to the loss scale (a1) and to the
/// noise floor (a2):
///   a1 = 256 C sqrt(2) / 3
///   a2 = a1/4 + 2 max{2 (8 C_p C)^(1/p), 2 (8 C_p sqrt(n alpha) / log(2/alpha))^(1/(p-1))}
struct ClipConstants {
  double a1 = 0.0;
  double a2 = 0.0;
};

ClipConstants compute_a_constants(const AlgoConfig& cfg, std::size_t n);

struct ClipResult {
  double kappa = 0.0;
  Vector w;
  SolverReport report;     ///< solve that produced w at the returned kappa
  int loop_iterations = 0;
  bool converged = true;   ///< false if any solve in the loop hit its budget
};

/// ceil(log2(a1 max|y| / (a2 sigma))) + 2, never below 2.
int clipping_iteration_bound(const ClipConstants& a, double max_abs_y, double sigma);

/// Joint search for the clipping parameter and a stationary point.
///
/// Starts from kappa = +inf (plain least squares). Each round solves for an
/// approximate stationary point w at the current kappa (warm-started from the
/// previous round) and proposes kappa' = max{a1 sqrt(E_beta[f^b(w, kappa)]),
/// a2 sigma}; the loop stops as soon as kappa' >= kappa / 2 and returns the
/// current (kappa, w). Throws InternalError if the loop outruns its
/// theoretical iteration bound by more than 5 rounds.
ClipResult find_clipping_parameter(const BatchCollection& coll, const WeightVector& beta, const AlgoConfig& cfg);

/// Same, with an explicit stationarity tolerance.
ClipResult find_clipping_parameter(const BatchCollection& coll, const WeightVector& beta, const AlgoConfig& cfg,
                                   double tol);

}  // namespace lidreg
