#include "lidreg/clipping.hpp"

#include "lidreg/errors.hpp"
#include "lidreg/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lidreg {
namespace {

// Stand-in noise scale when sigma == 0, relative to the response magnitude,
// so that kappa stays strictly positive and the tolerance is reachable.
double effective_sigma(const AlgoConfig& cfg, double max_abs_y) {
  return cfg.sigma > 0.0 ? cfg.sigma : 1e-12 * std::max(1.0, max_abs_y);
}

}  // namespace

ClipConstants compute_a_constants(const AlgoConfig& cfg, std::size_t n) {
  if (n < 1) throw ArgumentError("batch size must be >= 1");
  ClipConstants a;
  a.a1 = 256.0 * cfg.C * std::sqrt(2.0) / 3.0;
  const double moment_term = 2.0 * std::pow(8.0 * cfg.C_p * cfg.C, 1.0 / cfg.p);
  const double tail_term =
      2.0 * std::pow(8.0 * cfg.C_p * std::sqrt(static_cast<double>(n) * cfg.alpha) / std::log(2.0 / cfg.alpha),
                     1.0 / (cfg.p - 1.0));
  a.a2 = a.a1 / 4.0 + 2.0 * std::max(moment_term, tail_term);
  return a;
}

int clipping_iteration_bound(const ClipConstants& a, double max_abs_y, double sigma) {
  if (!(sigma > 0.0) || !(max_abs_y > 0.0)) return 2;
  const double ratio = a.a1 * max_abs_y / (a.a2 * sigma);
  return std::max(0, static_cast<int>(std::ceil(std::log2(ratio)))) + 2;
}

ClipResult find_clipping_parameter(const BatchCollection& coll, const WeightVector& beta, const AlgoConfig& cfg) {
  return find_clipping_parameter(coll, beta, cfg, stationary_tolerance(cfg, coll.batch_size()));
}

ClipResult find_clipping_parameter(const BatchCollection& coll, const WeightVector& beta, const AlgoConfig& cfg,
                                   double tol) {
  const ClipConstants a = compute_a_constants(cfg, coll.batch_size());
  const double max_y = coll.max_abs_response();
  const double sigma = effective_sigma(cfg, max_y);
  if (!(tol > 0.0)) {
    AlgoConfig floored = cfg;
    floored.sigma = sigma;
    tol = stationary_tolerance(floored, coll.batch_size());
  }
  const double kappa_floor = a.a2 * sigma;
  const int guard = clipping_iteration_bound(a, max_y, sigma) + 5;

  ClipResult out;
  out.kappa = kNoClipping;
  out.w = Vector::Zero(static_cast<Eigen::Index>(coll.dim()));
  while (true) {
    ++out.loop_iterations;
    if (out.loop_iterations > guard) {
      throw InternalError("clipping loop exceeded its iteration bound (" + std::to_string(guard) + ")");
    }
    out.report = solve_stationary(coll, beta, out.kappa, tol, out.w);
    out.w = out.report.w;
    out.converged = out.converged && out.report.converged;
    const double kappa_new = std::max(a.a1 * std::sqrt(std::max(out.report.objective, 0.0)), kappa_floor);
    if (kappa_new >= out.kappa / 2.0) break;
    out.kappa = kappa_new;
  }
  return out;
}

}  // namespace lidreg
