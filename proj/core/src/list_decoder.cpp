#include "lidreg/list_decoder.hpp"

#include "lidreg/clipping.hpp"
#include "lidreg/errors.hpp"
#include "lidreg/loss.hpp"
#include "lidreg/multifilter.hpp"
#include "lidreg/weighted_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lidreg {

double theta1(double theta0, const AlgoConfig& cfg, std::size_t n) {
  const double t = 8.0 * std::sqrt(cfg.C) * theta0 / 7.0 + cfg.sigma / 7.0;
  return cfg.c2 / static_cast<double>(n) * (cfg.sigma * cfg.sigma + t * t);
}

double theta2(double mean_v, const AlgoConfig& cfg, std::size_t n) {
  const double t = mean_v + cfg.sigma;
  return cfg.c4 / static_cast<double>(n) * (cfg.sigma * cfg.sigma + 16.0 * cfg.C * cfg.C * t * t);
}

long default_max_filter_calls(std::size_t m, double alpha) {
  return 16L * static_cast<long>(std::ceil(static_cast<double>(m) / (alpha * alpha)));
}

const char* to_string(ClusterAction a) {
  switch (a) {
    case ClusterAction::accepted:
      return "accepted";
    case ClusterAction::type1_filter:
      return "type1";
    case ClusterAction::type2_filter:
      return "type2";
    case ClusterAction::rejected:
      return "rejected";
  }
  return "?";
}

RunResult run(const BatchCollection& coll, const AlgoConfig& cfg) {
  cfg.validate();
  const std::size_t m = coll.size();
  const std::size_t n = coll.batch_size();
  const double log_term = std::log(2.0 / cfg.alpha);
  const double filter_scale = cfg.c3 * log_term * log_term;
  const double keep_weight = cfg.alpha * static_cast<double>(m) / 2.0;
  const double quantile_mass = cfg.alpha * static_cast<double>(m) / 4.0;
  const long max_calls = cfg.max_filter_calls > 0 ? cfg.max_filter_calls : default_max_filter_calls(m, cfg.alpha);

  RunResult result;
  std::vector<WeightVector> worklist{WeightVector::ones(m)};
  std::uint64_t step = 0;

  while (!worklist.empty()) {
    WeightVector beta = std::move(worklist.back());
    worklist.pop_back();
    IterationRecord rec;
    rec.cluster_weight = beta.total();
    rec.support = beta.support_size();

    try {
      const ClipResult clip = find_clipping_parameter(coll, beta, cfg);
      rec.kappa = clip.kappa;
      rec.clip_iterations = clip.loop_iterations;
      rec.solver_converged = clip.converged;
      if (!clip.converged) ++result.nonconverged_solves;

      const Matrix grads = all_batch_clipped_grads(coll, clip.w, clip.kappa);
      const EigPair top = cov_top_eig(grads, beta, cfg.power_iter_tol, cfg.power_iter_max, cfg.rng_seed + step);
      const Vector v = all_batch_abs_residuals(coll, clip.w);
      const Vector v_proj = grads * top.u;

      rec.theta0 = weighted_upper_quantile(v, beta, quantile_mass);
      rec.theta1 = theta1(rec.theta0, cfg, n);
      rec.theta2 = theta2(weighted_mean(v, beta), cfg, n);
      rec.threshold1 = filter_scale * rec.theta1;
      rec.threshold2 = filter_scale * rec.theta2;
      rec.var_residual = weighted_variance(v, beta);
      rec.var_projected = weighted_variance(v_proj, beta);

      const Vector* scores = nullptr;
      double theta = 0.0;
      if (rec.var_residual > rec.threshold1) {
        rec.action = ClusterAction::type1_filter;
        scores = &v;
        theta = rec.theta1;
      } else if (rec.var_projected > rec.threshold2) {
        rec.action = ClusterAction::type2_filter;
        scores = &v_proj;
        theta = rec.theta2;
      }

      if (scores == nullptr) {
        rec.action = ClusterAction::accepted;
        result.M.push_back(Triplet{beta, clip.kappa, clip.w});
      } else {
        if (result.filter_calls >= max_calls) {
          result.complete = false;
          rec.error = "filter budget exhausted";
          result.diagnostics.push_back(std::move(rec));
          break;
        }
        ++result.filter_calls;
        FilterOutcome out = multifilter(beta, *scores, theta, cfg.alpha, cfg.c3);
        rec.split = out.branch == FilterBranch::split;
        // Push in reverse so the first output is processed next.
        for (auto it = out.new_weights.rbegin(); it != out.new_weights.rend(); ++it) {
          const double w = it->total();
          rec.child_weights.insert(rec.child_weights.begin(), w);
          if (w >= keep_weight) {
            worklist.push_back(std::move(*it));
            ++rec.children_queued;
          } else {
            ++result.pruned_children;
          }
        }
      }
    } catch (const Error& e) {
      rec.action = ClusterAction::rejected;
      rec.error = e.what();
      ++result.rejected_clusters;
    }
    result.diagnostics.push_back(std::move(rec));
    ++step;
  }
  return result;
}

std::size_t select_by_holdout(const std::vector<Triplet>& M, const Batch& holdout) {
  if (M.empty()) throw ArgumentError("candidate list is empty");
  std::size_t best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < M.size(); ++k) {
    if (M[k].w.size() != static_cast<Eigen::Index>(holdout.dim())) throw ArgumentError("candidate dimension mismatch");
    const double err = (holdout.covariates() * M[k].w - holdout.responses()).squaredNorm() /
                       static_cast<double>(holdout.size());
    if (err < best_err) {
      best_err = err;
      best = k;
    }
  }
  return best;
}

std::vector<Triplet> merge_nearby(const std::vector<Triplet>& M, double radius) {
  if (!(radius >= 0.0)) throw ArgumentError("merge radius must be >= 0");
  std::vector<std::size_t> order(M.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return M[i].beta.total() > M[j].beta.total(); });
  std::vector<bool> keep(M.size(), false);
  for (std::size_t i : order) {
    bool near = false;
    for (std::size_t j = 0; j < M.size() && !near; ++j) near = keep[j] && (M[i].w - M[j].w).norm() <= radius;
    keep[i] = !near;
  }
  std::vector<Triplet> out;
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (keep[i]) out.push_back(M[i]);
  }
  return out;
}

double resolution_radius(const AlgoConfig& cfg, std::size_t n) {
  return cfg.sigma * std::log(2.0 / cfg.alpha) / std::sqrt(static_cast<double>(n) * cfg.alpha);
}

}  // namespace lidreg
