#include "lidreg/stationary.hpp"

#include "lidreg/errors.hpp"
#include "lidreg/loss.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lidreg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Support {
  std::vector<std::size_t> index;
  std::vector<double> weight;  // beta^b / beta^B
};

Support normalized_support(const BatchCollection& coll, const WeightVector& beta) {
  if (beta.size() != coll.size()) throw ArgumentError("weight vector length differs from batch count");
  const double total = beta.total();
  if (!(total > 0.0)) throw DegenerateWeightsError("total weight is zero");
  Support s;
  for (std::size_t b = 0; b < coll.size(); ++b) {
    if (beta[b] > 0.0) {
      s.index.push_back(b);
      s.weight.push_back(beta[b] / total);
    }
  }
  return s;
}

double loss_and_grad(const BatchCollection& coll, const Support& s, const Vector& w, double kappa, Vector& grad) {
  grad = Vector::Zero(w.size());
  Vector gb;
  double f = 0.0;
  for (std::size_t k = 0; k < s.index.size(); ++k) {
    f += s.weight[k] * batch_clipped_loss_grad(coll[s.index[k]], w, kappa, gb);
    grad += s.weight[k] * gb;
  }
  return f;
}

double loss_only(const BatchCollection& coll, const Support& s, const Vector& w, double kappa) {
  double f = 0.0;
  for (std::size_t k = 0; k < s.index.size(); ++k) f += s.weight[k] * batch_clipped_loss(coll[s.index[k]], w, kappa);
  return f;
}

}  // namespace

double weighted_clipped_loss(const BatchCollection& coll, const WeightVector& beta, const Vector& w, double kappa) {
  return loss_only(coll, normalized_support(coll, beta), w, kappa);
}

Vector weighted_clipped_grad(const BatchCollection& coll, const WeightVector& beta, const Vector& w, double kappa) {
  Vector g;
  loss_and_grad(coll, normalized_support(coll, beta), w, kappa, g);
  return g;
}

double weighted_second_moment_norm(const BatchCollection& coll, const WeightVector& beta) {
  const Support s = normalized_support(coll, beta);
  const auto d = static_cast<Eigen::Index>(coll.dim());
  const double inv_n = 1.0 / static_cast<double>(coll.batch_size());
  auto apply = [&](const Vector& v) {
    Vector out = Vector::Zero(d);
    for (std::size_t k = 0; k < s.index.size(); ++k) {
      const Matrix& x = coll[s.index[k]].covariates();
      out.noalias() += (s.weight[k] * inv_n) * (x.transpose() * (x * v));
    }
    return out;
  };
  Vector v = Vector::Ones(d).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector next = apply(v);
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    const bool done = std::abs(norm - lambda) <= 1e-6 * norm;
    lambda = norm;
    v = next / norm;
    if (done) break;
  }
  return lambda;
}

double stationary_tolerance(const AlgoConfig& cfg, std::size_t n) {
  return cfg.stationary_tol_scale * std::log(2.0 / cfg.alpha) * cfg.sigma /
         (8.0 * std::sqrt(static_cast<double>(n) * cfg.alpha));
}

SolverReport solve_stationary(const BatchCollection& coll, const WeightVector& beta, double kappa, double tol,
                              const Vector& w_init, const SolverOptions& options) {
  if (!(kappa > 0.0)) throw ArgumentError("clipping parameter must be positive");
  if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
  const Support s = normalized_support(coll, beta);
  const auto d = static_cast<Eigen::Index>(coll.dim());
  if (w_init.size() != 0 && w_init.size() != d) throw ArgumentError("initial point dimension mismatch");

  SolverReport rep;
  rep.w = w_init.size() == 0 ? Vector::Zero(d) : w_init;
  Vector grad;
  double f = loss_and_grad(coll, s, rep.w, kappa, grad);

  const double lipschitz = weighted_second_moment_norm(coll, beta);
  const double step0 = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  Vector trial(d);
  Vector trial_grad;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    const double gn2 = grad.squaredNorm();
    if (std::sqrt(gn2) <= tol) {
      rep.converged = true;
      break;
    }
    double step = step0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      trial = rep.w - step * grad;
      const double ft = loss_and_grad(coll, s, trial, kappa, trial_grad);
      // Slack of a few ulps: near the optimum the decrease drops below the
      // resolution of f while the gradient is still above tol.
      if (ft <= f - options.sufficient_decrease * step * gn2 + 8.0 * kEps * std::abs(f)) {
        accepted = true;
        f = ft;
        break;
      }
      step *= options.backtrack;
    }
    if (!accepted) break;  // no decrease representable in floating point
    rep.w.swap(trial);
    grad.swap(trial_grad);
  }
  rep.iterations = it;
  rep.objective = f;
  rep.grad_norm = grad.norm();
  if (!rep.converged && rep.grad_norm <= tol) rep.converged = true;
  return rep;
}

}  // namespace lidreg
