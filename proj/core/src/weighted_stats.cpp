#include "lidreg/weighted_stats.hpp"

#include "lidreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace lidreg {
namespace {

double checked_total(const WeightVector& beta, Eigen::Index m) {
  if (static_cast<Eigen::Index>(beta.size()) != m) throw ArgumentError("weight vector length differs from value count");
  const double total = beta.total();
  if (!(total > 0.0)) throw DegenerateWeightsError("total weight is zero");
  return total;
}

}  // namespace

Vector weighted_mean(const Matrix& values, const WeightVector& beta) {
  const double total = checked_total(beta, values.rows());
  Vector mu = Vector::Zero(values.cols());
  for (Eigen::Index b = 0; b < values.rows(); ++b) {
    const double wb = beta[static_cast<std::size_t>(b)];
    if (wb > 0.0) mu += (wb / total) * values.row(b).transpose();
  }
  return mu;
}

double weighted_mean(const Vector& values, const WeightVector& beta) {
  const double total = checked_total(beta, values.size());
  double mu = 0.0;
  for (Eigen::Index b = 0; b < values.size(); ++b) {
    const double wb = beta[static_cast<std::size_t>(b)];
    if (wb > 0.0) mu += (wb / total) * values(b);
  }
  return mu;
}

double weighted_variance(const Vector& values, const WeightVector& beta) {
  const double total = checked_total(beta, values.size());
  const double mu = weighted_mean(values, beta);
  double var = 0.0;
  for (Eigen::Index b = 0; b < values.size(); ++b) {
    const double wb = beta[static_cast<std::size_t>(b)];
    if (wb > 0.0) {
      const double dv = values(b) - mu;
      var += (wb / total) * dv * dv;
    }
  }
  return var;
}

EigPair cov_top_eig(const Matrix& values, const WeightVector& beta, double tol, int max_iter, std::uint64_t seed) {
  const double total = checked_total(beta, values.rows());
  const Eigen::Index d = values.cols();
  if (d < 1) throw ArgumentError("dimension must be >= 1");
  const Vector mu = weighted_mean(values, beta);

  // Rows sqrt(beta^b / beta^B) (z^b - mu) over the support: Cov = Y'Y.
  std::vector<Eigen::Index> support;
  for (Eigen::Index b = 0; b < values.rows(); ++b) {
    if (beta[static_cast<std::size_t>(b)] > 0.0) support.push_back(b);
  }
  Matrix y(static_cast<Eigen::Index>(support.size()), d);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const auto b = support[k];
    y.row(static_cast<Eigen::Index>(k)) =
        std::sqrt(beta[static_cast<std::size_t>(b)] / total) * (values.row(b) - mu.transpose());
  }
  const double trace = y.squaredNorm();

  auto apply = [&y](const Vector& v) -> Vector { return y.transpose() * (y * v); };

  auto run = [&](std::uint64_t s) {
    std::mt19937_64 rng(s);
    std::normal_distribution<double> normal;
    EigPair out;
    out.u.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) out.u(j) = normal(rng);
    out.u.normalize();
    out.lambda = out.u.dot(apply(out.u));
    for (int it = 1; it <= max_iter; ++it) {
      Vector next = apply(out.u);
      const double norm = next.norm();
      out.iterations = it;
      if (norm == 0.0) {
        out.lambda = 0.0;
        out.converged = true;
        break;
      }
      next /= norm;
      const double lambda = next.dot(apply(next));
      const double change = std::abs(lambda - out.lambda);
      out.u = std::move(next);
      out.lambda = lambda;
      if (change <= tol * std::max(lambda, std::numeric_limits<double>::min())) {
        out.converged = true;
        break;
      }
    }
    out.lambda = std::max(out.lambda, 0.0);
    return out;
  };

  EigPair result = run(seed);
  if (trace > 0.0 && result.lambda <= 1e-12 * trace) {
    // Start vector fell (numerically) orthogonal to the range; retry once.
    result = run(seed ^ 0x9e3779b97f4a7c15ULL);
  }
  return result;
}

double weighted_upper_quantile(const Vector& values, const WeightVector& beta, double mass) {
  const auto m = values.size();
  if (m == 0) throw ArgumentError("no values");
  if (static_cast<Eigen::Index>(beta.size()) != m) throw ArgumentError("weight vector length differs from value count");
  if (!(mass >= 0.0)) throw ArgumentError("mass must be >= 0");
  if (!values.allFinite()) throw ArgumentError("values must be finite");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return values(i) > values(j); });

  double cum = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double level = values(order[k]);
    while (k < order.size() && values(order[k]) == level) cum += beta[static_cast<std::size_t>(order[k++])];
    if (cum > mass) return level;
  }

  double floor = std::numeric_limits<double>::infinity();
  for (Eigen::Index b = 0; b < m; ++b) {
    if (beta[static_cast<std::size_t>(b)] > 0.0) floor = std::min(floor, values(b));
  }
  return std::isfinite(floor) ? floor : values.minCoeff();
}

}  // namespace lidreg
