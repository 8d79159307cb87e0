#include "lidreg/multifilter.hpp"

#include "lidreg/errors.hpp"
#include "lidreg/weighted_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lidreg {
namespace {

void check_inputs(const WeightVector& beta, const Vector& z) {
  if (static_cast<Eigen::Index>(beta.size()) != z.size()) throw ArgumentError("score count differs from weight count");
  if (!z.allFinite()) throw ArgumentError("scores must be finite");
  if (!(beta.total() > 0.0)) throw DegenerateWeightsError("total weight is zero");
}

struct Level {
  double value;
  double weight;
};

// Distinct supported score values in ascending order with their total weight.
std::vector<Level> supported_levels(const WeightVector& beta, const Vector& z) {
  std::vector<Eigen::Index> order;
  for (Eigen::Index b = 0; b < z.size(); ++b) {
    if (beta[static_cast<std::size_t>(b)] > 0.0) order.push_back(b);
  }
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return z(i) < z(j); });
  std::vector<Level> levels;
  for (auto b : order) {
    const double wb = beta[static_cast<std::size_t>(b)];
    if (!levels.empty() && levels.back().value == z(b)) {
      levels.back().weight += wb;
    } else {
      levels.push_back({z(b), wb});
    }
  }
  return levels;
}

double log_term(double alpha) { return std::log(2.0 / alpha); }

}  // namespace

TrimBounds trim_bounds(const WeightVector& beta, const Vector& z, double alpha) {
  check_inputs(beta, z);
  const auto levels = supported_levels(beta, z);
  const double mass = alpha * beta.total() / 8.0;
  TrimBounds t{levels.back().value, levels.front().value};
  double cum = 0.0;
  for (const auto& l : levels) {
    cum += l.weight;
    if (cum > mass) {
      t.a = l.value;
      break;
    }
  }
  cum = 0.0;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    cum += it->weight;
    if (cum > mass) {
      t.b = it->value;
      break;
    }
  }
  return t;
}

WeightVector downweight(const WeightVector& beta, const Vector& z, double a, double b) {
  check_inputs(beta, z);
  if (!(a <= b)) throw ArgumentError("trim interval must satisfy a <= b");
  auto dist2 = [&](double v) {
    const double gap = v < a ? a - v : (v > b ? v - b : 0.0);
    return gap * gap;
  };
  double fmax = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (beta[static_cast<std::size_t>(i)] > 0.0) fmax = std::max(fmax, dist2(z(i)));
  }
  if (!(fmax > 0.0)) throw NoProgressError("all supported scores lie inside the trim interval");
  std::vector<double> out(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double f = dist2(z(static_cast<Eigen::Index>(i)));
    out[i] = (beta[i] > 0.0 && f < fmax) ? (1.0 - f / fmax) * beta[i] : 0.0;
  }
  return WeightVector(std::move(out));
}

bool split_is_valid(const WeightVector& beta, const Vector& z, double alpha, const SplitParams& split) {
  check_inputs(beta, z);
  if (!(split.R > 0.0) || !std::isfinite(split.z0)) return false;
  const double lo = split.z0 - split.R;
  const double hi = split.z0 + split.R;
  double total = 0.0, upper = 0.0, lower = 0.0;
  for (Eigen::Index b = 0; b < z.size(); ++b) {
    const double wb = beta[static_cast<std::size_t>(b)];
    total += wb;
    if (z(b) >= lo) upper += wb;
    if (z(b) < hi) lower += wb;
  }
  const bool contracts = upper * upper + lower * lower <= total * total;
  const double slack = std::min(1.0 - upper / total, 1.0 - lower / total);
  return contracts && slack >= 48.0 * log_term(alpha) / (split.R * split.R);
}

SplitParams find_split(const WeightVector& beta, const Vector& z, double alpha) {
  check_inputs(beta, z);
  const auto levels = supported_levels(beta, z);
  const std::size_t k_levels = levels.size();
  const double total = beta.total();
  const double need = 48.0 * log_term(alpha);

  // below[k] = weight of levels 0..k-1
  std::vector<double> below(k_levels + 1, 0.0);
  for (std::size_t k = 0; k < k_levels; ++k) below[k + 1] = below[k] + levels[k].weight;

  struct Best {
    double score = std::numeric_limits<double>::infinity();
    double R = 0.0;
    SplitParams params;
    bool found = false;
  } best;

  // B' = levels >= k (lo in (v[k-1], v[k]]); B'' = levels < j (hi in (v[j-1], v[j]]).
  for (std::size_t k = 1; k < k_levels; ++k) {
    const double upper = total - below[k];
    const double gap = levels[k].value - levels[k - 1].value;
    const double lo = levels[k - 1].value + 1e-9 * gap;
    for (std::size_t j = k; j < k_levels; ++j) {
      const double lower = below[j];
      const double score = upper * upper + lower * lower;
      if (score > total * total) continue;
      const double hi = levels[j].value;
      const SplitParams cand{0.5 * (lo + hi), 0.5 * (hi - lo)};
      if (!(cand.R > 0.0)) continue;
      const double slack = std::min(1.0 - upper / total, 1.0 - lower / total);
      if (slack * cand.R * cand.R < need) continue;
      if (score < best.score || (score == best.score && cand.R > best.R)) {
        if (!split_is_valid(beta, z, alpha, cand)) continue;  // rounding moved a boundary
        best = Best{score, cand.R, cand, true};
      }
    }
  }
  if (!best.found) throw SearchExhaustedError("no split center/radius satisfies the contraction conditions");
  return best.params;
}

FilterOutcome multifilter(const WeightVector& beta, const Vector& z, double theta, double alpha, double c3) {
  check_inputs(beta, z);
  if (!(theta >= 0.0)) throw ArgumentError("variance threshold must be >= 0");
  const double threshold = c3 * log_term(alpha) * log_term(alpha) * theta;
  const double variance = weighted_variance(z, beta);
  if (!(variance > threshold)) {
    throw ContractError("multifilter requires Var_beta(z) > c3 log^2(2/alpha) theta");
  }

  const TrimBounds t = trim_bounds(beta, z, alpha);
  const WeightVector trimmed = restrict_weights(beta, [&](std::size_t b) {
    const double v = z(static_cast<Eigen::Index>(b));
    return v >= t.a && v <= t.b;
  });
  if (weighted_variance(z, trimmed) <= threshold / 2.0) {
    FilterOutcome out({downweight(beta, z, t.a, t.b)});
    out.branch = FilterBranch::downweight;
    return out;
  }

  const double scale = theta > 0.0 ? std::sqrt(theta) : std::sqrt(variance);
  const Vector normalized = z / scale;
  SplitParams split;
  try {
    split = find_split(beta, normalized, alpha);
  } catch (const SearchExhaustedError&) {
    // No qualifying split: the outer mass still carries the excess variance.
    FilterOutcome out({downweight(beta, z, t.a, t.b)});
    out.branch = FilterBranch::downweight;
    return out;
  }
  const double lo = split.z0 - split.R;
  const double hi = split.z0 + split.R;
  FilterOutcome out({restrict_weights(beta, [&](std::size_t b) { return normalized(static_cast<Eigen::Index>(b)) >= lo; }),
                     restrict_weights(beta, [&](std::size_t b) { return normalized(static_cast<Eigen::Index>(b)) < hi; })});
  out.branch = FilterBranch::split;
  return out;
}

}  // namespace lidreg
