#pragma once

#include "lidreg/types.hpp"

namespace lidreg {

/// Center and half-width of a two-way split: B' = {z >= z0 - R},
/// B'' = {z < z0 + R}.
struct SplitParams {
  double z0 = 0.0;
  double R = 0.0;
};

struct TrimBounds {
  double a = 0.0;
  double b = 0.0;
};

/// Lower/upper trim points leaving at most alpha beta^B / 8 of the weight
/// strictly below a and strictly above b. Both are data values: a is the
/// first value (ascending) at which the cumulative weight exceeds the trim
/// mass, b the mirror image from the top.
TrimBounds trim_bounds(const WeightVector& beta, const Vector& z, double alpha);

/// beta_new^b = (1 - f^b / max_{beta^b > 0} f^b) beta^b with f^b the squared
/// distance from z^b to [a, b]. Throws NoProgressError when every supported
/// score already lies inside the interval.
WeightVector downweight(const WeightVector& beta, const Vector& z, double a, double b);

/// Checks (beta^{B'})^2 + (beta^{B''})^2 <= (beta^B)^2 and
/// min(1 - beta^{B'}/beta^B, 1 - beta^{B''}/beta^B) >= 48 log(2/alpha) / R^2.
bool split_is_valid(const WeightVector& beta, const Vector& z, double alpha, const SplitParams& split);

/// Finds a split satisfying split_is_valid().
///
/// Enumerates every distinct pair (B', B'') of an upper set and a lower set
/// of the sorted score levels, taking for each pair the largest admissible
/// R. Among the valid pairs the one with the smallest
/// (beta^{B'})^2 + (beta^{B''})^2 wins; ties go to the larger R, then to the
/// lower cut. Throws SearchExhaustedError when no pair qualifies.
SplitParams find_split(const WeightVector& beta, const Vector& z, double alpha);

/// beta^b where keep(b), 0 elsewhere.
template <class Pred>
WeightVector restrict_weights(const WeightVector& beta, Pred keep) {
  std::vector<double> out(beta.size(), 0.0);
  for (std::size_t b = 0; b < beta.size(); ++b) out[b] = keep(b) ? beta[b] : 0.0;
  return WeightVector(std::move(out));
}

/// One multifilter step on scores z with variance threshold theta.
///
/// Requires Var_beta(z) > c3 log^2(2/alpha) theta (ContractError otherwise).
/// If the variance of z on the trimmed set {a <= z <= b} (renormalized) is at
/// most half the threshold, returns the single downweight() result; otherwise
/// returns the two restrictions of beta to B' and B'' from find_split(). The
/// split is searched on z / sqrt(theta), i.e. R is measured in units of the
/// threshold's standard deviation. If no split qualifies, falls back to the
/// downweight() result.
FilterOutcome multifilter(const WeightVector& beta, const Vector& z, double theta, double alpha, double c3);

}  // namespace lidreg
