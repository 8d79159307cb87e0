#pragma once

#include "lidreg/types.hpp"

#include <limits>

namespace lidreg {

/// Clipping parameter that disables clipping (plain squared loss).
inline constexpr double kNoClipping = std::numeric_limits<double>::infinity();

/// Huber value of a residual: r^2/2 for |r| <= kappa, kappa|r| - kappa^2/2 beyond.
inline double huber(double r, double kappa) {
  const double a = r < 0 ? -r : r;
  return a <= kappa ? 0.5 * r * r : kappa * a - 0.5 * kappa * kappa;
}

/// Derivative of huber() in r: r * kappa / max(|r|, kappa). Equal to r when
/// kappa is infinite.
inline double huber_slope(double r, double kappa) {
  const double a = r < 0 ? -r : r;
  return a <= kappa ? r : kappa * (r / a);
}

// Every function below throws ArgumentError on dimension mismatch or when
// kappa is not a positive number (+inf is accepted).

double clipped_loss_sample(const Sample& s, const Vector& w, double kappa);
Vector clipped_grad_sample(const Sample& s, const Vector& w, double kappa);

/// Mean clipped loss over the samples of a batch.
double batch_clipped_loss(const Batch& b, const Vector& w, double kappa);
/// Mean clipped gradient over the samples of a batch.
Vector batch_clipped_grad(const Batch& b, const Vector& w, double kappa);

/// Mean absolute residual (1/n) sum |w.x_i - y_i|.
double batch_abs_residual(const Batch& b, const Vector& w);

/// Mean clipped loss and gradient in one pass; `grad` is overwritten.
double batch_clipped_loss_grad(const Batch& b, const Vector& w, double kappa, Vector& grad);

/// Per-batch clipped gradients stacked as the rows of an m x d matrix.
Matrix all_batch_clipped_grads(const BatchCollection& coll, const Vector& w, double kappa);

/// Per-batch mean absolute residuals.
Vector all_batch_abs_residuals(const BatchCollection& coll, const Vector& w);

}  // namespace lidreg
