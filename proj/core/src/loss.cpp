#include "lidreg/loss.hpp"

#include "lidreg/errors.hpp"

#include <cmath>

namespace lidreg {
namespace {

void check_kappa(double kappa) {
  if (!(kappa > 0.0)) throw ArgumentError("clipping parameter must be positive");
}

void check_dim(Eigen::Index expected, const Vector& w) {
  if (w.size() != expected) throw ArgumentError("parameter vector dimension mismatch");
}

}  // namespace

double clipped_loss_sample(const Sample& s, const Vector& w, double kappa) {
  check_kappa(kappa);
  check_dim(s.x.size(), w);
  return huber(s.x.dot(w) - s.y, kappa);
}

Vector clipped_grad_sample(const Sample& s, const Vector& w, double kappa) {
  check_kappa(kappa);
  check_dim(s.x.size(), w);
  return huber_slope(s.x.dot(w) - s.y, kappa) * s.x;
}

double batch_clipped_loss(const Batch& b, const Vector& w, double kappa) {
  check_kappa(kappa);
  check_dim(b.covariates().cols(), w);
  const Vector r = b.covariates() * w - b.responses();
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) s += huber(r(i), kappa);
  return s / static_cast<double>(r.size());
}

Vector batch_clipped_grad(const Batch& b, const Vector& w, double kappa) {
  Vector g;
  batch_clipped_loss_grad(b, w, kappa, g);
  return g;
}

double batch_clipped_loss_grad(const Batch& b, const Vector& w, double kappa, Vector& grad) {
  check_kappa(kappa);
  check_dim(b.covariates().cols(), w);
  Vector r = b.covariates() * w - b.responses();
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    s += huber(r(i), kappa);
    r(i) = huber_slope(r(i), kappa);
  }
  const double inv_n = 1.0 / static_cast<double>(r.size());
  grad.noalias() = b.covariates().transpose() * r;
  grad *= inv_n;
  return s * inv_n;
}

double batch_abs_residual(const Batch& b, const Vector& w) {
  check_dim(b.covariates().cols(), w);
  return (b.covariates() * w - b.responses()).cwiseAbs().mean();
}

Matrix all_batch_clipped_grads(const BatchCollection& coll, const Vector& w, double kappa) {
  Matrix g(static_cast<Eigen::Index>(coll.size()), static_cast<Eigen::Index>(coll.dim()));
  Vector tmp;
  for (std::size_t b = 0; b < coll.size(); ++b) {
    batch_clipped_loss_grad(coll[b], w, kappa, tmp);
    g.row(static_cast<Eigen::Index>(b)) = tmp.transpose();
  }
  return g;
}

Vector all_batch_abs_residuals(const BatchCollection& coll, const Vector& w) {
  Vector v(static_cast<Eigen::Index>(coll.size()));
  for (std::size_t b = 0; b < coll.size(); ++b) v(static_cast<Eigen::Index>(b)) = batch_abs_residual(coll[b], w);
  return v;
}

}  // namespace lidreg
