#include "lidreg/types.hpp"

#include "lidreg/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace lidreg {

Batch::Batch(const std::vector<Sample>& samples) {
  if (samples.empty()) throw ArgumentError("batch must contain at least one sample");
  const auto d = samples.front().x.size();
  if (d == 0) throw ArgumentError("sample dimension must be positive");
  x_.resize(static_cast<Eigen::Index>(samples.size()), d);
  y_.resize(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].x.size() != d) throw ArgumentError("samples in a batch must share dimension");
    x_.row(static_cast<Eigen::Index>(i)) = samples[i].x.transpose();
    y_(static_cast<Eigen::Index>(i)) = samples[i].y;
  }
  if (!x_.allFinite() || !y_.allFinite()) throw ArgumentError("sample contains a non-finite value");
}

Batch::Batch(Matrix covariates, Vector responses) : x_(std::move(covariates)), y_(std::move(responses)) {
  if (x_.rows() == 0 || x_.cols() == 0) throw ArgumentError("batch must be non-empty with d >= 1");
  if (x_.rows() != y_.size()) throw ArgumentError("covariate rows and responses differ in length");
  if (!x_.allFinite() || !y_.allFinite()) throw ArgumentError("sample contains a non-finite value");
}

Sample Batch::sample(std::size_t i) const {
  if (i >= size()) throw ArgumentError("sample index out of range");
  const auto r = static_cast<Eigen::Index>(i);
  return Sample{x_.row(r).transpose(), y_(r)};
}

BatchCollection::BatchCollection(std::vector<Batch> batches) : batches_(std::move(batches)) {
  if (batches_.empty()) throw ArgumentError("collection must contain at least one batch");
  d_ = batches_.front().dim();
  n_ = batches_.front().size();
  for (const auto& b : batches_) {
    if (b.dim() != d_ || b.size() != n_) {
      throw ArgumentError("every batch must have " + std::to_string(n_) + " samples of dimension " +
                          std::to_string(d_));
    }
  }
}

double BatchCollection::max_abs_response() const {
  double mx = 0.0;
  for (const auto& b : batches_) mx = std::max(mx, b.responses().cwiseAbs().maxCoeff());
  return mx;
}

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw ArgumentError("weight vector must be non-empty");
  for (double v : w_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("weights must lie in [0, 1]");
  }
}

WeightVector WeightVector::ones(std::size_t m) { return WeightVector(std::vector<double>(m, 1.0)); }

double WeightVector::total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

double WeightVector::total(std::span<const std::size_t> subset) const {
  double s = 0.0;
  for (auto b : subset) {
    if (b >= w_.size()) throw ArgumentError("batch index out of range");
    s += w_[b];
  }
  return s;
}

std::size_t WeightVector::support_size() const {
  std::size_t k = 0;
  for (double v : w_) k += v > 0.0 ? 1 : 0;
  return k;
}

double total_weight(const WeightVector& beta, std::optional<std::span<const std::size_t>> subset) {
  return subset ? beta.total(*subset) : beta.total();
}

void AlgoConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ArgumentError(std::string("invalid config: ") + what);
  };
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be finite and >= 0");
  require(std::isfinite(C) && C >= 1.0, "C must be >= 1");
  require(std::isfinite(C_p) && C_p >= 1.0, "C_p must be >= 1");
  require(p >= 2.0, "p must be >= 2");
  require(std::isfinite(c2) && c2 > 0.0, "c2 must be positive");
  require(std::isfinite(c3) && c3 > 0.0, "c3 must be positive");
  require(std::isfinite(c4) && c4 > 0.0, "c4 must be positive");
  require(std::isfinite(stationary_tol_scale) && stationary_tol_scale > 0.0,
          "stationary_tol_scale must be positive");
  require(power_iter_tol > 0.0, "power_iter_tol must be positive");
  require(power_iter_max > 0, "power_iter_max must be positive");
  require(max_filter_calls >= 0, "max_filter_calls must be >= 0 (0 = automatic)");
}

FilterOutcome::FilterOutcome(std::vector<WeightVector> weights) : new_weights(std::move(weights)) {
  if (new_weights.empty() || new_weights.size() > 2) {
    throw ArgumentError("a filter outcome holds one or two weight vectors");
  }
}

}  // namespace lidreg
