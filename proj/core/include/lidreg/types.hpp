#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lidreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One regression sample (covariate x, response y).
struct Sample {
  Vector x;
  double y = 0.0;
};

/// n samples from a single source. Stored as an n x d covariate matrix and a
/// response vector; the batch is the unit of trust in the algorithm.
class Batch {
 public:
  explicit Batch(const std::vector<Sample>& samples);
  Batch(Matrix covariates, Vector responses);

  std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(x_.cols()); }

  const Matrix& covariates() const { return x_; }
  const Vector& responses() const { return y_; }
  Sample sample(std::size_t i) const;

 private:
  Matrix x_;
  Vector y_;
};

/// m batches of exactly n samples of dimension d.
class BatchCollection {
 public:
  explicit BatchCollection(std::vector<Batch> batches);

  std::size_t size() const { return batches_.size(); }
  std::size_t dim() const { return d_; }
  std::size_t batch_size() const { return n_; }

  const Batch& operator[](std::size_t b) const { return batches_[b]; }
  auto begin() const { return batches_.begin(); }
  auto end() const { return batches_.end(); }

  /// max_{i,b} |y_i^b|
  double max_abs_response() const;

 private:
  std::vector<Batch> batches_;
  std::size_t d_ = 0;
  std::size_t n_ = 0;
};

/// Per-batch membership weights in [0, 1] (a soft cluster). Positional: entry
/// b belongs to batch b of the collection.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector ones(std::size_t m);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t b) const { return w_[b]; }
  std::span<const double> values() const { return w_; }

  double total() const;
  double total(std::span<const std::size_t> subset) const;

  bool supported(std::size_t b) const { return w_[b] > 0.0; }
  std::size_t support_size() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

/// beta^{S} = sum_{b in S} beta^b; the full sum when `subset` is empty.
double total_weight(const WeightVector& beta,
                    std::optional<std::span<const std::size_t>> subset = std::nullopt);

/// Inputs of the list-decoding algorithm.
struct AlgoConfig {
  double alpha = 1.0;     ///< fraction of genuine batches, in (0, 1]
  double sigma = 1.0;     ///< noise scale
  double C = 3.0;         ///< L4-L2 hypercontractivity constant of covariates (3 for Gaussians)
  double C_p = 3.0;       ///< Lp-L2 hypercontractivity constant of the noise
  double p = 4.0;         ///< noise moment order (>= 2, may be +inf)
  double c2 = 3e-3;       ///< scale of the residual-variance threshold
  double c3 = 300.0;      ///< multiplier of log^2(2/alpha) in the filter tests
  double c4 = 2e-4;       ///< scale of the gradient-variance threshold
  double stationary_tol_scale = 1.0;
  double power_iter_tol = 1e-6;
  int power_iter_max = 1000;
  /// Hard cap on multifilter calls; 0 selects 16 * ceil(m / alpha^2).
  long max_filter_calls = 0;
  std::uint64_t rng_seed = 0;

  /// Throws ArgumentError when a field is out of range.
  void validate() const;
};

/// Candidate soft cluster with its clipping parameter and regression estimate.
struct Triplet {
  WeightVector beta;
  double kappa;
  Vector w;
};

enum class FilterBranch { downweight, split };

/// Result of one multifilter call: one downweighted vector or two restrictions.
struct FilterOutcome {
  explicit FilterOutcome(std::vector<WeightVector> weights);
  std::vector<WeightVector> new_weights;
  FilterBranch branch = FilterBranch::downweight;
};

}  // namespace lidreg
