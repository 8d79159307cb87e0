#pragma once

#include "lidreg/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lidreg {

enum class CovariateModel { isotropic_gaussian_clamped, bounded_uniform, anisotropic };
enum class NoiseModel { gaussian, bounded, student_t };
enum class Adversary { none, fixed_wrong_model, mirror, point_mass, gradient_attack };

const char* to_string(CovariateModel v);
const char* to_string(NoiseModel v);
const char* to_string(Adversary v);
CovariateModel parse_covariate_model(const std::string& s);
NoiseModel parse_noise_model(const std::string& s);
Adversary parse_adversary(const std::string& s);

/// Recipe for a synthetic batch collection.
///
/// Each of the k = w_stars.size() components owns ceil(alpha m) genuine
/// batches. With `adversary == none` the remaining batches are genuine too
/// (assigned round-robin); otherwise they are adversarial:
///  - fixed_wrong_model: y = adv_w . x + noise
///  - mirror:            copy of a genuine batch with y -> -adv_scale * y
///  - point_mass:        every sample equals (adv_x0, adv_y0)
///  - gradient_attack:   y = adv_target . x + noise', where noise' is the
///                       noise law shrunk to variance max(sigma^2 - |adv_target - w*_0|^2, 0),
///                       so the residual scale at w*_0 matches genuine batches
///                       and only the gradient direction gives them away.
/// Covariates have ||Sigma|| = 1 and are redrawn until ||x|| <= C1 sqrt(d).
struct GeneratorSpec {
  std::size_t d = 4;
  std::size_t n = 10;
  std::size_t m = 100;
  double alpha = 1.0;
  std::vector<Vector> w_stars;
  CovariateModel covariates = CovariateModel::isotropic_gaussian_clamped;
  double condition_number = 1.0;  ///< anisotropic only: lambda_max / lambda_min of Sigma
  double C1 = 4.0;
  NoiseModel noise = NoiseModel::gaussian;
  double sigma = 0.1;
  double dof = 5.0;  ///< student-t degrees of freedom (> 2)
  Adversary adversary = Adversary::none;
  Vector adv_w;
  double adv_scale = 1.0;
  Vector adv_x0;
  double adv_y0 = 0.0;
  Vector adv_target;
  std::uint64_t seed = 0;

  std::size_t genuine_per_component() const;
  /// Throws ArgumentError when the recipe is inconsistent.
  void validate() const;
};

struct LabeledCollection {
  BatchCollection coll;
  std::vector<bool> good_mask;
  std::vector<int> component_of;  ///< -1 for adversarial batches
  std::vector<Vector> w_stars;
};

/// Deterministic in spec.seed; batch b draws from its own RNG stream.
LabeledCollection generate(const GeneratorSpec& spec);

/// Fresh genuine batch of component `component`, drawn from a stream disjoint
/// from every training stream of generate().
Batch generate_holdout_batch(const GeneratorSpec& spec, std::size_t component, std::uint64_t index);

/// k regressors in R^d with pairwise distance >= min_distance, each of norm
/// `radius`, rejection-sampled from `seed`.
std::vector<Vector> random_separated_regressors(std::size_t k, std::size_t d, double radius, double min_distance,
                                                std::uint64_t seed);

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace lidreg
