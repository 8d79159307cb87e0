#include "lidreg/synth.hpp"

#include "lidreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lidreg {
namespace {

constexpr std::uint64_t kTrainSalt = 0x7472'6169'6e00'0000ULL;
constexpr std::uint64_t kHoldoutSalt = 0x686f'6c64'6f75'7400ULL;
constexpr std::uint64_t kLayoutSalt = 0x6c61'796f'7574'0000ULL;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
  return std::mt19937_64(mix_seed(seed ^ mix_seed(salt + index)));
}

class SampleDrawer {
 public:
  explicit SampleDrawer(const GeneratorSpec& spec) : spec_(spec) {
    const auto d = static_cast<Eigen::Index>(spec.d);
    scale_ = Vector::Ones(d);
    if (spec.covariates == CovariateModel::anisotropic && spec.d > 1) {
      // Variances log-spaced from 1 down to 1/condition_number.
      for (Eigen::Index j = 0; j < d; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(d - 1);
        scale_(j) = std::sqrt(std::pow(spec.condition_number, -frac));
      }
    }
    max_norm_ = spec.C1 * std::sqrt(static_cast<double>(spec.d));
  }

  Vector covariate(std::mt19937_64& rng) const {
    const auto d = static_cast<Eigen::Index>(spec_.d);
    Vector x(d);
    if (spec_.covariates == CovariateModel::bounded_uniform) {
      std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
      for (Eigen::Index j = 0; j < d; ++j) x(j) = u(rng);
      return x;
    }
    std::normal_distribution<double> normal;
    do {
      for (Eigen::Index j = 0; j < d; ++j) x(j) = scale_(j) * normal(rng);
    } while (x.norm() > max_norm_);
    return x;
  }

  // Zero-mean noise with variance sigma^2.
  double noise(std::mt19937_64& rng) const {
    switch (spec_.noise) {
      case NoiseModel::gaussian:
        return spec_.sigma * std::normal_distribution<double>()(rng);
      case NoiseModel::bounded:
        return spec_.sigma * std::sqrt(3.0) * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      case NoiseModel::student_t:
        return spec_.sigma * std::sqrt((spec_.dof - 2.0) / spec_.dof) *
               std::student_t_distribution<double>(spec_.dof)(rng);
    }
    return 0.0;
  }

  Batch linear_batch(std::mt19937_64& rng, const Vector& w, double noise_factor = 1.0) const {
    const auto n = static_cast<Eigen::Index>(spec_.n);
    Matrix x(n, static_cast<Eigen::Index>(spec_.d));
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector xi = covariate(rng);
      x.row(i) = xi.transpose();
      y(i) = w.dot(xi) + noise_factor * noise(rng);
    }
    return Batch(std::move(x), std::move(y));
  }

 private:
  const GeneratorSpec& spec_;
  Vector scale_;
  double max_norm_ = 0.0;
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* to_string(CovariateModel v) {
  switch (v) {
    case CovariateModel::isotropic_gaussian_clamped:
      return "isotropic-gaussian-clamped";
    case CovariateModel::bounded_uniform:
      return "bounded-uniform";
    case CovariateModel::anisotropic:
      return "anisotropic";
  }
  return "?";
}

const char* to_string(NoiseModel v) {
  switch (v) {
    case NoiseModel::gaussian:
      return "gaussian";
    case NoiseModel::bounded:
      return "bounded";
    case NoiseModel::student_t:
      return "student-t";
  }
  return "?";
}

const char* to_string(Adversary v) {
  switch (v) {
    case Adversary::none:
      return "none";
    case Adversary::fixed_wrong_model:
      return "fixed-wrong-model";
    case Adversary::mirror:
      return "mirror";
    case Adversary::point_mass:
      return "point-mass";
    case Adversary::gradient_attack:
      return "gradient-attack";
  }
  return "?";
}

CovariateModel parse_covariate_model(const std::string& s) {
  for (auto v : {CovariateModel::isotropic_gaussian_clamped, CovariateModel::bounded_uniform,
                 CovariateModel::anisotropic}) {
    if (s == to_string(v)) return v;
  }
  throw ArgumentError("unknown covariate model '" + s + "'");
}

NoiseModel parse_noise_model(const std::string& s) {
  for (auto v : {NoiseModel::gaussian, NoiseModel::bounded, NoiseModel::student_t}) {
    if (s == to_string(v)) return v;
  }
  throw ArgumentError("unknown noise model '" + s + "'");
}

Adversary parse_adversary(const std::string& s) {
  for (auto v : {Adversary::none, Adversary::fixed_wrong_model, Adversary::mirror, Adversary::point_mass,
                 Adversary::gradient_attack}) {
    if (s == to_string(v)) return v;
  }
  throw ArgumentError("unknown adversary '" + s + "'");
}

std::size_t GeneratorSpec::genuine_per_component() const {
  return static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(m) - 1e-9));
}

void GeneratorSpec::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ArgumentError("invalid generator spec: " + what);
  };
  require(d >= 1 && n >= 1 && m >= 1, "d, n, m must be positive");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(alpha * static_cast<double>(m) >= 1.0, "alpha * m must be >= 1");
  require(!w_stars.empty(), "at least one true regressor is required");
  for (const auto& w : w_stars) require(w.size() == static_cast<Eigen::Index>(d), "w_star dimension must equal d");
  require(w_stars.size() * genuine_per_component() <= m, "k * ceil(alpha m) exceeds m");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be >= 0");
  require(C1 > 0.0, "C1 must be positive");
  require(covariates != CovariateModel::bounded_uniform || C1 >= std::sqrt(3.0),
          "bounded-uniform covariates need C1 >= sqrt(3)");
  require(condition_number >= 1.0, "condition_number must be >= 1");
  require(noise != NoiseModel::student_t || dof > 2.0, "student-t noise needs dof > 2");
  switch (adversary) {
    case Adversary::fixed_wrong_model:
      require(adv_w.size() == static_cast<Eigen::Index>(d), "adv_w must have dimension d");
      break;
    case Adversary::point_mass:
      require(adv_x0.size() == static_cast<Eigen::Index>(d), "adv_x0 must have dimension d");
      break;
    case Adversary::gradient_attack:
      require(adv_target.size() == static_cast<Eigen::Index>(d), "adv_target must have dimension d");
      break;
    default:
      break;
  }
}

LabeledCollection generate(const GeneratorSpec& spec) {
  spec.validate();
  const SampleDrawer draw(spec);
  const std::size_t k = spec.w_stars.size();
  const std::size_t per = spec.genuine_per_component();

  // Logical order: component-major genuine batches, then the rest.
  std::vector<int> role(spec.m, -1);
  for (std::size_t b = 0; b < k * per; ++b) role[b] = static_cast<int>(b / per);
  if (spec.adversary == Adversary::none) {
    for (std::size_t b = k * per; b < spec.m; ++b) role[b] = static_cast<int>((b - k * per) % k);
  }
  const std::size_t genuine = static_cast<std::size_t>(std::count_if(role.begin(), role.end(), [](int r) { return r >= 0; }));

  std::vector<Batch> logical;
  logical.reserve(spec.m);
  for (std::size_t b = 0; b < spec.m; ++b) {
    auto rng = stream(spec.seed, kTrainSalt, b);
    if (role[b] >= 0) {
      logical.push_back(draw.linear_batch(rng, spec.w_stars[static_cast<std::size_t>(role[b])]));
      continue;
    }
    switch (spec.adversary) {
      case Adversary::fixed_wrong_model:
        logical.push_back(draw.linear_batch(rng, spec.adv_w));
        break;
      case Adversary::mirror: {
        const Batch& src = logical[(b - genuine) % genuine];
        logical.emplace_back(src.covariates(), -spec.adv_scale * src.responses());
        break;
      }
      case Adversary::point_mass: {
        const auto n = static_cast<Eigen::Index>(spec.n);
        Matrix x = spec.adv_x0.transpose().replicate(n, 1);
        logical.emplace_back(std::move(x), Vector::Constant(n, spec.adv_y0));
        break;
      }
      case Adversary::gradient_attack: {
        const double shift2 = (spec.adv_target - spec.w_stars.front()).squaredNorm();
        const double s2 = spec.sigma * spec.sigma;
        const double factor = s2 > 0.0 ? std::sqrt(std::max(s2 - shift2, 0.0) / s2) : 0.0;
        logical.push_back(draw.linear_batch(rng, spec.adv_target, factor));
        break;
      }
      case Adversary::none:
        break;
    }
  }

  std::vector<std::size_t> slot(spec.m);
  std::iota(slot.begin(), slot.end(), std::size_t{0});
  auto layout_rng = stream(spec.seed, kLayoutSalt, 0);
  std::shuffle(slot.begin(), slot.end(), layout_rng);

  std::vector<Batch> placed;
  placed.reserve(spec.m);
  LabeledCollection out{BatchCollection(std::vector<Batch>{logical.front()}), {}, {}, spec.w_stars};
  out.good_mask.resize(spec.m);
  out.component_of.resize(spec.m);
  for (std::size_t pos = 0; pos < spec.m; ++pos) {
    const std::size_t b = slot[pos];
    placed.push_back(logical[b]);
    out.component_of[pos] = role[b];
    out.good_mask[pos] = role[b] >= 0;
  }
  out.coll = BatchCollection(std::move(placed));
  return out;
}

Batch generate_holdout_batch(const GeneratorSpec& spec, std::size_t component, std::uint64_t index) {
  spec.validate();
  if (component >= spec.w_stars.size()) throw ArgumentError("component index out of range");
  const SampleDrawer draw(spec);
  auto rng = stream(spec.seed, kHoldoutSalt + component * 0x1'0000'0000ULL, index);
  return draw.linear_batch(rng, spec.w_stars[component]);
}

std::vector<Vector> random_separated_regressors(std::size_t k, std::size_t d, double radius, double min_distance,
                                                std::uint64_t seed) {
  if (k == 0 || d == 0) throw ArgumentError("k and d must be positive");
  std::mt19937_64 rng(mix_seed(seed));
  std::normal_distribution<double> normal;
  std::vector<Vector> out;
  for (int attempt = 0; out.size() < k; ++attempt) {
    if (attempt > 100000) throw ArgumentError("could not place regressors at the requested separation");
    Vector w(static_cast<Eigen::Index>(d));
    for (auto& v : w) v = normal(rng);
    w *= radius / w.norm();
    const bool far = std::all_of(out.begin(), out.end(), [&](const Vector& o) { return (o - w).norm() >= min_distance; });
    if (far) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace lidreg
