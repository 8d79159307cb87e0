#include "lidreg/errors.hpp"
#include "lidreg/synth.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace lidreg;

namespace {

GeneratorSpec small_spec() {
  GeneratorSpec s;
  s.d = 3;
  s.n = 6;
  s.m = 20;
  s.alpha = 0.25;
  s.sigma = 0.1;
  s.seed = 5;
  s.w_stars = random_separated_regressors(2, 3, 1.0, 1.0, 5);
  return s;
}

bool same(const BatchCollection& a, const BatchCollection& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].covariates() != b[i].covariates() || a[i].responses() != b[i].responses()) return false;
  }
  return true;
}

}  // namespace

TEST(Generate, DeterministicInSeed) {
  const GeneratorSpec s = small_spec();
  EXPECT_TRUE(same(generate(s).coll, generate(s).coll));
  GeneratorSpec other = s;
  other.seed = 6;
  EXPECT_FALSE(same(generate(s).coll, generate(other).coll));
}

TEST(Generate, ShapeAndLabels) {
  GeneratorSpec s = small_spec();
  s.adversary = Adversary::fixed_wrong_model;
  s.adv_w = Vector::Constant(3, -2.0);
  const LabeledCollection data = generate(s);
  EXPECT_EQ(data.coll.size(), 20u);
  EXPECT_EQ(data.coll.batch_size(), 6u);
  EXPECT_EQ(data.coll.dim(), 3u);
  std::size_t good = 0;
  std::vector<std::size_t> per(2, 0);
  for (std::size_t b = 0; b < 20; ++b) {
    good += data.good_mask[b] ? 1 : 0;
    if (data.component_of[b] >= 0) ++per[static_cast<std::size_t>(data.component_of[b])];
    EXPECT_EQ(data.good_mask[b], data.component_of[b] >= 0);
  }
  EXPECT_EQ(good, 10u);
  EXPECT_EQ(per[0], 5u);
  EXPECT_EQ(per[1], 5u);
}

TEST(Generate, CovariatesRespectNormBound) {
  GeneratorSpec s = small_spec();
  s.C1 = 1.2;
  const LabeledCollection data = generate(s);
  for (const Batch& b : data.coll) {
    for (Eigen::Index i = 0; i < b.covariates().rows(); ++i) {
      EXPECT_LE(b.covariates().row(i).norm(), 1.2 * std::sqrt(3.0) + 1e-12);
    }
  }
}

TEST(Generate, SecondMomentHasUnitNorm) {
  GeneratorSpec s;
  s.d = 4;
  s.n = 1000;
  s.m = 1000;
  s.sigma = 0.1;
  s.w_stars = {Vector::Zero(4)};
  for (auto model : {CovariateModel::isotropic_gaussian_clamped, CovariateModel::bounded_uniform,
                     CovariateModel::anisotropic}) {
    s.covariates = model;
    s.condition_number = 10.0;
    const LabeledCollection data = generate(s);
    Matrix second = Matrix::Zero(4, 4);
    for (const Batch& b : data.coll) second += b.covariates().transpose() * b.covariates();
    second /= 1e6;
    const double top = Eigen::SelfAdjointEigenSolver<Matrix>(second).eigenvalues().maxCoeff();
    EXPECT_NEAR(top, 1.0, 0.02) << to_string(model);
  }
}

TEST(Generate, NoiselessGenuineBatchesAreExact) {
  GeneratorSpec s = small_spec();
  s.sigma = 0.0;
  const LabeledCollection data = generate(s);
  for (std::size_t b = 0; b < data.coll.size(); ++b) {
    const Vector& w = data.w_stars[static_cast<std::size_t>(data.component_of[b])];
    EXPECT_LT((data.coll[b].covariates() * w - data.coll[b].responses()).norm(), 1e-12);
  }
}

TEST(Generate, AdversaryStrategies) {
  GeneratorSpec s = small_spec();
  s.sigma = 0.0;
  s.adversary = Adversary::mirror;
  s.adv_scale = 2.0;
  LabeledCollection data = generate(s);
  for (std::size_t b = 0; b < data.coll.size(); ++b) {
    if (data.good_mask[b]) continue;
    // mirrored responses: y = -2 (w* . x) for one of the components
    const Batch& bt = data.coll[b];
    bool match = false;
    for (const Vector& w : data.w_stars) match |= (bt.covariates() * w * -2.0 - bt.responses()).norm() < 1e-12;
    EXPECT_TRUE(match);
  }

  s.adversary = Adversary::point_mass;
  s.adv_x0 = Vector::Constant(3, 0.5);
  s.adv_y0 = 7.0;
  data = generate(s);
  for (std::size_t b = 0; b < data.coll.size(); ++b) {
    if (data.good_mask[b]) continue;
    EXPECT_TRUE((data.coll[b].responses().array() == 7.0).all());
    EXPECT_TRUE((data.coll[b].covariates().array() == 0.5).all());
  }

  s.sigma = 0.5;
  s.adversary = Adversary::gradient_attack;
  s.adv_target = s.w_stars[0] + Vector::Constant(3, 0.1);
  data = generate(s);
  for (std::size_t b = 0; b < data.coll.size(); ++b) EXPECT_TRUE(data.coll[b].responses().allFinite());
}

TEST(Generate, HoldoutStreamsAreFresh) {
  const GeneratorSpec s = small_spec();
  const LabeledCollection data = generate(s);
  const Batch h0 = generate_holdout_batch(s, 0, 0);
  const Batch h0b = generate_holdout_batch(s, 0, 0);
  const Batch h1 = generate_holdout_batch(s, 0, 1);
  EXPECT_EQ(h0.covariates(), h0b.covariates());
  EXPECT_NE(h0.covariates(), h1.covariates());
  for (const Batch& b : data.coll) EXPECT_NE(b.covariates(), h0.covariates());
  EXPECT_THROW(generate_holdout_batch(s, 5, 0), ArgumentError);
}

TEST(GeneratorSpec, Validation) {
  auto bad = [](auto mutate) {
    GeneratorSpec s = small_spec();
    mutate(s);
    EXPECT_THROW(s.validate(), ArgumentError);
  };
  bad([](GeneratorSpec& s) { s.alpha = 0.0; });
  bad([](GeneratorSpec& s) { s.w_stars.clear(); });
  bad([](GeneratorSpec& s) { s.w_stars[0] = Vector::Zero(2); });
  bad([](GeneratorSpec& s) { s.alpha = 0.6; });  // 2 * 12 > 20
  bad([](GeneratorSpec& s) { s.adversary = Adversary::fixed_wrong_model; });
  bad([](GeneratorSpec& s) {
    s.noise = NoiseModel::student_t;
    s.dof = 2.0;
  });
}

TEST(Names, RoundTrip) {
  for (auto v : {Adversary::none, Adversary::fixed_wrong_model, Adversary::mirror, Adversary::point_mass,
                 Adversary::gradient_attack}) {
    EXPECT_EQ(parse_adversary(to_string(v)), v);
  }
  for (auto v : {NoiseModel::gaussian, NoiseModel::bounded, NoiseModel::student_t}) {
    EXPECT_EQ(parse_noise_model(to_string(v)), v);
  }
  EXPECT_EQ(parse_covariate_model("anisotropic"), CovariateModel::anisotropic);
  EXPECT_THROW(parse_adversary("sneaky"), ArgumentError);
}

TEST(SeparatedRegressors, NormAndDistance) {
  const auto ws = random_separated_regressors(5, 6, 2.0, 1.5, 9);
  ASSERT_EQ(ws.size(), 5u);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    EXPECT_NEAR(ws[i].norm(), 2.0, 1e-12);
    for (std::size_t j = 0; j < i; ++j) EXPECT_GE((ws[i] - ws[j]).norm(), 1.5);
  }
  EXPECT_THROW(random_separated_regressors(3, 1, 1.0, 1.9, 1), ArgumentError);
}
