#include "lidreg/errors.hpp"
#include "lidreg/types.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

using namespace lidreg;

TEST(WeightVector, TotalOverAllBatches) {
  const WeightVector beta({1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(total_weight(beta), 3.0);
  EXPECT_DOUBLE_EQ(beta.total(), 3.0);
}

TEST(WeightVector, TotalOverSubset) {
  const WeightVector beta({0.5, 0.0, 1.0});
  const std::vector<std::size_t> subset{0, 2};
  EXPECT_DOUBLE_EQ(total_weight(beta, subset), 1.5);
}

TEST(WeightVector, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(WeightVector(std::vector<double>{}), ArgumentError);
  EXPECT_THROW(WeightVector({0.5, 1.5}), ArgumentError);
  EXPECT_THROW(WeightVector({-0.1}), ArgumentError);
  EXPECT_THROW(WeightVector({std::nan("")}), ArgumentError);
  const WeightVector beta({0.5, 0.5});
  const std::vector<std::size_t> bad{3};
  EXPECT_THROW(beta.total(bad), ArgumentError);
}

TEST(WeightVector, SupportAndOnes) {
  const WeightVector beta({0.0, 0.3, 0.0, 1.0});
  EXPECT_EQ(beta.support_size(), 2u);
  EXPECT_FALSE(beta.supported(0));
  EXPECT_TRUE(beta.supported(3));
  EXPECT_DOUBLE_EQ(WeightVector::ones(7).total(), 7.0);
}

TEST(WeightVector, TotalIsAdditiveAndMonotone) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const WeightVector beta = fixtures::random_weights(rng, 20);
    std::vector<std::size_t> s1, s2, both;
    for (std::size_t b = 0; b < 20; ++b) {
      const auto r = rng() % 3;
      if (r == 0) s1.push_back(b);
      if (r == 1) s2.push_back(b);
      if (r != 2) both.push_back(b);
    }
    EXPECT_NEAR(beta.total(both), beta.total(s1) + beta.total(s2), 1e-12);
    EXPECT_LE(beta.total(s1), beta.total(both) + 1e-12);
    EXPECT_LE(beta.total(both), beta.total() + 1e-12);
  }
}

TEST(Batch, ValidatesShapeAndFiniteness) {
  EXPECT_THROW(Batch(std::vector<Sample>{}), ArgumentError);
  std::vector<Sample> mixed{{Vector::Ones(2), 1.0}, {Vector::Ones(3), 1.0}};
  EXPECT_THROW(Batch{mixed}, ArgumentError);
  std::vector<Sample> nan_y{{Vector::Ones(2), std::numeric_limits<double>::quiet_NaN()}};
  EXPECT_THROW(Batch{nan_y}, ArgumentError);
  Matrix x = Matrix::Ones(2, 2);
  x(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Batch(x, Vector::Ones(2)), ArgumentError);
  EXPECT_THROW(Batch(Matrix::Ones(2, 2), Vector::Ones(3)), ArgumentError);

  const Batch b(std::vector<Sample>{{Vector::Ones(2), 1.0}, {Vector::Zero(2), -2.0}});
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b.dim(), 2u);
  EXPECT_DOUBLE_EQ(b.sample(1).y, -2.0);
  EXPECT_THROW(b.sample(2), ArgumentError);
}

TEST(BatchCollection, RequiresUniformBatches) {
  EXPECT_THROW(BatchCollection(std::vector<Batch>{}), ArgumentError);
  std::vector<Batch> uneven{Batch(Matrix::Ones(2, 3), Vector::Ones(2)), Batch(Matrix::Ones(3, 3), Vector::Ones(3))};
  EXPECT_THROW(BatchCollection{uneven}, ArgumentError);
  std::vector<Batch> ok{Batch(Matrix::Ones(2, 3), Vector::Constant(2, -4.0)), Batch(Matrix::Ones(2, 3), Vector::Ones(2))};
  const BatchCollection coll(ok);
  EXPECT_EQ(coll.size(), 2u);
  EXPECT_EQ(coll.dim(), 3u);
  EXPECT_EQ(coll.batch_size(), 2u);
  EXPECT_DOUBLE_EQ(coll.max_abs_response(), 4.0);
}

TEST(AlgoConfig, Validation) {
  AlgoConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  auto bad = [](auto mutate) {
    AlgoConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), ArgumentError);
  };
  bad([](AlgoConfig& c) { c.alpha = 0.0; });
  bad([](AlgoConfig& c) { c.alpha = 1.5; });
  bad([](AlgoConfig& c) { c.sigma = -1.0; });
  bad([](AlgoConfig& c) { c.C = 0.5; });
  bad([](AlgoConfig& c) { c.p = 1.0; });
  bad([](AlgoConfig& c) { c.c3 = 0.0; });
  bad([](AlgoConfig& c) { c.power_iter_max = 0; });
  bad([](AlgoConfig& c) { c.max_filter_calls = -1; });
  cfg.p = std::numeric_limits<double>::infinity();
  EXPECT_NO_THROW(cfg.validate());
}

TEST(FilterOutcome, HoldsOneOrTwoVectors) {
  EXPECT_THROW(FilterOutcome(std::vector<WeightVector>{}), ArgumentError);
  const WeightVector w({1.0});
  EXPECT_THROW(FilterOutcome({w, w, w}), ArgumentError);
  EXPECT_EQ(FilterOutcome({w, w}).new_weights.size(), 2u);
}
