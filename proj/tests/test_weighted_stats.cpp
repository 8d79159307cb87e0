#include "lidreg/errors.hpp"
#include "lidreg/weighted_stats.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace lidreg;

namespace {

Vector vals(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

// Dense oracle: covariance formed explicitly, then a full eigendecomposition.
Matrix dense_cov(const Matrix& z, const WeightVector& beta) {
  const double W = beta.total();
  Vector mu = Vector::Zero(z.cols());
  for (Eigen::Index b = 0; b < z.rows(); ++b) mu += beta[static_cast<std::size_t>(b)] / W * z.row(b).transpose();
  Matrix cov = Matrix::Zero(z.cols(), z.cols());
  for (Eigen::Index b = 0; b < z.rows(); ++b) {
    const Vector c = z.row(b).transpose() - mu;
    cov += beta[static_cast<std::size_t>(b)] / W * c * c.transpose();
  }
  return cov;
}

}  // namespace

TEST(WeightedMean, PointMassAndZeroWeight) {
  EXPECT_DOUBLE_EQ(weighted_mean(vals({7.0, -3.0}), WeightVector({1.0, 0.0})), 7.0);
  EXPECT_THROW(weighted_mean(vals({7.0, -3.0}), WeightVector({0.0, 0.0})), DegenerateWeightsError);
  EXPECT_THROW(weighted_mean(vals({7.0}), WeightVector({1.0, 1.0})), ArgumentError);
  Matrix z(2, 2);
  z << 1, 2, 3, 6;
  EXPECT_TRUE(weighted_mean(z, WeightVector({1.0, 1.0})).isApprox(vals({2.0, 4.0})));
}

TEST(WeightedVariance, ThreeToOne) {
  // weights 3:1 on {0, 10}: mean 2.5, variance (3 * 6.25 + 56.25) / 4
  EXPECT_DOUBLE_EQ(weighted_variance(vals({0.0, 10.0}), WeightVector({0.75, 0.25})), 18.75);
  EXPECT_NEAR(weighted_variance(vals({0.0, 0.0, 0.0, 10.0}), WeightVector::ones(4)), 18.75, 1e-12);
}

TEST(WeightedVariance, InvariantUnderWeightScaling) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector z = fixtures::random_vector(rng, 12, 3.0);
    const WeightVector beta = fixtures::random_weights(rng, 12);
    std::vector<double> half(beta.values().begin(), beta.values().end());
    for (auto& h : half) h *= 0.5;
    EXPECT_NEAR(weighted_variance(z, beta), weighted_variance(z, WeightVector(half)), 1e-10);
    EXPECT_GE(weighted_variance(z, beta), 0.0);
  }
}

TEST(CovTopEig, RankOne) {
  Matrix z(2, 2);
  z << 1, 0, -1, 0;
  const EigPair e = cov_top_eig(z, WeightVector::ones(2));
  EXPECT_NEAR(e.lambda, 1.0, 1e-9);
  EXPECT_NEAR(std::abs(e.u(0)), 1.0, 1e-6);
  EXPECT_NEAR(e.u.norm(), 1.0, 1e-12);
}

TEST(CovTopEig, ZeroCovariance) {
  const Matrix z = Matrix::Constant(5, 3, 2.5);
  const EigPair e = cov_top_eig(z, WeightVector::ones(5));
  EXPECT_NEAR(e.lambda, 0.0, 1e-12);
  EXPECT_NEAR(e.u.norm(), 1.0, 1e-12);
}

TEST(CovTopEig, KnownDiagonalCovariance) {
  // Four points with covariance exactly diag(4, 1).
  Matrix z(4, 2);
  const double a = 2.0 * std::sqrt(2.0), c = std::sqrt(2.0);
  z << a, 0, -a, 0, 0, c, 0, -c;
  const WeightVector beta = WeightVector::ones(4);
  const Eigen::SelfAdjointEigenSolver<Matrix> oracle(dense_cov(z, beta));
  EXPECT_NEAR(oracle.eigenvalues()(1), 4.0, 1e-12);
  const EigPair e = cov_top_eig(z, beta);
  EXPECT_NEAR(e.lambda, 4.0, 0.04);
  EXPECT_GT(std::abs(e.u(0)), 0.99);
}

TEST(CovTopEig, MatchesDenseSolverOnRandomClouds) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 8);
    const std::size_t m = 3 + rng() % 30;
    Matrix z(static_cast<Eigen::Index>(m), d);
    for (Eigen::Index b = 0; b < z.rows(); ++b) z.row(b) = fixtures::random_vector(rng, d).transpose();
    const WeightVector beta = fixtures::random_weights(rng, m);
    const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(dense_cov(z, beta)).eigenvalues().maxCoeff();
    const EigPair e = cov_top_eig(z, beta, 1e-10, 5000, static_cast<std::uint64_t>(rep));
    EXPECT_GE(e.lambda, 0.5 * lmax - 1e-12);
    EXPECT_LE(e.lambda, lmax * (1 + 1e-9) + 1e-12);
  }
}

TEST(CovTopEig, DeterministicInSeed) {
  std::mt19937_64 rng(4);
  Matrix z(10, 3);
  for (Eigen::Index b = 0; b < 10; ++b) z.row(b) = fixtures::random_vector(rng, 3).transpose();
  const EigPair a = cov_top_eig(z, WeightVector::ones(10), 1e-6, 1000, 17);
  const EigPair b = cov_top_eig(z, WeightVector::ones(10), 1e-6, 1000, 17);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.lambda, b.lambda);
}

TEST(UpperQuantile, Examples) {
  const Vector v = vals({1, 2, 3, 4});
  const WeightVector ones = WeightVector::ones(4);
  EXPECT_DOUBLE_EQ(weighted_upper_quantile(v, ones, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(weighted_upper_quantile(v, ones, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(weighted_upper_quantile(v, ones, 10.0), 1.0);
  EXPECT_DOUBLE_EQ(weighted_upper_quantile(v, ones, 0.0), 4.0);
  EXPECT_THROW(weighted_upper_quantile(v, ones, -1.0), ArgumentError);
}

// Oracle: the largest supported value t with sum_{v >= t} beta > mass, or the
// smallest supported value when no t qualifies.
TEST(UpperQuantile, MatchesThresholdScan) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t m = 1 + rng() % 15;
    Vector v(static_cast<Eigen::Index>(m));
    for (auto& e : v) e = static_cast<double>(rng() % 6);
    const WeightVector beta = fixtures::random_weights(rng, m, 0.3);
    const double mass = std::uniform_real_distribution<double>(0.0, beta.total())(rng);
    double floor = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (beta[i] > 0.0) floor = std::min(floor, v(static_cast<Eigen::Index>(i)));
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double t = v(static_cast<Eigen::Index>(i));
      double tail = 0.0;
      for (std::size_t j = 0; j < m; ++j) tail += v(static_cast<Eigen::Index>(j)) >= t ? beta[j] : 0.0;
      if (tail > mass && beta[i] > 0.0) best = std::max(best, t);
    }
    const double expect = std::isfinite(best) ? best : floor;
    EXPECT_DOUBLE_EQ(weighted_upper_quantile(v, beta, mass), expect) << "rep " << rep;
  }
}
