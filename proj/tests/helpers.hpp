#pragma once

#include "lidreg/types.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace lidreg::fixtures {

// Gaussian design, y = w.x + sigma * noise, one rng for the whole collection.
inline BatchCollection gaussian_collection(std::size_t m, std::size_t n, const Vector& w, double sigma,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto d = w.size();
  std::vector<Batch> out;
  for (std::size_t b = 0; b < m; ++b) {
    Matrix x(static_cast<Eigen::Index>(n), d);
    Vector y(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = g(rng);
      y(i) = x.row(i).dot(w) + sigma * g(rng);
    }
    out.emplace_back(std::move(x), std::move(y));
  }
  return BatchCollection(std::move(out));
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(d);
  for (auto& e : v) e = g(rng);
  return v;
}

inline WeightVector random_weights(std::mt19937_64& rng, std::size_t m, double zero_prob = 0.2) {
  std::uniform_real_distribution<double> u;
  std::vector<double> w(m);
  for (auto& e : w) e = u(rng) < zero_prob ? 0.0 : u(rng);
  if (std::all_of(w.begin(), w.end(), [](double e) { return e == 0.0; })) w[0] = 1.0;
  return WeightVector(std::move(w));
}

}  // namespace lidreg::fixtures
