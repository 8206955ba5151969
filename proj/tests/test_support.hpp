#pragma once

// Shared helpers for the test suites: seeded random grids and a dense,
// test-only assembly of the weighted difference operators built straight from
// their index definitions (independent of the stencil code in the library).

#include <Eigen/Dense>

#include <random>

#include "wtv/grid.hpp"

namespace wtv::testing {

inline Image random_image(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Image u(n);
  for (double& x : u) x = d(rng);
  return u;
}

inline WeightField random_weights(std::size_t n, std::uint64_t seed, double lo = 0.2, double hi = 2.0) {
  return WeightField(random_image(n, seed, lo, hi), random_image(n, seed + 7919, lo, hi));
}

inline Eigen::VectorXd to_vec(const Image& u) {
  return Eigen::Map<const Eigen::VectorXd>(u.data().data(), static_cast<Eigen::Index>(u.size()));
}

inline Image to_image(const Eigen::VectorXd& v, std::size_t n) {
  return Image(n, std::vector<double>(v.data(), v.data() + v.size()));
}

struct DenseOperators {
  Eigen::MatrixXd gx, gy, lap;
};

/// Row (i,j) of gx: -wx(i,j) at column (i,j), +wx(i,j) at column (i,j+1),
/// for j < n-1; zero row otherwise. gy likewise along rows.
inline DenseOperators assemble_dense(const WeightField& w) {
  const std::size_t n = w.n();
  const auto nn = static_cast<Eigen::Index>(n * n);
  DenseOperators d{Eigen::MatrixXd::Zero(nn, nn), Eigen::MatrixXd::Zero(nn, nn), {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto k = static_cast<Eigen::Index>(i * n + j);
      if (j + 1 < n) {
        d.gx(k, k) = -w.wx(i, j);
        d.gx(k, k + 1) = w.wx(i, j);
      }
      if (i + 1 < n) {
        d.gy(k, k) = -w.wy(i, j);
        d.gy(k, k + static_cast<Eigen::Index>(n)) = w.wy(i, j);
      }
    }
  }
  d.lap = -(d.gx.transpose() * d.gx + d.gy.transpose() * d.gy);
  return d;
}

inline double rel_err(const Image& a, const Image& b) {
  return distance(a, b) / std::max(norm2(b), 1e-300);
}

}  // namespace wtv::testing
