#pragma once

#include <cstdint>

#include "wtv/grid.hpp"
#include "wtv/operators.hpp"

namespace wtv {

/// Additive white Gaussian noise. Samples come from std::mt19937_64 seeded
/// with `seed`, mapped to doubles as (x >> 11) * 2^-53 and turned into normals
/// with the Box-Muller transform, so the stream is identical on every
/// conforming platform.
struct NoiseSpec {
  double variance = 0.0;
  std::uint64_t seed = 0;
};

/// Modified (Toft) Shepp-Logan phantom, 10 ellipses, values in [0, 1], peak 1.
Image shepp_logan(std::size_t n);

/// Piecewise-constant cartoon (square, disc, triangle, bar) with peak 1.
Image piecewise_test_image(std::size_t n);

Image add_gaussian_noise(const Image& x, const NoiseSpec& spec);
/// Real and imaginary parts each receive variance / 2.
ComplexGrid add_gaussian_noise(const ComplexGrid& x, const NoiseSpec& spec);
Data add_gaussian_noise(const Data& x, const NoiseSpec& spec);

}  // namespace wtv
