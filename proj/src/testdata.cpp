#include "wtv/testdata.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace wtv {

namespace {

struct Ellipse {
  double value, a, b, x0, y0, phi_deg;
};

// Toft's modified intensities; geometry as in the original phantom.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

// Pixel centres in (-1, 1); column j -> x, row i -> y with row 0 at the top.
// Written so that x(n-1-j) == -x(j) exactly.
inline double coord_x(std::size_t j, std::size_t n) {
  return static_cast<double>(2 * static_cast<long>(j) + 1 - static_cast<long>(n)) / static_cast<double>(n);
}
inline double coord_y(std::size_t i, std::size_t n) {
  return static_cast<double>(static_cast<long>(n) - 1 - 2 * static_cast<long>(i)) / static_cast<double>(n);
}

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

void check_variance(const NoiseSpec& spec) {
  if (!(spec.variance >= 0.0)) throw ConfigError("noise variance must be >= 0");
}

}  // namespace

Image shepp_logan(std::size_t n) {
  if (n < 32) throw ConfigError("shepp_logan: n must be at least 32");
  Image img(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = coord_y(i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = coord_x(j, n);
      double v = 0.0;
      for (const Ellipse& e : kSheppLogan) {
        const double p = e.phi_deg * std::numbers::pi / 180.0;
        const double c = std::cos(p), s = std::sin(p);
        const double dx = x - e.x0, dy = y - e.y0;
        const double xr = dx * c + dy * s;
        const double yr = -dx * s + dy * c;
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) v += e.value;
      }
      // Overlap sums such as 1 - 0.8 - 0.2 land a few ulps off zero.
      img(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

Image piecewise_test_image(std::size_t n) {
  if (n < 32) throw ConfigError("piecewise_test_image: n must be at least 32");
  Image img(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = coord_y(i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = coord_x(j, n);
      double v = 0.1;
      if (x > -0.8 && x < -0.05 && y > -0.75 && y < 0.05) v = 0.5;
      if (y < -0.1 && y > -0.8 && x > 0.1 && x < 0.8 && (y + 0.8) < 0.7 * (1.0 - std::abs(x - 0.45) / 0.35))
        v = 0.75;
      if ((x - 0.3) * (x - 0.3) + (y - 0.4) * (y - 0.4) < 0.33 * 0.33) v = 1.0;
      if (x > -0.7 && x < -0.15 && y > 0.55 && y < 0.7) v = 0.3;
      img(i, j) = v;
    }
  }
  return img;
}

Image add_gaussian_noise(const Image& x, const NoiseSpec& spec) {
  check_variance(spec);
  if (spec.variance == 0.0) return x;
  NormalStream rng(spec.seed);
  const double sd = std::sqrt(spec.variance);
  Image out = x;
  for (double& v : out) v += sd * rng.next();
  return out;
}

ComplexGrid add_gaussian_noise(const ComplexGrid& x, const NoiseSpec& spec) {
  check_variance(spec);
  if (spec.variance == 0.0) return x;
  NormalStream rng(spec.seed);
  const double sd = std::sqrt(spec.variance / 2.0);
  ComplexGrid out = x;
  for (auto& v : out) {
    const double re = sd * rng.next();
    const double im = sd * rng.next();
    v += std::complex<double>(re, im);
  }
  return out;
}

Data add_gaussian_noise(const Data& x, const NoiseSpec& spec) {
  return std::visit([&](const auto& g) -> Data { return add_gaussian_noise(g, spec); }, x);
}

}  // namespace wtv
