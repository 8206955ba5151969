#include "wtv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wtv {

namespace {

// Squares of weights enter the Laplacian stencil; keep them representable.
constexpr double kWeightFloor = 1e-150;

}  // namespace

LogExpParams::LogExpParams(double m) : mu(m) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("log-exp parameter mu must be positive and finite");
}

double phi(double t, const LogExpParams& p) {
  const double x = std::abs(t) / p.mu;
  return (std::numbers::ln2 - std::log1p(std::exp(-x))) / std::numbers::ln2;
}

double phi_prime(double t, const LogExpParams& p) {
  const double x = std::abs(t) / p.mu;
  // 1/(1+e^x) written as e^-x/(1+e^-x) so large x underflows to 0 instead of
  // overflowing.
  const double e = std::exp(-x);
  return e / (1.0 + e) / (p.mu * std::numbers::ln2);
}

WeightField compute_weights(const Image& u, const LogExpParams& p) {
  const Gradient g = grad(u);
  Image wx(u.n()), wy(u.n());
  for (std::size_t k = 0; k < u.size(); ++k) {
    wx[k] = std::max(phi_prime(g.x[k], p), kWeightFloor);
    wy[k] = std::max(phi_prime(g.y[k], p), kWeightFloor);
  }
  return WeightField(std::move(wx), std::move(wy));
}

double default_mu(const Image& u0) {
  const Gradient g = grad(u0);
  return norm1(g.x) + norm1(g.y);
}

}  // namespace wtv
