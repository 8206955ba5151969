#pragma once

#include "wtv/grid.hpp"

namespace wtv {

/// Log-exp edge potential phi_mu(t) = log(2 / (1 + exp(-|t|/mu))) / log 2.
struct LogExpParams {
  double mu;

  explicit LogExpParams(double mu);
};

double phi(double t, const LogExpParams& p);

/// d phi / d|t| = 1 / (mu log 2) * 1 / (1 + exp(|t|/mu)).
/// Bounded above by 1 / (2 mu log 2), attained at t = 0; tends to 0 for |t| >> mu.
double phi_prime(double t, const LogExpParams& p);

/// Edge-adaptive weights from the unweighted forward differences of u:
/// wx = phi'(|u_x|), wy = phi'(|u_y|). Values that would underflow are
/// floored so the field stays strictly positive.
WeightField compute_weights(const Image& u, const LogExpParams& p);

/// Sum of |u_x| + |u_y| over all pixels (unit-weight forward differences).
double default_mu(const Image& u0);

}  // namespace wtv
