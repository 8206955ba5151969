#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wtv/grid.hpp"

namespace wtv {

/// Pointwise shrinkage sign(z) * max(|z| - L, 0).
inline double soft(double z, double L) {
  const double a = (z < 0 ? -z : z) - L;
  if (a <= 0.0) return 0.0;
  return z < 0 ? -a : a;
}

/// Pointwise clamp of z to [-L, L]; soft(z, L) + cut(z, L) == z.
inline double cut(double z, double L) {
  if (z > L) return L;
  if (z < -L) return -L;
  return z;
}

Image soft(const Image& z, double L);
Image cut(const Image& z, double L);

/// Weighted total variation ||grad_w^x u||_1 + ||grad_w^y u||_1.
double weighted_tv(const Image& u, const WeightField& w);

enum class InnerSolver { Fwsb, GaussSeidel, Direct };

std::string to_string(InnerSolver s);
/// Accepts "fwsb", "gauss_seidel" (or "gs"), "direct". Throws ConfigError.
InnerSolver parse_inner_solver(std::string_view name);

struct BregmanParams {
  double lambda = 0.0;  ///< regularization weight
  double theta = 0.0;   ///< split penalty
  double beta = 1.0;    ///< forward-backward step
  double tau = 1e-4;    ///< relative stopping tolerance of the Bregman loop
  double tau_inner = 0.0;  ///< linear-solver tolerance; <= 0 means reuse tau
  int max_outer = 30;
  int max_inner = 50;

  /// Shrinkage threshold lambda / theta.
  double Lambda() const { return lambda / theta; }
  double inner_tolerance() const { return tau_inner > 0.0 ? tau_inner : tau; }
  /// Throws ConfigError on non-positive beta, tau, caps, negative lambda/theta.
  void validate() const;
};

/// Auxiliary variables of the split formulation: D_q approximates grad_q^w U,
/// e_q are the Bregman residuals.
struct BregmanState {
  Image Dx, Dy;
  Image ex, ey;
  Image U;

  /// U = v, D = e = 0.
  static BregmanState start(const Image& v);
};

/// Open upper bound 1 / (beta * ||Laplacian_w||_inf) on theta for which the
/// identity splitting of A = I - beta*theta*Laplacian_w converges.
double theta_bound(const WeightField& w, double beta);

/// b = v + beta*theta * (grad_w)^T (D - e).
Image bregman_rhs(const Image& v, const BregmanState& s, const WeightField& w, const BregmanParams& p);

/// A X = X - beta*theta*Laplacian_w X.
Image apply_system(const Image& X, const WeightField& w, double beta_theta);

/// One splitting step in its unexpanded form, with
/// X_q = grad_q^w X, z_q the shrinkage argument and e_q = cut(z_q):
///   v - beta*theta * ((grad_x^w)^T (X_x + 2 e_x - z_x) + (grad_y^w)^T (X_y + 2 e_y - z_y)).
Image fwsb_table_step(const Image& v, const Image& X, const Image& zx, const Image& zy, const Image& ex,
                      const Image& ey, const WeightField& w, double beta_theta);

struct LinearSolveResult {
  Image X;
  int iterations = 0;
  bool converged = false;
  /// ||A X^(m) - b|| after each iteration, when requested.
  std::vector<double> residuals;
};

/// Solves A X = b (b from bregman_rhs) with the fixed-point iteration
/// X <- beta*theta*Laplacian_w X + b, warm-started at s.U. Stops when
/// ||X^(m+1) - X^(m)|| <= tau_inner ||X^(m)|| or after max_inner steps.
/// Throws ConfigError unless theta < theta_bound(w, beta).
LinearSolveResult fwsb_linear_solve(const Image& v, const BregmanState& s, const WeightField& w,
                                    const BregmanParams& p, bool record_residuals = false);

/// Same system, forward Gauss-Seidel sweeps in lexicographic pixel order.
/// Any theta >= 0 is admissible (A is strictly diagonally dominant).
LinearSolveResult gauss_seidel_solve(const Image& v, const BregmanState& s, const WeightField& w,
                                     const BregmanParams& p, bool record_residuals = false);

/// Dense Cholesky solve of the same system; n <= 32 only.
LinearSolveResult direct_solve(const Image& v, const BregmanState& s, const WeightField& w,
                               const BregmanParams& p);

struct WsbResult {
  Image U;
  int total_inner = 0;
  int outer = 0;
  bool converged = false;
  BregmanState state;
};

/// Weighted split Bregman solve of
///   argmin_u lambda * WTV_w(u) + ||u - v||^2 / (2 beta).
WsbResult wsb_solve(const Image& v, const WeightField& w, const BregmanParams& p, InnerSolver inner);

/// lambda * WTV_w(u) + ||u - v||^2 / (2 beta)
double objective_backward(const Image& u, const Image& v, const WeightField& w, double lambda,
                          double beta);

}  // namespace wtv
