#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wtv/bregman.hpp"
#include "wtv/grid.hpp"
#include "wtv/operators.hpp"

namespace wtv {

/// How the WTV weights are obtained.
///   uniform  - w = 1 (plain anisotropic TV)
///   fixed    - computed once from u0 = Phi^T z
///   adaptive - recomputed from the extrapolated iterate every outer step
enum class WeightMode { Uniform, Fixed, Adaptive };

std::string to_string(WeightMode m);
WeightMode parse_weight_mode(std::string_view name);

struct SolverConfig {
  double lambda = 0.0;
  /// When set, lambda = r0 * ||u0||_1 overrides `lambda`.
  std::optional<double> r0;
  /// Explicit step; otherwise beta = beta_fraction / lambda_max(Phi^T Phi).
  std::optional<double> beta;
  double beta_fraction = 0.95;
  double a = 2.0;
  double epsilon = 1e-4;
  int max_fb = 200;
  WeightMode weight_mode = WeightMode::Fixed;
  /// Explicit log-exp mu; otherwise mu = mu_scale * ||grad u0||_1.
  std::optional<double> mu;
  double mu_scale = 1.0;
  InnerSolver solver = InnerSolver::Fwsb;
  /// Explicit theta; otherwise theta = theta_fraction * theta_bound(w, beta).
  std::optional<double> theta;
  double theta_fraction = 0.9;
  double tau = 1e-4;
  double tau_inner = 0.0;
  int max_outer = 30;
  int max_inner = 50;
  /// Disable the extrapolation (alpha = 0): plain forward-backward.
  bool no_accel = false;
  double power_tol = 1e-8;
  int power_max_iter = 500;

  void validate() const;
};

struct TraceRow {
  int n = 0;
  double psnr = 0.0;       ///< NaN when no reference was supplied
  double objective = 0.0;  ///< 0.5 ||Phi u~ - z||^2 + lambda WTV_w(u~)
  double rel_change = 0.0;
  double cum_seconds = 0.0;
  long inner_iters = 0;    ///< linear-solver iterations spent in this backward step
  int bregman_iters = 0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
};

struct AfbResult {
  Image u;           ///< final extrapolated iterate u^(n)
  Image u0;          ///< Phi^T z
  RunTrace trace;
  bool converged = false;
  double setup_seconds = 0.0;
  // Resolved parameters.
  double lambda = 0.0;
  double beta = 0.0;
  double theta = 0.0;  ///< last value used
  double mu = 0.0;     ///< 0 under uniform weights
  double lambda_max = 0.0;
};

/// u + beta * Phi^T (z - Phi u)
Image forward_step(const Image& u, const ForwardModel& model, const Data& z, double beta);

/// (t_{n-1} - 1) / t_n with t_k = (k + a + 1) / a.
double fista_alpha(int n, double a);

/// 0.5 ||Phi u - z||^2
double data_fidelity(const Image& u, const ForwardModel& model, const Data& z);

/// 0.5 ||Phi u - z||^2 + lambda * WTV_w(u)
double composite_objective(const Image& u, const ForwardModel& model, const Data& z, const WeightField& w,
                           double lambda);

/// Accelerated forward-backward restoration. The backward step is solved by
/// weighted split Bregman with the configured inner linear solver.
/// Throws ConfigError on invalid configuration and DivergenceError when an
/// iterate stops being finite.
AfbResult afb_solve(const ForwardModel& model, const Data& z, const SolverConfig& cfg,
                    const Image* reference = nullptr);

}  // namespace wtv
