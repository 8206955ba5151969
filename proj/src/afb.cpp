#include "wtv/afb.hpp"

#include <cmath>
#include <limits>

#include "wtv/metrics.hpp"
#include "wtv/potential.hpp"

namespace wtv {

std::string to_string(WeightMode m) {
  switch (m) {
    case WeightMode::Uniform: return "uniform";
    case WeightMode::Fixed: return "fixed";
    case WeightMode::Adaptive: return "adaptive";
  }
  return "unknown";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "uniform") return WeightMode::Uniform;
  if (name == "fixed") return WeightMode::Fixed;
  if (name == "adaptive") return WeightMode::Adaptive;
  throw ConfigError("unknown weight_mode '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (r0 && !(*r0 >= 0.0)) throw ConfigError("r0 must be >= 0");
  if (beta && !(*beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(beta_fraction > 0.0 && beta_fraction < 1.0)) throw ConfigError("beta_fraction must lie in (0, 1)");
  if (!(a > 0.0)) throw ConfigError("acceleration parameter a must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (max_fb < 1) throw ConfigError("max_fb must be >= 1");
  if (mu && !(*mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(mu_scale > 0.0)) throw ConfigError("mu_scale must be positive");
  if (theta && !(*theta > 0.0)) throw ConfigError("theta must be positive");
  if (!(theta_fraction > 0.0 && theta_fraction < 1.0)) throw ConfigError("theta_fraction must lie in (0, 1)");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (max_outer < 1 || max_inner < 1) throw ConfigError("iteration caps must be >= 1");
  if (!(power_tol > 0.0) || power_max_iter < 1) throw ConfigError("invalid power-method settings");
}

Image forward_step(const Image& u, const ForwardModel& model, const Data& z, double beta) {
  Image g = model.adjoint(subtract(z, model.apply(u)));
  g *= beta;
  return u + g;
}

double fista_alpha(int n, double a) {
  if (n < 1) throw ConfigError("fista_alpha: n must be >= 1");
  if (!(a > 0.0)) throw ConfigError("fista_alpha: a must be positive");
  const double t_prev = (static_cast<double>(n - 1) + a + 1.0) / a;
  const double t_n = (static_cast<double>(n) + a + 1.0) / a;
  return (t_prev - 1.0) / t_n;
}

double data_fidelity(const Image& u, const ForwardModel& model, const Data& z) {
  const double r = norm2(subtract(model.apply(u), z));
  return 0.5 * r * r;
}

double composite_objective(const Image& u, const ForwardModel& model, const Data& z, const WeightField& w,
                           double lambda) {
  return data_fidelity(u, model, z) + lambda * weighted_tv(u, w);
}

namespace {

WeightField make_weights(WeightMode mode, const Image& u, double mu) {
  if (mode == WeightMode::Uniform) return WeightField::uniform(u.n());
  return compute_weights(u, LogExpParams(mu));
}

}  // namespace

AfbResult afb_solve(const ForwardModel& model, const Data& z, const SolverConfig& cfg, const Image* reference) {
  cfg.validate();
  if (reference) require_same_n(*reference, Image(model.n()), "afb_solve reference");

  AfbResult res;
  WeightField w;
  BregmanParams bp;
  {
    ScopedTimer setup(res.setup_seconds);
    res.lambda_max = power_method(model, cfg.power_tol, cfg.power_max_iter);
    if (!(res.lambda_max > 0.0)) throw ConfigError("forward model is zero (lambda_max = 0)");
    if (cfg.beta) {
      if (*cfg.beta >= 1.0 / res.lambda_max) {
        throw ConfigError("beta = " + std::to_string(*cfg.beta) + " violates beta < 1/lambda_max = " +
                          std::to_string(1.0 / res.lambda_max));
      }
      res.beta = *cfg.beta;
    } else {
      res.beta = cfg.beta_fraction / res.lambda_max;
    }

    res.u0 = model.adjoint(z);
    if (!all_finite(res.u0)) throw DivergenceError("non-finite initial image Phi^T z", 0);
    res.lambda = cfg.r0 ? *cfg.r0 * norm1(res.u0) : cfg.lambda;

    if (cfg.weight_mode != WeightMode::Uniform) {
      res.mu = cfg.mu ? *cfg.mu : cfg.mu_scale * default_mu(res.u0);
      if (!(res.mu > 0.0)) throw ConfigError("log-exp mu resolved to 0 (flat initial image); set mu explicitly");
    }
    w = make_weights(cfg.weight_mode, res.u0, res.mu);

    bp.lambda = res.lambda;
    bp.beta = res.beta;
    bp.tau = cfg.tau;
    bp.tau_inner = cfg.tau_inner;
    bp.max_outer = cfg.max_outer;
    bp.max_inner = cfg.max_inner;
  }

  auto resolve_theta = [&](const WeightField& wf) {
    return cfg.theta ? *cfg.theta : cfg.theta_fraction * theta_bound(wf, res.beta);
  };
  bp.theta = resolve_theta(w);

  Image u = res.u0;
  Image u_tilde = res.u0;
  double elapsed = 0.0;
  for (int n = 0; n < cfg.max_fb; ++n) {
    TraceRow row;
    row.n = n + 1;
    {
      ScopedTimer t(elapsed);
      if (cfg.weight_mode == WeightMode::Adaptive && n > 0) {
        w = make_weights(cfg.weight_mode, u, res.mu);
        bp.theta = resolve_theta(w);
      }
      const Image v = forward_step(u, model, z, res.beta);
      WsbResult back = wsb_solve(v, w, bp, cfg.solver);
      row.inner_iters = back.total_inner;
      row.bregman_iters = back.outer;
      if (!all_finite(back.U)) throw DivergenceError("non-finite backward-step iterate", n + 1);

      const double alpha = cfg.no_accel ? 0.0 : fista_alpha(n + 1, cfg.a);
      Image next = back.U;
      for (std::size_t k = 0; k < next.size(); ++k) next[k] += alpha * (back.U[k] - u_tilde[k]);
      if (!all_finite(next)) throw DivergenceError("non-finite extrapolated iterate", n + 1);

      const double nn = norm2(next);
      const double diff = distance(next, u);
      row.rel_change = nn > 0.0 ? diff / nn : diff;
      u_tilde = std::move(back.U);
      u = std::move(next);
    }
    row.cum_seconds = elapsed;
    row.objective = composite_objective(u_tilde, model, z, w, res.lambda);
    row.psnr = reference ? psnr(u, *reference) : std::numeric_limits<double>::quiet_NaN();
    res.trace.rows.push_back(row);
    if (row.rel_change < cfg.epsilon) {
      res.converged = true;
      break;
    }
  }
  res.theta = bp.theta;
  res.u = std::move(u);
  return res;
}

}  // namespace wtv
