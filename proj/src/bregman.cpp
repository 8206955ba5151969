#include "wtv/bregman.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

namespace wtv {

namespace {

constexpr double kTinyNorm = 1e-14;

// Relative change test ||new - old|| <= tol ||old|| with an absolute fallback
// when the previous iterate is (numerically) zero.
bool small_change(double diff_sq, double old_sq, double tol) {
  const double diff = std::sqrt(diff_sq);
  const double old = std::sqrt(old_sq);
  if (old < kTinyNorm) return diff <= tol;
  return diff <= tol * old;
}

void check_shapes(const Image& v, const BregmanState& s, const WeightField& w) {
  require_same_n(v, w.wx, "bregman");
  for (const Image* g : {&s.Dx, &s.Dy, &s.ex, &s.ey, &s.U}) require_same_n(v, *g, "bregman state");
}

// Squared-weight five-point stencil scaled by beta*theta, plus the diagonal of A.
struct SystemStencil {
  std::size_t n = 0;
  std::vector<double> left, right, up, down, diag, inv_diag;

  SystemStencil(const WeightField& w, double bt) : n(w.n()) {
    const std::size_t nn = n * n;
    left.assign(nn, 0.0);
    right.assign(nn, 0.0);
    up.assign(nn, 0.0);
    down.assign(nn, 0.0);
    diag.assign(nn, 1.0);
    inv_diag.assign(nn, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = i * n + j;
        if (j > 0) left[k] = bt * w.wx[k - 1] * w.wx[k - 1];
        if (j + 1 < n) right[k] = bt * w.wx[k] * w.wx[k];
        if (i > 0) up[k] = bt * w.wy[k - n] * w.wy[k - n];
        if (i + 1 < n) down[k] = bt * w.wy[k] * w.wy[k];
        diag[k] = 1.0 + left[k] + right[k] + up[k] + down[k];
        inv_diag[k] = 1.0 / diag[k];
      }
    }
  }
};

double residual_norm(const Image& X, const Image& b, const WeightField& w, double bt) {
  return distance(apply_system(X, w, bt), b);
}

// One FWSB step, X_out = v - bt * div_w(grad_w X + c), evaluated row by row
// without materializing the gradient. c = e - D. Returns ||X_out - X||^2 and
// ||X||^2 through the out-parameters.
void fwsb_sweep(const Image& v, const Image& X, const Image& cx, const Image& cy, const WeightField& w,
                double bt, std::vector<double>& gy_prev, std::vector<double>& gy_cur, Image& out,
                double& diff_sq, double& old_sq) {
  const std::size_t n = v.n();
  const double* x = X.data().data();
  const double* wx = w.wx.data().data();
  const double* wy = w.wy.data().data();
  diff_sq = 0.0;
  old_sq = 0.0;
  std::fill(gy_prev.begin(), gy_prev.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row = i * n;
    if (i + 1 < n) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = row + j;
        gy_cur[j] = wy[k] * (x[k + n] - x[k]) + cy[k];
      }
    } else {
      std::fill(gy_cur.begin(), gy_cur.end(), 0.0);
    }
    const double* wyp = i > 0 ? wy + row - n : nullptr;
    double gx_left = 0.0;  // weighted gx at (i, j-1), already times wx(i, j-1)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = row + j;
      double gx_here = 0.0;
      if (j + 1 < n) gx_here = wx[k] * (wx[k] * (x[k + 1] - x[k]) + cx[k]);
      double d = gx_left - gx_here - wy[k] * gy_cur[j];
      if (wyp) d += wyp[j] * gy_prev[j];
      const double xn = v[k] - bt * d;
      const double diff = xn - x[k];
      diff_sq += diff * diff;
      old_sq += x[k] * x[k];
      out[k] = xn;
      gx_left = gx_here;
    }
    std::swap(gy_prev, gy_cur);
  }
}

LinearSolveResult fwsb_iterate(const Image& v, const BregmanState& s, const WeightField& w,
                               const BregmanParams& p, bool record_residuals) {
  const std::size_t n = v.n();
  const double bt = p.beta * p.theta;
  const double tol = p.inner_tolerance();
  // The unexpanded argument X_q + 2 e_q - z_q equals X_q + e_q - D_q because
  // D_q = z_q - e_q.
  const Image cx = s.ex - s.Dx;
  const Image cy = s.ey - s.Dy;
  Image b;
  if (record_residuals) b = bregman_rhs(v, s, w, p);

  LinearSolveResult r;
  r.X = s.U;
  Image next(n);
  std::vector<double> gy_prev(n), gy_cur(n);
  while (r.iterations < p.max_inner) {
    double diff_sq = 0.0, old_sq = 0.0;
    fwsb_sweep(v, r.X, cx, cy, w, bt, gy_prev, gy_cur, next, diff_sq, old_sq);
    std::swap(r.X, next);
    ++r.iterations;
    if (record_residuals) r.residuals.push_back(residual_norm(r.X, b, w, bt));
    if (small_change(diff_sq, old_sq, tol)) {
      r.converged = true;
      break;
    }
  }
  return r;
}

LinearSolveResult gauss_seidel_iterate(const Image& v, const BregmanState& s, const WeightField& w,
                                       const BregmanParams& p, const SystemStencil& st,
                                       bool record_residuals) {
  const std::size_t n = v.n();
  const double tol = p.inner_tolerance();
  const Image b = bregman_rhs(v, s, w, p);

  LinearSolveResult r;
  r.X = s.U;
  double* x = r.X.data().data();
  // Out-of-range neighbours carry zero coefficients, so only the first and
  // last pixel of the grid need guarded reads.
  const double* L = st.left.data();
  const double* R = st.right.data();
  const double* Up = st.up.data();
  const double* Dn = st.down.data();
  const double* inv = st.inv_diag.data();
  const std::size_t nn = n * n;
  while (r.iterations < p.max_inner) {
    double diff_sq = 0.0, old_sq = 0.0;
    for (std::size_t k = 0; k < nn; ++k) {
      double acc = b[k];
      if (k >= n) acc += Up[k] * x[k - n];
      if (k >= 1) acc += L[k] * x[k - 1];
      if (k + 1 < nn) acc += R[k] * x[k + 1];
      if (k + n < nn) acc += Dn[k] * x[k + n];
      const double xk = acc * inv[k];
      const double d = xk - x[k];
      diff_sq += d * d;
      old_sq += x[k] * x[k];
      x[k] = xk;
    }
    ++r.iterations;
    if (record_residuals) r.residuals.push_back(residual_norm(r.X, b, w, p.beta * p.theta));
    if (small_change(diff_sq, old_sq, tol)) {
      r.converged = true;
      break;
    }
  }
  return r;
}

void require_theta_in_bound(const WeightField& w, const BregmanParams& p) {
  const double bound = theta_bound(w, p.beta);
  if (!(p.theta > 0.0 && p.theta < bound)) {
    throw ConfigError("theta = " + std::to_string(p.theta) + " outside the convergence interval (0, " +
                      std::to_string(bound) + ") of the identity splitting");
  }
}

}  // namespace

Image soft(const Image& z, double L) {
  Image out(z.n());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = soft(z[k], L);
  return out;
}

Image cut(const Image& z, double L) {
  Image out(z.n());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = cut(z[k], L);
  return out;
}

double weighted_tv(const Image& u, const WeightField& w) {
  const Gradient g = grad_w(u, w);
  return norm1(g.x) + norm1(g.y);
}

std::string to_string(InnerSolver s) {
  switch (s) {
    case InnerSolver::Fwsb: return "fwsb";
    case InnerSolver::GaussSeidel: return "gauss_seidel";
    case InnerSolver::Direct: return "direct";
  }
  return "unknown";
}

InnerSolver parse_inner_solver(std::string_view name) {
  if (name == "fwsb") return InnerSolver::Fwsb;
  if (name == "gauss_seidel" || name == "gs") return InnerSolver::GaussSeidel;
  if (name == "direct") return InnerSolver::Direct;
  throw ConfigError("unknown inner solver '" + std::string(name) + "'");
}

void BregmanParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be finite and >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (max_outer < 1 || max_inner < 1) throw ConfigError("iteration caps must be >= 1");
}

BregmanState BregmanState::start(const Image& v) {
  const std::size_t n = v.n();
  return {Image(n), Image(n), Image(n), Image(n), v};
}

double theta_bound(const WeightField& w, double beta) {
  if (!(beta > 0.0)) throw ConfigError("theta_bound: beta must be positive");
  const double norm = laplacian_inf_norm(w);
  if (!(norm > 0.0)) throw ConfigError("theta_bound: degenerate weights");
  return 1.0 / (beta * norm);
}

Image bregman_rhs(const Image& v, const BregmanState& s, const WeightField& w, const BregmanParams& p) {
  check_shapes(v, s, w);
  Image d = div_w(s.Dx - s.ex, s.Dy - s.ey, w);
  d *= p.beta * p.theta;
  return v + d;
}

Image apply_system(const Image& X, const WeightField& w, double beta_theta) {
  Image lap = laplacian_w(X, w);
  lap *= -beta_theta;
  return X + lap;
}

Image fwsb_table_step(const Image& v, const Image& X, const Image& zx, const Image& zy, const Image& ex,
                      const Image& ey, const WeightField& w, double beta_theta) {
  Gradient g = grad_w(X, w);
  for (std::size_t k = 0; k < X.size(); ++k) {
    g.x[k] += 2.0 * ex[k] - zx[k];
    g.y[k] += 2.0 * ey[k] - zy[k];
  }
  Image d = div_w(g.x, g.y, w);
  d *= beta_theta;
  return v - d;
}

LinearSolveResult fwsb_linear_solve(const Image& v, const BregmanState& s, const WeightField& w,
                                    const BregmanParams& p, bool record_residuals) {
  check_shapes(v, s, w);
  p.validate();
  require_theta_in_bound(w, p);
  return fwsb_iterate(v, s, w, p, record_residuals);
}

LinearSolveResult gauss_seidel_solve(const Image& v, const BregmanState& s, const WeightField& w,
                                     const BregmanParams& p, bool record_residuals) {
  check_shapes(v, s, w);
  p.validate();
  return gauss_seidel_iterate(v, s, w, p, SystemStencil(w, p.beta * p.theta), record_residuals);
}

LinearSolveResult direct_solve(const Image& v, const BregmanState& s, const WeightField& w,
                               const BregmanParams& p) {
  check_shapes(v, s, w);
  p.validate();
  const std::size_t n = v.n();
  if (n > 32) throw ConfigError("direct solve limited to n <= 32");
  const SystemStencil st(w, p.beta * p.theta);
  const auto nn = static_cast<Eigen::Index>(n * n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn, nn);
  for (std::size_t k = 0; k < n * n; ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    A(r, r) = st.diag[k];
    if (st.left[k] != 0.0) A(r, r - 1) = -st.left[k];
    if (st.right[k] != 0.0) A(r, r + 1) = -st.right[k];
    if (st.up[k] != 0.0) A(r, r - static_cast<Eigen::Index>(n)) = -st.up[k];
    if (st.down[k] != 0.0) A(r, r + static_cast<Eigen::Index>(n)) = -st.down[k];
  }
  const Image b = bregman_rhs(v, s, w, p);
  const Eigen::VectorXd x = A.llt().solve(Eigen::Map<const Eigen::VectorXd>(b.data().data(), nn));
  LinearSolveResult r;
  r.X = Image(n, std::vector<double>(x.data(), x.data() + nn));
  r.iterations = 1;
  r.converged = true;
  return r;
}

WsbResult wsb_solve(const Image& v, const WeightField& w, const BregmanParams& p, InnerSolver inner) {
  require_same_n(v, w.wx, "wsb_solve");
  p.validate();
  if (inner == InnerSolver::Fwsb) require_theta_in_bound(w, p);
  if (!(p.theta > 0.0)) throw ConfigError("wsb_solve: theta must be positive");
  if (inner == InnerSolver::Direct && v.n() > 32) throw ConfigError("direct solve limited to n <= 32");

  const double L = p.Lambda();
  std::optional<SystemStencil> stencil;
  if (inner == InnerSolver::GaussSeidel) stencil.emplace(w, p.beta * p.theta);

  WsbResult r;
  r.state = BregmanState::start(v);
  BregmanState& s = r.state;
  const std::size_t n = v.n();
  Image ux(n), uy(n);
  while (r.outer < p.max_outer) {
    grad_w_into(s.U, w, ux, uy);
    for (std::size_t k = 0; k < ux.size(); ++k) {
      const double zx = ux[k] + s.ex[k];
      const double zy = uy[k] + s.ey[k];
      s.ex[k] = cut(zx, L);
      s.ey[k] = cut(zy, L);
      s.Dx[k] = soft(zx, L);
      s.Dy[k] = soft(zy, L);
    }
    LinearSolveResult lin;
    switch (inner) {
      case InnerSolver::Fwsb: lin = fwsb_iterate(v, s, w, p, false); break;
      case InnerSolver::GaussSeidel: lin = gauss_seidel_iterate(v, s, w, p, *stencil, false); break;
      case InnerSolver::Direct: lin = direct_solve(v, s, w, p); break;
    }
    r.total_inner += lin.iterations;
    ++r.outer;
    const double diff = distance(lin.X, s.U);
    const double old = norm2(s.U);
    s.U = std::move(lin.X);
    if (old < kTinyNorm ? diff <= p.tau : diff <= p.tau * old) {
      r.converged = true;
      break;
    }
  }
  r.U = s.U;
  return r;
}

double objective_backward(const Image& u, const Image& v, const WeightField& w, double lambda,
                          double beta) {
  const double d = distance(u, v);
  return lambda * weighted_tv(u, w) + d * d / (2.0 * beta);
}

}  // namespace wtv
