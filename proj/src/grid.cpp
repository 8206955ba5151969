#include "wtv/grid.hpp"

#include <algorithm>
#include <cmath>

namespace wtv {

double dot(const Image& a, const Image& b) {
  require_same_n(a, b, "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double dot(const ComplexGrid& a, const ComplexGrid& b) {
  require_same_n(a, b, "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  }
  return s;
}

double norm2(const Image& a) { return std::sqrt(dot(a, a)); }
double norm2(const ComplexGrid& a) { return std::sqrt(dot(a, a)); }

double norm1(const Image& a) {
  double s = 0.0;
  for (double x : a) s += std::abs(x);
  return s;
}

double max_value(const Image& a) {
  if (a.empty()) throw DimensionError("max_value of an empty grid");
  return *std::max_element(a.begin(), a.end());
}

bool all_finite(const Image& a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const ComplexGrid& a) {
  return std::all_of(a.begin(), a.end(), [](const std::complex<double>& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

double distance(const Image& a, const Image& b) {
  require_same_n(a, b, "distance");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

WeightField::WeightField(Image x, Image y) : wx(std::move(x)), wy(std::move(y)) {
  if (wx.n() != wy.n()) throw ConfigError("weight grids have different side lengths");
  auto positive = [](const Image& g) {
    return std::all_of(g.begin(), g.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
  };
  if (!positive(wx) || !positive(wy)) throw ConfigError("weights must be finite and strictly positive");
}

WeightField WeightField::uniform(std::size_t n, double value) {
  return WeightField(Image(n, value), Image(n, value));
}

void grad_w_into(const Image& u, const WeightField& w, Image& gx, Image& gy) {
  require_same_n(u, w.wx, "grad_w");
  const std::size_t n = u.n();
  if (gx.n() != n) gx = Image(n);
  if (gy.n() != n) gy = Image(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) gx(i, j) = w.wx(i, j) * (u(i, j + 1) - u(i, j));
    gx(i, n - 1) = 0.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gy(i, j) = w.wy(i, j) * (u(i + 1, j) - u(i, j));
  }
  for (std::size_t j = 0; j < n; ++j) gy(n - 1, j) = 0.0;
}

Gradient grad_w(const Image& u, const WeightField& w) {
  Gradient g;
  grad_w_into(u, w, g.x, g.y);
  return g;
}

Gradient grad(const Image& u) { return grad_w(u, WeightField::uniform(u.n())); }

void div_w_into(const Image& gx, const Image& gy, const WeightField& w, Image& out) {
  require_same_n(gx, gy, "div_w");
  require_same_n(gx, w.wx, "div_w");
  const std::size_t n = gx.n();
  if (out.n() != n) out = Image(n);
  // Entries of gx in the last column and gy in the last row have zero rows in
  // grad_w and so never contribute.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      if (j + 1 < n) s -= w.wx(i, j) * gx(i, j);
      if (j > 0) s += w.wx(i, j - 1) * gx(i, j - 1);
      if (i + 1 < n) s -= w.wy(i, j) * gy(i, j);
      if (i > 0) s += w.wy(i - 1, j) * gy(i - 1, j);
      out(i, j) = s;
    }
  }
}

Image div_w(const Image& gx, const Image& gy, const WeightField& w) {
  Image out;
  div_w_into(gx, gy, w, out);
  return out;
}

namespace {

struct Stencil {
  double left, right, up, down;
  double sum() const { return left + right + up + down; }
};

inline Stencil stencil_at(const WeightField& w, std::size_t i, std::size_t j) {
  const std::size_t n = w.n();
  auto sq = [](double x) { return x * x; };
  return {j > 0 ? sq(w.wx(i, j - 1)) : 0.0, j + 1 < n ? sq(w.wx(i, j)) : 0.0,
          i > 0 ? sq(w.wy(i - 1, j)) : 0.0, i + 1 < n ? sq(w.wy(i, j)) : 0.0};
}

}  // namespace

Image laplacian_w(const Image& u, const WeightField& w) {
  require_same_n(u, w.wx, "laplacian_w");
  const std::size_t n = u.n();
  Image out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Stencil s = stencil_at(w, i, j);
      double v = -s.sum() * u(i, j);
      if (j > 0) v += s.left * u(i, j - 1);
      if (j + 1 < n) v += s.right * u(i, j + 1);
      if (i > 0) v += s.up * u(i - 1, j);
      if (i + 1 < n) v += s.down * u(i + 1, j);
      out(i, j) = v;
    }
  }
  return out;
}

double laplacian_inf_norm(const WeightField& w) {
  const std::size_t n = w.n();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) best = std::max(best, 2.0 * stencil_at(w, i, j).sum());
  }
  return best;
}

}  // namespace wtv
