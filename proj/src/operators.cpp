#include "wtv/operators.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wtv {

double dot(const Data& a, const Data& b) {
  if (a.index() != b.index()) throw DimensionError("dot: real and complex data mixed");
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return dot(x, std::get<T>(b));
      },
      a);
}

double norm2(const Data& a) { return std::sqrt(dot(a, a)); }

Data subtract(const Data& a, const Data& b) {
  if (a.index() != b.index()) throw DimensionError("subtract: real and complex data mixed");
  return std::visit(
      [&](const auto& x) -> Data {
        using T = std::decay_t<decltype(x)>;
        return x - std::get<T>(b);
      },
      a);
}

bool all_finite(const Data& a) {
  return std::visit([](const auto& x) { return all_finite(x); }, a);
}

Data IdentityModel::apply(const Image& u) const {
  if (u.n() != n_) throw DimensionError("IdentityModel: size mismatch");
  return u;
}

Image IdentityModel::adjoint(const Data& r) const {
  const auto* img = std::get_if<Image>(&r);
  if (!img || img->n() != n_) throw DimensionError("IdentityModel: expected real data of matching size");
  return *img;
}

Image gaussian_kernel(std::size_t size, double sigma) {
  if (size % 2 == 0) throw ConfigError("blur kernel size must be odd");
  if (!(sigma > 0.0)) throw ConfigError("blur sigma must be positive");
  const auto half = static_cast<long>(size / 2);
  Image h(size);
  double peak = 0.0;
  for (long a = -half; a <= half; ++a) {
    for (long b = -half; b <= half; ++b) {
      const double v = std::exp(-static_cast<double>(a * a + b * b) / (2.0 * sigma * sigma));
      h(a + half, b + half) = v;
      peak = std::max(peak, v);
    }
  }
  double sum = 0.0;
  for (double& v : h) {
    if (v < std::numeric_limits<double>::epsilon() * peak) v = 0.0;
    sum += v;
  }
  h *= 1.0 / sum;
  return h;
}

GaussianBlurModel::GaussianBlurModel(std::size_t n, double sigma, std::size_t size)
    : n_(n), sigma_(sigma), size_(size), kernel_(gaussian_kernel(size, sigma)), fft_(n) {
  if (size > n) throw ConfigError("blur kernel larger than the image");
  const auto half = static_cast<long>(size / 2);
  const auto ln = static_cast<long>(n);
  ComplexGrid wrapped(n);
  for (long a = -half; a <= half; ++a) {
    for (long b = -half; b <= half; ++b) {
      wrapped(static_cast<std::size_t>((a + ln) % ln), static_cast<std::size_t>((b + ln) % ln)) +=
          kernel_(a + half, b + half);
    }
  }
  // Fft2 is unitary; the circulant eigenvalues are the unscaled DFT.
  transfer_ = fft_.forward(wrapped);
  transfer_ *= std::complex<double>(static_cast<double>(n), 0.0);
}

Image GaussianBlurModel::filter(const Image& u, bool conjugate) const {
  if (u.n() != n_) throw DimensionError("GaussianBlurModel: size mismatch");
  ComplexGrid f = fft_.forward(u);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] *= conjugate ? std::conj(transfer_[k]) : transfer_[k];
  const ComplexGrid back = fft_.inverse(f);
  Image out(n_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = back[k].real();
  return out;
}

Image GaussianBlurModel::blur(const Image& u) const { return filter(u, false); }
Image GaussianBlurModel::blur_adjoint(const Image& r) const { return filter(r, true); }

Data GaussianBlurModel::apply(const Image& u) const { return blur(u); }

Image GaussianBlurModel::adjoint(const Data& r) const {
  const auto* img = std::get_if<Image>(&r);
  if (!img) throw DimensionError("GaussianBlurModel: expected real data");
  return blur_adjoint(*img);
}

FourierMaskModel::FourierMaskModel(Image centered_mask)
    : n_(centered_mask.n()), centered_(std::move(centered_mask)), mask_(ifftshift(centered_)), fft_(n_) {
  for (double m : centered_) {
    if (m != 0.0 && m != 1.0) throw ConfigError("k-space mask entries must be 0 or 1");
  }
}

double FourierMaskModel::sampling_percentage() const {
  double s = 0.0;
  for (double m : centered_) s += m;
  return 100.0 * s / static_cast<double>(centered_.size());
}

ComplexGrid FourierMaskModel::sample(const Image& u) const {
  if (u.n() != n_) throw DimensionError("FourierMaskModel: size mismatch");
  ComplexGrid f = fft_.forward(u);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] *= mask_[k];
  return f;
}

ComplexGrid FourierMaskModel::restrict(const ComplexGrid& z) const {
  if (z.n() != n_) throw DimensionError("FourierMaskModel: size mismatch");
  ComplexGrid m = z;
  for (std::size_t k = 0; k < m.size(); ++k) m[k] *= mask_[k];
  return m;
}

Image FourierMaskModel::zero_filled(const ComplexGrid& z) const {
  const ComplexGrid back = fft_.inverse(restrict(z));
  Image out(n_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = back[k].real();
  return out;
}

Data FourierMaskModel::apply(const Image& u) const { return sample(u); }

Image FourierMaskModel::adjoint(const Data& r) const {
  const auto* z = std::get_if<ComplexGrid>(&r);
  if (!z) throw DimensionError("FourierMaskModel: expected complex k-space data");
  return zero_filled(*z);
}

RadialMask radial_mask(std::size_t n, std::size_t lines) {
  if (n < 16) throw ConfigError("radial_mask: n must be at least 16");
  if (lines < 1) throw ConfigError("radial_mask: need at least one line");
  Image mask(n);
  const auto c = static_cast<long>(n / 2);
  const auto h = static_cast<long>(n / 2);
  const auto ln = static_cast<long>(n);
  auto mark = [&](long row, long col) {
    if (row >= 0 && row < ln && col >= 0 && col < ln) mask(row, col) = 1.0;
  };
  for (std::size_t l = 0; l < lines; ++l) {
    const double angle = std::numbers::pi * static_cast<double>(l) / static_cast<double>(lines);
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    // std::round is symmetric about zero, so each line is point-symmetric about DC.
    if (std::abs(cs) >= std::abs(sn)) {
      const double slope = sn / cs;
      for (long k = -h; k <= h; ++k) mark(c - std::lround(k * slope), c + k);
    } else {
      const double slope = cs / sn;
      for (long k = -h; k <= h; ++k) mark(c - k, c + std::lround(k * slope));
    }
  }
  mask(c, c) = 1.0;
  double count = 0.0;
  for (double m : mask) count += m;
  return {std::move(mask), 100.0 * count / static_cast<double>(n * n)};
}

double power_method(const std::function<Image(const Image&)>& op, Image x, double tol, int max_iter) {
  double nx = norm2(x);
  if (nx == 0.0) throw ConfigError("power_method: zero start vector");
  x *= 1.0 / nx;
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Image y = op(x);
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    const double prev = estimate;
    estimate = ny;
    y *= 1.0 / ny;
    x = std::move(y);
    if (it > 0 && std::abs(estimate - prev) < tol * estimate) break;
  }
  return estimate;
}

double power_method(const ForwardModel& model, double tol, int max_iter) {
  return power_method([&](const Image& u) { return model.normal(u); }, Image(model.n(), 1.0), tol,
                      max_iter);
}

}  // namespace wtv
