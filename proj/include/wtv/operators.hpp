#pragma once

#include <functional>
#include <string>
#include <variant>

#include "wtv/fft.hpp"
#include "wtv/grid.hpp"

namespace wtv {

/// Measurement data: real for blur, complex k-space for masked Fourier.
using Data = std::variant<Image, ComplexGrid>;

/// Real inner product on Data; both arguments must hold the same alternative.
double dot(const Data& a, const Data& b);
double norm2(const Data& a);
/// a - b, same alternative required.
Data subtract(const Data& a, const Data& b);
bool all_finite(const Data& a);

/// Linear measurement operator Phi: images -> data, with its exact adjoint.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual std::size_t n() const = 0;
  virtual Data apply(const Image& u) const = 0;
  virtual Image adjoint(const Data& r) const = 0;
  virtual std::string name() const = 0;

  /// Phi^T Phi u
  Image normal(const Image& u) const { return adjoint(apply(u)); }
};

class IdentityModel final : public ForwardModel {
 public:
  explicit IdentityModel(std::size_t n) : n_(n) {}
  std::size_t n() const override { return n_; }
  Data apply(const Image& u) const override;
  Image adjoint(const Data& r) const override;
  std::string name() const override { return "identity"; }

 private:
  std::size_t n_;
};

/// Sampled, unit-sum Gaussian kernel of odd side `size`, matching the usual
/// fspecial('gaussian', size, sigma) construction.
Image gaussian_kernel(std::size_t size, double sigma);

/// Periodic convolution with a truncated Gaussian kernel, applied in the
/// frequency domain. The kernel is symmetric, so the operator is self-adjoint.
class GaussianBlurModel final : public ForwardModel {
 public:
  GaussianBlurModel(std::size_t n, double sigma, std::size_t size);

  std::size_t n() const override { return n_; }
  Data apply(const Image& u) const override;
  Image adjoint(const Data& r) const override;
  std::string name() const override { return "gaussian_blur"; }

  Image blur(const Image& u) const;
  Image blur_adjoint(const Image& r) const;

  double sigma() const noexcept { return sigma_; }
  std::size_t kernel_size() const noexcept { return size_; }
  const Image& kernel() const noexcept { return kernel_; }
  /// DFT of the kernel wrapped around (0,0), unnormalized (eigenvalues of the
  /// circulant operator).
  const ComplexGrid& transfer() const noexcept { return transfer_; }

 private:
  Image filter(const Image& u, bool conjugate) const;

  std::size_t n_;
  double sigma_;
  std::size_t size_;
  Image kernel_;
  ComplexGrid transfer_;
  Fft2 fft_;
};

/// Phi = M o F: unitary 2-D DFT followed by a binary k-space mask. The mask is
/// given in centered layout (DC at (n/2, n/2)); data are in FFT layout.
class FourierMaskModel final : public ForwardModel {
 public:
  explicit FourierMaskModel(Image centered_mask);

  std::size_t n() const override { return n_; }
  Data apply(const Image& u) const override;
  Image adjoint(const Data& r) const override;
  std::string name() const override { return "fourier_mask"; }

  ComplexGrid sample(const Image& u) const;
  /// M o z, for data already in FFT layout.
  ComplexGrid restrict(const ComplexGrid& z) const;
  /// Real part of F^-1 (M o z).
  Image zero_filled(const ComplexGrid& z) const;

  const Image& centered_mask() const noexcept { return centered_; }
  double sampling_percentage() const;

 private:
  std::size_t n_;
  Image centered_;
  Image mask_;
  Fft2 fft_;
};

struct RadialMask {
  Image mask;  ///< centered layout, entries 0 or 1
  double sampling_percentage;
};

/// `lines` straight lines through the k-space centre at angles i*pi/lines,
/// rasterized one sample per step along the dominant axis. DC is always set.
RadialMask radial_mask(std::size_t n, std::size_t lines);

/// Largest-magnitude eigenvalue of a symmetric operator by power iteration.
/// Stops when the relative change of the estimate drops below tol.
double power_method(const std::function<Image(const Image&)>& op, Image start, double tol,
                    int max_iter);

/// lambda_max(Phi^T Phi), starting from the normalized all-ones image.
double power_method(const ForwardModel& model, double tol = 1e-8, int max_iter = 500);

}  // namespace wtv
