#pragma once

#include <memory>

#include "wtv/grid.hpp"

namespace wtv {

/// Unitary 2-D DFT on n x n grids (both directions scaled by 1/n), backed by
/// FFTW. Plans are built once per instance; execution is reentrant.
class Fft2 {
 public:
  explicit Fft2(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  ComplexGrid forward(const ComplexGrid& x) const;
  ComplexGrid inverse(const ComplexGrid& x) const;
  ComplexGrid forward(const Image& x) const;

 private:
  struct Plans;
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

/// Move the DC sample from index (0,0) to (n/2, n/2), and back.
ComplexGrid fftshift(const ComplexGrid& g);
Image fftshift(const Image& g);
Image ifftshift(const Image& g);

}  // namespace wtv
