#include "wtv/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace wtv {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
Grid<T> shift_by(const Grid<T>& g, std::size_t s) {
  const std::size_t n = g.n();
  Grid<T> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out((i + s) % n, (j + s) % n) = g(i, j);
  }
  return out;
}

}  // namespace

struct Fft2::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Plans(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    ComplexGrid scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data().data());
    const int ni = static_cast<int>(n);
    fwd = fftw_plan_dft_2d(ni, ni, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv = fftw_plan_dft_2d(ni, ni, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd || !inv) throw Error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

Fft2::Fft2(std::size_t n) : n_(n), plans_(std::make_shared<const Plans>(n)) {
  if (n == 0) throw DimensionError("FFT of an empty grid");
}

namespace {

ComplexGrid run(fftw_plan plan, ComplexGrid x) {
  auto* p = reinterpret_cast<fftw_complex*>(x.data().data());
  fftw_execute_dft(plan, p, p);
  x *= std::complex<double>(1.0 / static_cast<double>(x.n()), 0.0);
  return x;
}

}  // namespace

ComplexGrid Fft2::forward(const ComplexGrid& x) const {
  if (x.n() != n_) throw DimensionError("Fft2::forward: size mismatch");
  return run(plans_->fwd, x);
}

ComplexGrid Fft2::inverse(const ComplexGrid& x) const {
  if (x.n() != n_) throw DimensionError("Fft2::inverse: size mismatch");
  return run(plans_->inv, x);
}

ComplexGrid Fft2::forward(const Image& x) const {
  ComplexGrid c(x.n());
  for (std::size_t k = 0; k < x.size(); ++k) c[k] = x[k];
  return forward(c);
}

ComplexGrid fftshift(const ComplexGrid& g) { return shift_by(g, g.n() / 2); }
Image fftshift(const Image& g) { return shift_by(g, g.n() / 2); }
Image ifftshift(const Image& g) { return shift_by(g, g.n() - g.n() / 2); }

}  // namespace wtv
