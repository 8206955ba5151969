#pragma once

#include <chrono>

#include "wtv/grid.hpp"

namespace wtv {

struct QualityReport {
  double psnr;     ///< dB; +inf when rmse == 0
  double rmse;
  double max_ref;  ///< peak of the reference image
};

/// sqrt(sum (u - x)^2 / N^2)
double rmse(const Image& u, const Image& x);

/// 20 log10(max(x) / rmse(u, x)); the peak is taken over the reference x only.
/// Returns +infinity when u == x. Throws ConfigError when max(x) <= 0.
double psnr(const Image& u, const Image& x);

QualityReport quality(const Image& u, const Image& x);

/// Wall-clock stopwatch that accumulates into a caller-owned total.
class ScopedTimer {
 public:
  using clock = std::chrono::steady_clock;

  explicit ScopedTimer(double& total_seconds) : total_(total_seconds), start_(clock::now()) {}
  ~ScopedTimer() { total_ += elapsed(); }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

  double elapsed() const { return std::chrono::duration<double>(clock::now() - start_).count(); }

 private:
  double& total_;
  clock::time_point start_;
};

}  // namespace wtv
