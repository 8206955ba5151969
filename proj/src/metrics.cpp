#include "wtv/metrics.hpp"

#include <cmath>
#include <limits>

namespace wtv {

double rmse(const Image& u, const Image& x) {
  require_same_n(u, x, "rmse");
  const double d = distance(u, x);
  return std::sqrt(d * d / static_cast<double>(x.size()));
}

double psnr(const Image& u, const Image& x) {
  const double peak = max_value(x);
  if (!(peak > 0.0)) throw ConfigError("psnr: reference peak must be positive");
  const double e = rmse(u, x);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / e);
}

QualityReport quality(const Image& u, const Image& x) {
  return {psnr(u, x), rmse(u, x), max_value(x)};
}

}  // namespace wtv
