#include "amsd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amsd {

MomentsResult compute_moments(std::span<const double> values) {
  MomentsResult result;
  const std::size_t n = values.size();
  result.moments.n = n;
  if (n == 0) return result;

  const double shift = values.front();
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double magnitude = std::abs(shift);
  for (double x : values) {
    const double d = x - shift;
    const double d2 = d * d;
    s1 += d;
    s2 += d2;
    s3 += d2 * d;
    magnitude = std::max(magnitude, std::abs(x));
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const double mean_d = s1 * inv_n;
  const double raw2 = s2 * inv_n;
  const double raw3 = s3 * inv_n;
  const double m2 = std::max(0.0, raw2 - mean_d * mean_d);
  const double m3 = raw3 - 3.0 * mean_d * raw2 + 2.0 * mean_d * mean_d * mean_d;

  auto& m = result.moments;
  m.mean = shift + mean_d;
  m.stddev = std::sqrt(m2);
  if (n < 2 || m.stddev <= 1e-12 * magnitude || m.stddev == 0.0) {
    m.skewness = 0.0;
    result.status = MomentsStatus::Degenerate;
    return result;
  }
  m.skewness = m3 / (m2 * m.stddev);
  result.status = MomentsStatus::Ok;
  return result;
}

AdaptiveMultipliers adaptive_multipliers(double skewness, double alpha, double gamma_max) {
  AdaptiveMultipliers k;
  k.alpha = alpha;
  k.gamma_max = gamma_max;
  const double d = alpha * std::min(std::abs(skewness), gamma_max);
  if (skewness > 0.0) {
    k.k_lower = 1.0 - d;
    k.k_upper = 1.0 + d;
  } else if (skewness < 0.0) {
    k.k_lower = 1.0 + d;
    k.k_upper = 1.0 - d;
  }
  return k;
}

SplitPoints split_points_msd(const MomentsResult& m) {
  if (!m.ok()) throw std::domain_error("split points requested for degenerate moments");
  const auto& mo = m.moments;
  return {mo.mean - mo.stddev, mo.mean, mo.mean + mo.stddev};
}

SplitPoints split_points_amsd(const MomentsResult& m, const AdaptiveMultipliers& k) {
  if (!m.ok()) throw std::domain_error("split points requested for degenerate moments");
  const auto& mo = m.moments;
  return {mo.mean - k.k_lower * mo.stddev, mo.mean, mo.mean + k.k_upper * mo.stddev};
}

}  // namespace amsd
