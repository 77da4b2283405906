#pragma once

#include <cstddef>
#include <span>

namespace amsd {

/// Defaults for the adaptive scaling constant and the skewness clip.
inline constexpr double kDefaultAlpha = 0.25;
inline constexpr double kDefaultGammaMax = 2.0;

enum class MomentsStatus { Ok, Degenerate };

/// Population moments of one attribute at one node.
struct AttributeMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;    // divides by n
  double skewness = 0.0;  // E[(x-mean)^3] / stddev^3; 0 and meaningless when Degenerate
};

struct MomentsResult {
  AttributeMoments moments;
  MomentsStatus status = MomentsStatus::Degenerate;

  bool ok() const { return status == MomentsStatus::Ok; }
};

/// Single pass over `values` (finite, missing already removed). Power sums are
/// accumulated on values shifted by the first element. Degenerate when n < 2 or the
/// standard deviation is below 1e-12 of the largest magnitude seen.
MomentsResult compute_moments(std::span<const double> values);

struct AdaptiveMultipliers {
  double k_lower = 1.0;
  double k_upper = 1.0;
  double alpha = kDefaultAlpha;
  double gamma_max = kDefaultGammaMax;
};

/// d = alpha * min(|skewness|, gamma_max). Positive skew shrinks the lower multiplier
/// and stretches the upper one by d; negative skew does the opposite.
AdaptiveMultipliers adaptive_multipliers(double skewness, double alpha = kDefaultAlpha,
                                         double gamma_max = kDefaultGammaMax);

struct SplitPoints {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;

  bool operator==(const SplitPoints&) const = default;
};

/// (mean - stddev, mean, mean + stddev). Throws std::domain_error on Degenerate input.
SplitPoints split_points_msd(const MomentsResult& m);

/// (mean - k_lower*stddev, mean, mean + k_upper*stddev).
SplitPoints split_points_amsd(const MomentsResult& m, const AdaptiveMultipliers& k);

/// Half-open bins; a value equal to a cut point belongs to the upper bin.
inline int assign_bin(double x, const SplitPoints& s) {
  if (x < s.s1) return 0;
  if (x < s.s2) return 1;
  if (x < s.s3) return 2;
  return 3;
}

}  // namespace amsd
