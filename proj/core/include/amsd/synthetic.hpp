#pragma once

#include <cstddef>
#include <cstdint>

#include "amsd/data.hpp"

namespace amsd::synthetic {

/// Each class is a mixture of `components` unit-variance Gaussians whose centre
/// coordinates are drawn from N(0, separation^2). Rows cycle through the classes.
/// All attributes continuous.
struct GaussianMixtureSpec {
  std::size_t rows = 500;
  std::size_t attributes = 4;
  std::size_t classes = 2;
  std::size_t components = 2;
  double separation = 1.5;
  std::uint64_t seed = 0;
};
Dataset gaussian_mixture(const GaussianMixtureSpec& spec);

/// One exponential attribute (rate 1, so mean = stddev = 1) whose class boundary sits
/// at `boundary` (below the mean), plus `noise_attributes` standard normal columns.
/// Each label is flipped with probability `label_noise`.
struct SkewedSpec {
  std::size_t rows = 2000;
  double boundary = 0.5;
  double label_noise = 0.1;
  std::size_t noise_attributes = 2;
  std::uint64_t seed = 0;
};
Dataset skewed_exponential(const SkewedSpec& spec);

/// Log-normal attributes with a label driven by the first one, plus a single extreme
/// outlier row appended to the first attribute.
struct HeavyTailSpec {
  std::size_t rows = 1000;
  std::size_t attributes = 3;
  double sigma = 1.0;
  double outlier_scale = 1000.0;
  double label_noise = 0.05;
  std::uint64_t seed = 0;
};
Dataset heavy_tail_with_outlier(const HeavyTailSpec& spec);

/// Uniform continuous attributes and random labels, for timing runs.
Dataset uniform_noise(std::size_t rows, std::size_t attributes, std::size_t classes, std::uint64_t seed);

}  // namespace amsd::synthetic
