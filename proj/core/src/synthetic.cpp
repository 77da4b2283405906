#include "amsd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "amsd/random.hpp"

namespace amsd::synthetic {

namespace {

Schema continuous_schema(std::size_t attributes, std::size_t classes) {
  std::vector<Attribute> attrs;
  for (std::size_t a = 0; a < attributes; ++a) attrs.push_back({"x" + std::to_string(a), AttributeKind::Continuous, {}});
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
  return Schema(std::move(attrs), "class", std::move(labels));
}

ClassIndex maybe_flip(ClassIndex label, std::size_t classes, double noise, Rng& rng) {
  if (noise <= 0.0 || rng.uniform() >= noise) return label;
  const auto shift = 1 + rng.below(classes - 1);
  return static_cast<ClassIndex>((static_cast<std::size_t>(label) + shift) % classes);
}

}  // namespace

Dataset gaussian_mixture(const GaussianMixtureSpec& spec) {
  if (spec.classes < 2 || spec.rows < spec.classes || spec.attributes < 1)
    throw std::invalid_argument("gaussian_mixture: need >= 2 classes, rows >= classes, >= 1 attribute");
  Rng rng(spec.seed);
  const std::size_t components = std::max<std::size_t>(1, spec.components);
  std::vector<std::vector<double>> centres(spec.classes * components, std::vector<double>(spec.attributes));
  for (auto& c : centres)
    for (auto& v : c) v = rng.normal(0.0, spec.separation);

  std::vector<std::vector<double>> cols(spec.attributes, std::vector<double>(spec.rows));
  std::vector<ClassIndex> labels(spec.rows);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    const auto k = static_cast<std::size_t>(r % spec.classes);
    labels[r] = static_cast<ClassIndex>(k);
    const auto& centre = centres[k * components + static_cast<std::size_t>(rng.below(components))];
    for (std::size_t a = 0; a < spec.attributes; ++a) cols[a][r] = rng.normal(centre[a], 1.0);
  }
  return Dataset(continuous_schema(spec.attributes, spec.classes), std::move(cols), {}, std::move(labels));
}

Dataset skewed_exponential(const SkewedSpec& spec) {
  if (spec.rows < 2) throw std::invalid_argument("skewed_exponential: need >= 2 rows");
  Rng rng(spec.seed);
  const std::size_t width = 1 + spec.noise_attributes;
  std::vector<std::vector<double>> cols(width, std::vector<double>(spec.rows));
  std::vector<ClassIndex> labels(spec.rows);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    const double x = rng.exponential(1.0);
    cols[0][r] = x;
    for (std::size_t a = 1; a < width; ++a) cols[a][r] = rng.normal();
    labels[r] = maybe_flip(x < spec.boundary ? 0 : 1, 2, spec.label_noise, rng);
  }
  return Dataset(continuous_schema(width, 2), std::move(cols), {}, std::move(labels));
}

Dataset heavy_tail_with_outlier(const HeavyTailSpec& spec) {
  if (spec.rows < 3 || spec.attributes < 1) throw std::invalid_argument("heavy_tail_with_outlier: too small");
  Rng rng(spec.seed);
  std::vector<std::vector<double>> cols(spec.attributes, std::vector<double>(spec.rows));
  std::vector<ClassIndex> labels(spec.rows);
  const double median = 1.0;  // exp(0)
  for (std::size_t r = 0; r + 1 < spec.rows; ++r) {
    for (std::size_t a = 0; a < spec.attributes; ++a) cols[a][r] = std::exp(rng.normal(0.0, spec.sigma));
    labels[r] = maybe_flip(cols[0][r] < median ? 0 : 1, 2, spec.label_noise, rng);
  }
  const std::size_t last = spec.rows - 1;
  for (std::size_t a = 0; a < spec.attributes; ++a) cols[a][last] = std::exp(rng.normal(0.0, spec.sigma));
  cols[0][last] = spec.outlier_scale * std::exp(spec.sigma);
  labels[last] = 1;
  return Dataset(continuous_schema(spec.attributes, 2), std::move(cols), {}, std::move(labels));
}

Dataset uniform_noise(std::size_t rows, std::size_t attributes, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(attributes, std::vector<double>(rows));
  std::vector<ClassIndex> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t a = 0; a < attributes; ++a) cols[a][r] = rng.uniform() * 100.0;
    labels[r] = static_cast<ClassIndex>(rng.below(classes));
  }
  return Dataset(continuous_schema(attributes, classes), std::move(cols), {}, std::move(labels));
}

}  // namespace amsd::synthetic
