#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace amsd {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the independent stream `stream` under `master`: mix64(master + golden * (stream + 1)).
/// Used for per-tree and per-repetition streams so parallel work is order-independent.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream);

/// mt19937_64 with platform-independent draws (the std distributions are not
/// specified bit-for-bit across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }
  double normal(double mean = 0.0, double stddev = 1.0);
  double exponential(double rate = 1.0);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace amsd
