#include <doctest.h>

#include <cmath>
#include <vector>

#include "amsd/random.hpp"
#include "amsd/stats.hpp"
#include "oracles.hpp"

using namespace amsd;
using doctest::Approx;

TEST_CASE("moments of small samples") {
  const std::vector<double> a{1, 2, 3};
  const auto m = compute_moments(a);
  REQUIRE(m.ok());
  CHECK(m.moments.mean == Approx(2.0));
  CHECK(m.moments.stddev == Approx(std::sqrt(2.0 / 3.0)));
  CHECK(std::fabs(m.moments.skewness) < 1e-12);

  const std::vector<double> flat{5, 5, 5};
  CHECK(compute_moments(flat).status == MomentsStatus::Degenerate);
  CHECK(compute_moments(flat).moments.stddev == 0.0);
  CHECK_FALSE(compute_moments(std::vector<double>{4.0}).ok());
  CHECK_FALSE(compute_moments(std::vector<double>{}).ok());
}

TEST_CASE("skewed five-point sample agrees with the two-pass reference") {
  const std::vector<double> xs{0, 0, 0, 0, 10};
  const auto want = oracle::two_pass_moments(xs);
  const auto got = compute_moments(xs);
  REQUIRE(got.ok());
  CHECK(got.moments.mean == Approx(static_cast<double>(want.mean)).epsilon(1e-12));
  CHECK(got.moments.stddev == Approx(static_cast<double>(want.stddev)).epsilon(1e-12));
  CHECK(got.moments.skewness == Approx(static_cast<double>(want.skewness)).epsilon(1e-9));
  // and the reference itself lands on the hand values
  CHECK(static_cast<double>(want.mean) == Approx(2.0));
  CHECK(static_cast<double>(want.stddev) == Approx(4.0));
  CHECK(static_cast<double>(want.skewness) == Approx(1.5));
}

TEST_CASE("moments are shift invariant and survive a large offset") {
  Rng rng(3);
  std::vector<double> xs(200), shifted(200);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng.exponential();
    shifted[i] = xs[i] + 1e8;
  }
  const auto a = compute_moments(xs).moments;
  const auto b = compute_moments(shifted).moments;
  CHECK(b.stddev == Approx(a.stddev).epsilon(1e-7));
  CHECK(b.skewness == Approx(a.skewness).epsilon(1e-5));
}

TEST_CASE("property: symmetric samples have near-zero skewness, stddev non-negative") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double centre = rng.normal(0, 100);
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) {
      const double d = rng.exponential();
      xs.push_back(centre - d);
      xs.push_back(centre + d);
    }
    const auto m = compute_moments(xs);
    REQUIRE(m.ok());
    CHECK(m.moments.stddev >= 0);
    CHECK(std::fabs(m.moments.skewness) <= 1e-9 * std::max(1.0, std::fabs(centre)));
  }
}

TEST_CASE("adaptive multipliers") {
  auto k = adaptive_multipliers(2.0);
  CHECK(k.k_lower == Approx(0.5));
  CHECK(k.k_upper == Approx(1.5));
  k = adaptive_multipliers(0.0, 0.9, 7.0);
  CHECK(k.k_lower == 1.0);
  CHECK(k.k_upper == 1.0);
  k = adaptive_multipliers(-1.2);
  CHECK(k.k_lower == Approx(1.3));
  CHECK(k.k_upper == Approx(0.7));
  k = adaptive_multipliers(5.7);
  CHECK(k.k_lower == Approx(0.5));
  CHECK(k.k_upper == Approx(1.5));
  k = adaptive_multipliers(1.5);
  CHECK(k.k_lower == Approx(0.625));
  CHECK(k.k_upper == Approx(1.375));
}

TEST_CASE("property: multipliers sum to two and stay in [0.5, 1.5] at defaults") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double g = (rng.uniform() - 0.5) * 40.0;
    const auto k = adaptive_multipliers(g);
    CHECK(std::fabs(k.k_lower + k.k_upper - 2.0) <= 1e-12);
    CHECK(k.k_lower >= 0.5);
    CHECK(k.k_upper <= 1.5);
  }
}

namespace {
MomentsResult ok_moments(double mean, double sd) {
  MomentsResult m;
  m.moments = {10, mean, sd, 0.0};
  m.status = MomentsStatus::Ok;
  return m;
}
}  // namespace

TEST_CASE("split points") {
  CHECK(split_points_msd(ok_moments(10, 2)) == SplitPoints{8, 10, 12});
  CHECK(split_points_msd(ok_moments(0, 1)) == SplitPoints{-1, 0, 1});
  AdaptiveMultipliers wide;
  wide.k_lower = 0.5;
  wide.k_upper = 1.5;
  CHECK(split_points_amsd(ok_moments(10, 2), wide) == SplitPoints{9, 10, 13});
  CHECK(split_points_amsd(ok_moments(10, 2), AdaptiveMultipliers{}) == split_points_msd(ok_moments(10, 2)));

  const std::vector<double> xs{0, 0, 0, 0, 10};
  const auto m = compute_moments(xs);
  const auto msd = split_points_msd(m);
  CHECK(msd.s1 == Approx(-2));
  CHECK(msd.s2 == Approx(2));
  CHECK(msd.s3 == Approx(6));
  const auto amsd = split_points_amsd(m, adaptive_multipliers(m.moments.skewness));
  CHECK(amsd.s1 == Approx(-0.5));
  CHECK(amsd.s2 == Approx(2));
  CHECK(amsd.s3 == Approx(7.5));

  CHECK_THROWS_AS(split_points_msd(compute_moments(std::vector<double>{1, 1})), std::domain_error);
}

TEST_CASE("bin assignment puts boundaries in the upper bin") {
  const SplitPoints s{8, 10, 12};
  CHECK(assign_bin(7, s) == 0);
  CHECK(assign_bin(8, s) == 1);
  CHECK(assign_bin(10, s) == 2);
  CHECK(assign_bin(11, s) == 2);
  CHECK(assign_bin(12, s) == 3);
}

TEST_CASE("property: split points strictly ordered when stddev and multipliers positive") {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> xs(2 + rng.below(50));
    for (auto& x : xs) x = rng.normal(rng.normal(0, 10), 1 + rng.uniform());
    const auto m = compute_moments(xs);
    REQUIRE(m.ok());
    const auto p = split_points_amsd(m, adaptive_multipliers(m.moments.skewness));
    CHECK(p.s1 < p.s2);
    CHECK(p.s2 < p.s3);
  }
}

TEST_CASE("random streams are reproducible and child seeds differ") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(child_seed(1, 0) != child_seed(1, 1));
  CHECK(child_seed(1, 0) != child_seed(2, 0));
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
