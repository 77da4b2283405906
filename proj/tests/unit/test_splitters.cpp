#include <doctest.h>

#include <cmath>
#include <vector>

#include "amsd/random.hpp"
#include "amsd/splitters.hpp"
#include "oracles.hpp"

using namespace amsd;
using doctest::Approx;

namespace {

Dataset numeric(std::vector<double> xs, std::vector<ClassIndex> labels, std::size_t classes = 2) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back("c" + std::to_string(c));
  Schema s({{"x", AttributeKind::Continuous, {}}}, "cls", names);
  return Dataset(s, {std::move(xs)}, {{}}, std::move(labels));
}

Dataset nominal(std::vector<CategoryCode> codes, std::vector<ClassIndex> labels, std::size_t arity) {
  std::vector<std::string> cats;
  for (std::size_t c = 0; c < arity; ++c) cats.push_back("v" + std::to_string(c));
  Schema s({{"k", AttributeKind::Categorical, cats}}, "cls", {"A", "B"});
  return Dataset(s, {{}}, {std::move(codes)}, std::move(labels));
}

// weighted child entropy by explicit sums
double brute_gain(const std::vector<std::vector<std::size_t>>& children) {
  std::vector<std::size_t> parent(children.front().size(), 0);
  double n = 0;
  for (const auto& c : children)
    for (std::size_t k = 0; k < c.size(); ++k) {
      parent[k] += c[k];
      n += static_cast<double>(c[k]);
    }
  double weighted = 0;
  for (const auto& c : children) {
    double size = 0;
    for (auto v : c) size += static_cast<double>(v);
    weighted += size / n * oracle::entropy(c);
  }
  return oracle::entropy(parent) - weighted;
}

}  // namespace

TEST_CASE("class entropy") {
  CHECK(class_entropy(std::vector<std::size_t>{5, 5}) == Approx(1.0));
  CHECK(class_entropy(std::vector<std::size_t>{10, 0}) == 0.0);
  CHECK(class_entropy(std::vector<std::size_t>{9, 5}) == Approx(0.94029).epsilon(1e-5));
}

TEST_CASE("score_partition") {
  const std::vector<ClassIndex> labels{0, 0, 1, 1};
  auto s = score_partition(labels, std::vector<std::size_t>{0, 0, 1, 1}, 2, 2);
  CHECK(s.info_gain == Approx(1.0));
  CHECK(s.split_info == Approx(1.0));
  CHECK(s.gain_ratio == Approx(1.0));
  s = score_partition(labels, std::vector<std::size_t>{0, 1, 0, 1}, 2, 2);
  CHECK(s.info_gain == Approx(0.0));

  // A,A,A,B: B alone in child 3, the As spread 2/1/0 over children 0..2
  const std::vector<ClassIndex> skew{0, 0, 0, 1};
  s = score_partition(skew, std::vector<std::size_t>{0, 0, 1, 3}, 4, 2);
  CHECK(s.info_gain == Approx(brute_gain({{2, 0}, {1, 0}, {0, 0}, {0, 1}})));
  CHECK(s.child_counts == std::vector<std::size_t>{2, 1, 0, 1});
  CHECK(s.split_info == Approx(1.5));

  // a single non-empty child has no split information
  s = score_partition(labels, std::vector<std::size_t>{2, 2, 2, 2}, 4, 2);
  CHECK_FALSE(s.gain_ratio_defined());
  CHECK(std::isnan(s.gain_ratio));
}

TEST_CASE("property: info gain bounded by parent entropy, ratio consistent") {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng.below(40), arity = 2 + rng.below(4), classes = 2 + rng.below(3);
    std::vector<ClassIndex> labels(n);
    std::vector<std::size_t> assignment(n);
    std::vector<std::size_t> counts(classes, 0);
    for (std::size_t r = 0; r < n; ++r) {
      labels[r] = static_cast<ClassIndex>(rng.below(classes));
      assignment[r] = rng.below(arity);
      ++counts[static_cast<std::size_t>(labels[r])];
    }
    const auto s = score_partition(labels, assignment, arity, classes);
    CHECK(s.info_gain >= 0.0);
    CHECK(s.info_gain <= class_entropy(counts) + 1e-9);
    if (s.split_info > kSplitInfoEpsilon) CHECK(s.gain_ratio == Approx(s.info_gain / s.split_info));
  }
}

TEST_CASE("binned proposals") {
  SUBCASE("constant attribute gives nothing") {
    const auto ds = numeric({3, 3, 3}, {0, 1, 0});
    CHECK_FALSE(propose_msd(all_rows(ds), 0));
    CHECK_FALSE(propose_amsd(all_rows(ds), 0));
  }
  SUBCASE("two rows") {
    const auto ds = numeric({1.0, 2.0}, {0, 1});
    const auto p = propose_msd(all_rows(ds), 0);
    REQUIRE(p);
    CHECK(std::get<BinnedSplit>(p->rule.kind).points == SplitPoints{1.0, 1.5, 2.0});
    CHECK(p->score.child_counts == std::vector<std::size_t>{0, 1, 0, 1});
    CHECK(p->score.info_gain == Approx(1.0));
  }
  SUBCASE("symmetric bimodal, classes split at the mean") {
    std::vector<double> xs;
    std::vector<ClassIndex> ls;
    for (double v : {-5.0, -4.0, -3.0}) xs.push_back(v), ls.push_back(0);
    for (double v : {3.0, 4.0, 5.0}) xs.push_back(v), ls.push_back(1);
    const auto ds = numeric(xs, ls);
    const auto p = propose_msd(all_rows(ds), 0);
    REQUIRE(p);
    const auto pts = std::get<BinnedSplit>(p->rule.kind).points;
    CHECK(pts.s2 == Approx(0.0));
    std::vector<std::vector<std::size_t>> bins(4, std::vector<std::size_t>(2, 0));
    for (std::size_t i = 0; i < xs.size(); ++i) ++bins[static_cast<std::size_t>(assign_bin(xs[i], pts))][static_cast<std::size_t>(ls[i])];
    CHECK(p->score.info_gain == Approx(brute_gain(bins)));
  }
  SUBCASE("zero skew: AMSD equals MSD") {
    const auto ds = numeric({-3, -1, 1, 3}, {0, 1, 1, 0});
    const auto a = propose_amsd(all_rows(ds), 0);
    const auto m = propose_msd(all_rows(ds), 0);
    REQUIRE(a);
    REQUIRE(m);
    CHECK(a->rule == m->rule);
  }
  SUBCASE("five-point skewed view") {
    const auto ds = numeric({0, 0, 0, 0, 10}, {0, 0, 0, 0, 1});
    BinnedDiagnostics diag;
    const auto p = propose_amsd(all_rows(ds), 0, kDefaultAlpha, kDefaultGammaMax, &diag);
    REQUIRE(p);
    CHECK(diag.multipliers.k_lower == Approx(0.625));
    CHECK(diag.multipliers.k_upper == Approx(1.375));
    const auto pts = std::get<BinnedSplit>(p->rule.kind).points;
    CHECK(pts.s1 == Approx(-0.5));
    CHECK(pts.s3 == Approx(7.5));
    CHECK(p->score.child_counts == std::vector<std::size_t>{0, 4, 0, 1});
  }
  SUBCASE("skewness beyond the clip lands on the extreme multipliers") {
    std::vector<double> xs(40, 0.0);
    xs.back() = 100.0;
    std::vector<ClassIndex> ls(40, 0);
    ls.back() = 1;
    const auto ds = numeric(xs, ls);
    BinnedDiagnostics diag;
    const auto p = propose_amsd(all_rows(ds), 0, kDefaultAlpha, kDefaultGammaMax, &diag);
    REQUIRE(p);
    REQUIRE(diag.moments.moments.skewness > 2.0);
    const auto& m = diag.moments.moments;
    const auto pts = std::get<BinnedSplit>(p->rule.kind).points;
    CHECK(pts.s1 == Approx(m.mean - 0.5 * m.stddev));
    CHECK(pts.s3 == Approx(m.mean + 1.5 * m.stddev));
  }
  SUBCASE("missing values are left out of the moments") {
    const auto ds = numeric({1.0, kMissingValue, 2.0}, {0, 1, 1});
    BinnedDiagnostics diag;
    REQUIRE(propose_msd(all_rows(ds), 0, &diag));
    CHECK(diag.moments.moments.n == 2);
  }
}

TEST_CASE("exhaustive proposals") {
  SUBCASE("perfect separation") {
    const auto ds = numeric({1, 2, 3, 4}, {0, 0, 1, 1});
    const auto p = propose_exhaustive(all_rows(ds), 0);
    REQUIRE(p);
    CHECK(std::get<ThresholdSplit>(p->rule.kind).threshold == 2.5);
    CHECK(p->score.info_gain == Approx(1.0));
  }
  SUBCASE("identical values") {
    const auto ds = numeric({2, 2, 2}, {0, 1, 0});
    CHECK_FALSE(propose_exhaustive(all_rows(ds), 0));
  }
  SUBCASE("A,B,A: both midpoints tie, the smaller wins") {
    const std::vector<double> xs{1, 2, 3};
    const auto ds = numeric(xs, {0, 1, 0});
    const auto p = propose_exhaustive(all_rows(ds), 0);
    const auto want = oracle::brute_force_threshold(xs, std::vector<int>{0, 1, 0}, 2);
    REQUIRE(p);
    REQUIRE(want);
    CHECK(std::get<ThresholdSplit>(p->rule.kind).threshold == want->threshold);
    CHECK(want->threshold == 1.5);
    CHECK(p->score.info_gain == Approx(want->gain));
  }
  SUBCASE("adjacent doubles fall back to the upper value") {
    const double a = 1.0, b = std::nextafter(1.0, 2.0);
    CHECK(midpoint_threshold(a, b) == b);
    CHECK(midpoint_threshold(1.0, 2.0) == 1.5);
  }
}

TEST_CASE("property: exhaustive proposal matches the brute-force scan") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng.below(30);
    std::vector<double> xs(n);
    std::vector<int> ls(n);
    std::vector<ClassIndex> cls(n);
    for (std::size_t r = 0; r < n; ++r) {
      xs[r] = static_cast<double>(rng.below(6));
      ls[r] = static_cast<int>(rng.below(2));
      cls[r] = ls[r];
    }
    const auto ds = numeric(xs, cls);
    const auto got = propose_exhaustive(all_rows(ds), 0);
    const auto want = oracle::brute_force_threshold(xs, ls, 2);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(std::get<ThresholdSplit>(got->rule.kind).threshold == want->threshold);
  }
}

TEST_CASE("categorical proposals") {
  SUBCASE("two categories separating two classes") {
    const auto ds = nominal({0, 0, 1, 1}, {0, 0, 1, 1}, 2);
    const auto p = propose_categorical(all_rows(ds), 0);
    REQUIRE(p);
    CHECK(p->score.gain_ratio == Approx(1.0));
    CHECK(p->rule.arity() == 2);
  }
  SUBCASE("single category present") {
    const auto ds = nominal({1, 1, 1}, {0, 1, 0}, 3);
    CHECK_FALSE(propose_categorical(all_rows(ds), 0));
  }
  SUBCASE("three categories, mixed labels") {
    const auto ds = nominal({0, 0, 1, 1, 1, 2}, {0, 1, 0, 0, 1, 1}, 3);
    const auto p = propose_categorical(all_rows(ds), 0);
    REQUIRE(p);
    CHECK(p->score.info_gain == Approx(brute_gain({{1, 1}, {2, 1}, {0, 1}})));
  }
}

TEST_CASE("routing") {
  const SplitRule binned{0, BinnedSplit{{8, 10, 12}}};
  CHECK(route_value(binned, 11) == 2u);
  CHECK_FALSE(route_value(binned, kMissingValue));
  const SplitRule threshold{0, ThresholdSplit{2.5}};
  CHECK(route_value(threshold, 2.5) == 1u);
  CHECK(route_value(threshold, 2.4) == 0u);
  const SplitRule cat{0, CategoricalSplit{3}};
  CHECK(route_code(cat, 2) == 2u);
  CHECK_FALSE(route_code(cat, kMissingCode));
  CHECK_FALSE(route_code(cat, 3));
}

TEST_CASE("property: binned routing is total over finite values") {
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.normal(), b = a + rng.exponential(), c = b + rng.exponential();
    const SplitRule r{0, BinnedSplit{{a, b, c}}};
    const auto child = route_value(r, rng.normal(0, 3));
    REQUIRE(child);
    CHECK(*child < 4);
  }
}

TEST_CASE("gain-ratio selection") {
  auto prop = [](double gain, double split_info) {
    Proposal p{SplitRule{0, ThresholdSplit{0}}, {}};
    p.score.info_gain = gain;
    p.score.split_info = split_info;
    p.score.gain_ratio = split_info > kSplitInfoEpsilon ? gain / split_info : std::nan("");
    return p;
  };
  SUBCASE("low-gain candidate with a tiny split_info is filtered by the mean-gain rule") {
    const std::vector<Proposal> c{prop(0.5, 1.0), prop(0.05, 0.01), prop(0.4, 1.0)};
    CHECK(select_best(c) == 0u);
  }
  SUBCASE("ties go to the lowest index") {
    const std::vector<Proposal> c{prop(0.3, 1.0), prop(0.3, 1.0)};
    CHECK(select_best(c) == 0u);
  }
  SUBCASE("no positive gain") {
    const std::vector<Proposal> c{prop(0.0, 1.0)};
    CHECK_FALSE(select_best(c));
  }
  SUBCASE("undefined gain ratio is never chosen") {
    const std::vector<Proposal> c{prop(0.5, 0.0), prop(0.5, 1.0)};
    CHECK(select_best(c) == 1u);
  }
}

TEST_CASE("strategy validation") {
  CHECK_NOTHROW(SplitterStrategy::amsd().validate());
  CHECK_THROWS(SplitterStrategy::amsd(-0.1, 2.0).validate());
  CHECK_THROWS(SplitterStrategy::amsd(0.25, -1.0).validate());
  CHECK_THROWS(SplitterStrategy::amsd(0.5, 4.0).validate());
  CHECK(strategy_kind_from_string("msd") == SplitterStrategy::Kind::MSD);
  CHECK_THROWS(strategy_kind_from_string("gini"));
}
