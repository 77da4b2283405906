#include <doctest.h>

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <vector>

#include "amsd/forest.hpp"
#include "amsd/random.hpp"
#include "amsd/synthetic.hpp"

using namespace amsd;
using doctest::Approx;

namespace {

Dataset mixture(std::uint64_t seed, std::size_t rows = 300) {
  synthetic::GaussianMixtureSpec g;
  g.rows = rows;
  g.seed = seed;
  return synthetic::gaussian_mixture(g);
}

ForestConfig small(std::size_t trees, std::uint64_t seed) {
  ForestConfig c;
  c.n_trees = trees;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("config validation and mtry default") {
  ForestConfig c;
  CHECK(c.effective_mtry(16) == 4);
  CHECK(c.effective_mtry(2) == 1);
  CHECK(c.effective_mtry(1) == 1);
  c.mtry = 5;
  CHECK_THROWS(c.validate(4));
  c.mtry = 0;
  CHECK_THROWS(c.validate(4));
  c.mtry.reset();
  c.n_trees = 0;
  CHECK_THROWS(c.validate(4));
}

TEST_CASE("identity bootstrap with every attribute reduces to a single tree") {
  const auto ds = mixture(1);
  auto c = small(1, 77);
  c.identity_bootstrap = true;
  c.mtry = ds.attribute_count();
  const auto f = build_forest(ds, c);
  REQUIRE(f.trees().size() == 1);
  const auto t = build_tree(all_rows(ds), c.tree_config);
  CHECK(f.trees()[0].nodes() == t.nodes());
}

TEST_CASE("a real bootstrap changes the tree") {
  const auto ds = mixture(1);
  auto c = small(1, 77);
  c.mtry = ds.attribute_count();
  const auto f = build_forest(ds, c);
  CHECK(f.trees()[0].nodes() != build_tree(all_rows(ds), c.tree_config).nodes());
}

TEST_CASE("bootstrap draws are reproducible, in range and sized") {
  std::vector<std::size_t> training(50);
  std::iota(training.begin(), training.end(), std::size_t{100});
  const auto a = bootstrap_rows(training, 50, 9);
  CHECK(a == bootstrap_rows(training, 50, 9));
  CHECK(a != bootstrap_rows(training, 50, 10));
  CHECK(bootstrap_rows(training, 17, 9).size() == 17);
  for (auto r : a) CHECK((r >= 100 && r < 150));
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() < a.size());  // with replacement
}

TEST_CASE("same seed: identical bootstrap lists and predictions") {
  const auto ds = mixture(2);
  auto c = small(12, 5);
  std::vector<std::vector<std::size_t>> first(12), second(12);
  std::mutex m;
  ForestHooks h1, h2;
  h1.on_bootstrap = [&](std::size_t t, const std::vector<std::size_t>& rows) {
    std::lock_guard lock(m);
    first[t] = rows;
  };
  h2.on_bootstrap = [&](std::size_t t, const std::vector<std::size_t>& rows) {
    std::lock_guard lock(m);
    second[t] = rows;
  };
  const auto a = build_forest(ds, c, h1);
  const auto b = build_forest(ds, c, h2);
  CHECK(first == second);
  CHECK(predict_all(a, ds) == predict_all(b, ds));
  CHECK(a.tree_seeds() == b.tree_seeds());
  for (std::size_t t = 0; t < 12; ++t) CHECK(a.tree_seeds()[t] == child_seed(5, t));
}

TEST_CASE("parallel build equals serial build") {
  const auto ds = mixture(3);
  auto c = small(24, 11);
  c.workers = 1;
  const auto serial = build_forest(ds, c);
  for (std::size_t w : {2, 4, 7}) {
    c.workers = w;
    const auto par = build_forest(ds, c);
    for (std::size_t t = 0; t < 24; ++t) CHECK(par.trees()[t].nodes() == serial.trees()[t].nodes());
    CHECK(serialize_forest(par) == serialize_forest(serial));
  }
}

TEST_CASE("every split uses an attribute from the node's drawn subset") {
  synthetic::GaussianMixtureSpec g;
  g.rows = 300;
  g.attributes = 9;
  g.seed = 4;
  const auto ds = synthetic::gaussian_mixture(g);
  auto c = small(10, 3);
  std::mutex m;
  std::size_t splits = 0, outside = 0, wrong_size = 0;
  ForestHooks h;
  h.on_split = [&](std::size_t, const SplitEvent& e) {
    std::lock_guard lock(m);
    if (e.candidates.size() > 3) ++wrong_size;
    if (!e.chosen) return;
    ++splits;
    if (std::find(e.candidates.begin(), e.candidates.end(), e.chosen->rule.attribute) == e.candidates.end()) ++outside;
  };
  build_forest(ds, c, h);
  CHECK(splits > 0);
  CHECK(outside == 0);
  CHECK(wrong_size == 0);
}

TEST_CASE("voting") {
  const auto ds = mixture(5, 120);
  const auto f = build_forest(ds, small(15, 2));
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    const auto p = predict_forest_proba(f, ds, r);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == Approx(1.0).epsilon(1e-12));
    const auto best = static_cast<ClassIndex>(std::max_element(p.begin(), p.end()) - p.begin());
    CHECK(predict_forest(f, ds, r) == best);
  }
}

TEST_CASE("vote ties go to the lowest class; unanimous votes give fraction one") {
  Schema s({{"x", AttributeKind::Continuous, {}}}, "cls", {"A", "B"});
  Dataset row(s, {{0.0}}, {{}}, {0});
  auto leaf = [&](ClassIndex c) {
    TreeNode n;
    n.distribution = {c == 0 ? 1u : 0u, c == 1 ? 1u : 0u};
    n.predicted = c;
    return DecisionTree(s, TreeConfig{}, {n});
  };
  std::vector<DecisionTree> trees;
  for (int i = 0; i < 100; ++i) trees.push_back(leaf(i % 2 ? 0 : 1));
  ForestConfig c;
  c.n_trees = 100;
  Forest tie(s, c, trees, std::vector<std::uint64_t>(100, 0));
  CHECK(predict_forest(tie, row, 0) == 0);

  std::vector<DecisionTree> same(100, leaf(1));
  Forest unanimous(s, c, same, std::vector<std::uint64_t>(100, 0));
  CHECK(predict_forest(unanimous, row, 0) == 1);
  CHECK(predict_forest_proba(unanimous, row, 0)[1] == 1.0);
}

TEST_CASE("forest beats a single tree on held-out separable data (median over seeds)") {
  std::vector<double> forest_acc, tree_acc;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    std::vector<double> a(200), b(200);
    std::vector<ClassIndex> ls(200);
    for (std::size_t i = 0; i < 200; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
      ls[i] = a[i] + 0.5 * b[i] > 0 ? 1 : 0;
    }
    Schema s({{"a", AttributeKind::Continuous, {}}, {"b", AttributeKind::Continuous, {}}}, "cls", {"n", "y"});
    Dataset ds(s, {a, b}, {{}, {}}, ls);
    std::vector<std::size_t> train(140), test(60);
    std::iota(train.begin(), train.end(), std::size_t{0});
    std::iota(test.begin(), test.end(), std::size_t{140});
    ForestConfig c = small(100, seed);
    const auto f = build_forest(RowView(ds, train), c);
    const auto t = build_tree(RowView(ds, train), c.tree_config);
    double fa = 0, ta = 0;
    for (auto r : test) {
      fa += predict_forest(f, ds, r) == ls[r];
      ta += t.predict(ds, r) == ls[r];
    }
    forest_acc.push_back(fa / 60);
    tree_acc.push_back(ta / 60);
  }
  std::sort(forest_acc.begin(), forest_acc.end());
  std::sort(tree_acc.begin(), tree_acc.end());
  CHECK(forest_acc[4] + forest_acc[5] >= tree_acc[4] + tree_acc[5]);
}

TEST_CASE("forest serialization round trip") {
  const auto ds = mixture(6, 150);
  auto c = small(8, 21);
  c.mtry = 2;
  const auto f = build_forest(ds, c);
  const auto text = serialize_forest(f);
  CHECK(model_format(text) == "amsd-forest/1");
  const auto back = deserialize_forest(text);
  CHECK(predict_all(back, ds) == predict_all(f, ds));
  CHECK(back.tree_seeds() == f.tree_seeds());
  CHECK(back.config().mtry == std::optional<std::size_t>(2));
  CHECK(serialize_forest(back) == text);
  CHECK_THROWS_AS(deserialize_forest(text.substr(0, 100)), ModelFormatError);
}
