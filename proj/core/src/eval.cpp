#include "amsd/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>
#include <thread>

#include "amsd/random.hpp"
#include "amsd/synthetic.hpp"

namespace amsd {

FoldPlan make_folds(std::span<const ClassIndex> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("make_folds: k must be >= 2");
  if (k > labels.size()) throw std::invalid_argument("make_folds: k exceeds row count");
  ClassIndex max_label = 0;
  for (auto l : labels) {
    if (l < 0) throw std::invalid_argument("make_folds: missing label");
    max_label = std::max(max_label, l);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t r = 0; r < labels.size(); ++r) by_class[static_cast<std::size_t>(labels[r])].push_back(r);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.assign(k, {});
  Rng rng(seed);
  std::size_t position = 0;
  for (auto& rows : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (auto r : rows) plan.folds[position++ % k].push_back(r);
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

std::vector<ModelSpec> standard_models(double alpha, double gamma_max, std::size_t trees,
                                       std::optional<std::size_t> mtry, std::uint64_t seed,
                                       std::size_t workers) {
  TreeConfig exhaustive;
  exhaustive.strategy = SplitterStrategy::exhaustive();
  TreeConfig msd;
  msd.strategy = SplitterStrategy::msd();
  TreeConfig amsd;
  amsd.strategy = SplitterStrategy::amsd(alpha, gamma_max);
  ForestConfig forest;
  forest.n_trees = trees;
  forest.mtry = mtry;
  forest.seed = seed;
  forest.workers = workers;
  forest.tree_config = amsd;
  return {{"C4.5", exhaustive}, {"C4.5-MSD", msd}, {"C4.5-AMSD", amsd}, {"RF-AMSD", forest}};
}

Clock steady_clock_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  };
}

std::vector<FoldResult> run_cv(const Dataset& ds, const ModelSpec& model, const FoldPlan& plan,
                               const CvOptions& options) {
  const Clock clock = options.clock ? options.clock : steady_clock_seconds();
  std::vector<char> in_fold(ds.row_count(), 0);
  std::vector<FoldResult> results;
  results.reserve(plan.folds.size());

  for (const auto& fold : plan.folds) {
    std::fill(in_fold.begin(), in_fold.end(), 0);
    for (auto r : fold) in_fold.at(r) = 1;
    std::vector<std::size_t> train;
    train.reserve(ds.row_count() - fold.size());
    for (std::size_t r = 0; r < ds.row_count(); ++r)
      if (!in_fold[r]) train.push_back(r);
    const RowView training(ds, std::move(train));

    FoldResult fr;
    fr.test_rows = fold.size();
    std::size_t correct = 0;
    if (const auto* tc = std::get_if<TreeConfig>(&model.model)) {
      const double t0 = clock();
      const DecisionTree tree = build_tree(training, *tc, options.tree_hooks);
      const double t1 = clock();
      fr.train_seconds = t1 - t0;
      fr.leaf_metric = static_cast<double>(tree.metrics().leaf_count);
      for (auto r : fold) correct += tree.predict(ds, r) == ds.labels()[r];
    } else {
      const auto& fc = std::get<ForestConfig>(model.model);
      const double t0 = clock();
      const Forest forest = build_forest(training, fc);
      const double t1 = clock();
      fr.train_seconds = t1 - t0;
      fr.leaf_metric = forest.mean_leaf_count();
      for (auto r : fold) correct += predict_forest(forest, ds, r) == ds.labels()[r];
    }
    fr.accuracy = fold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(fold.size());
    results.push_back(fr);
  }
  return results;
}

ModelResult summarize(std::string dataset, std::string model, std::vector<FoldResult> folds) {
  ModelResult m;
  m.dataset = std::move(dataset);
  m.model = std::move(model);
  m.folds = std::move(folds);
  const double n = static_cast<double>(m.folds.size());
  if (m.folds.empty()) return m;
  double acc = 0.0, leaves = 0.0;
  for (const auto& f : m.folds) {
    acc += f.accuracy;
    leaves += f.leaf_metric;
    m.train_seconds_total += f.train_seconds;
  }
  m.accuracy_mean = acc / n;
  m.leaf_mean = leaves / n;
  if (m.folds.size() > 1) {
    double ss = 0.0;
    for (const auto& f : m.folds) ss += (f.accuracy - m.accuracy_mean) * (f.accuracy - m.accuracy_mean);
    m.accuracy_stddev = std::sqrt(ss / (n - 1.0));
  }
  return m;
}

Environment capture_environment(std::uint64_t seed, std::size_t folds) {
  Environment env;
  env.seed = seed;
  env.folds = folds;
  std::string cpu;
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  if (cpu.empty()) cpu = "unknown cpu";
  env.hardware = cpu + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  env.timestamp = buf;
  return env;
}

EvalReport run_benchmark(std::span<const NamedDataset> datasets, std::span<const ModelSpec> models,
                         const BenchmarkOptions& options) {
  EvalReport report;
  report.environment = capture_environment(options.seed, options.k);
  for (const auto& named : datasets) {
    const Dataset ds = named.data.has_missing() ? apply_missing_policy(named.data, options.missing_policy)
                                                : named.data;
    const FoldPlan plan = make_folds(ds.labels(), options.k, options.seed);
    for (const auto& model : models)
      report.results.push_back(summarize(named.name, model.name, run_cv(ds, model, plan)));
  }
  return report;
}

EvalReport run_benchmark(std::span<const DatasetManifest> manifests, std::span<const ModelSpec> models,
                         const BenchmarkOptions& options) {
  std::vector<NamedDataset> datasets;
  for (const auto& m : manifests) datasets.push_back({m.name, load_dataset(m)});
  return run_benchmark(std::span<const NamedDataset>(datasets), models, options);
}

std::size_t tail_bin(double skewness) { return skewness < 0.0 ? 0 : 3; }

namespace {

// Training rows reaching each internal node of `tree`, in arena order.
std::vector<std::vector<std::size_t>> internal_views(const DecisionTree& tree, const Dataset& ds,
                                                     std::span<const std::size_t> rows) {
  const auto& nodes = tree.nodes();
  std::vector<std::vector<std::size_t>> at(nodes.size());
  for (auto r : rows) {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
      at[i].push_back(r);
      const auto c = route(*nodes[i].rule, ds, r);
      i = nodes[i].children[c ? *c : nodes[i].fallback_child];
    }
  }
  std::vector<std::vector<std::size_t>> views;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].is_leaf()) views.push_back(std::move(at[i]));
  return views;
}

}  // namespace

AblationResult run_gamma_ablation(const Dataset& ds, std::span<const double> gamma_values, double alpha,
                                  std::size_t k, std::uint64_t seed) {
  const FoldPlan plan = make_folds(ds.labels(), k, seed);
  AblationResult result;
  TreeConfig msd;
  msd.strategy = SplitterStrategy::msd();
  result.msd_reference = summarize("", "C4.5-MSD", run_cv(ds, {"C4.5-MSD", msd}, plan));

  // Empty tails are counted on one fixed set of node views (internal nodes of the MSD
  // trees grown on each training fold). Counting only the splits each AMSD tree ends up
  // choosing compares different nodes at every gamma_max and says little about the cut.
  struct Column {
    MomentsResult moments;
    std::vector<double> values;
  };
  std::vector<Column> columns;
  for (std::size_t f = 0; f < plan.k; ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < plan.k; ++g)
      if (g != f) train.insert(train.end(), plan.folds[g].begin(), plan.folds[g].end());
    std::sort(train.begin(), train.end());
    const auto tree = build_tree(RowView(ds, train), msd);
    for (const auto& view : internal_views(tree, ds, train)) {
      for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
        if (ds.schema().attribute(a).kind != AttributeKind::Continuous) continue;
        Column c;
        const auto col = ds.continuous(a);
        for (auto r : view)
          if (!is_missing(col[r])) c.values.push_back(col[r]);
        c.moments = compute_moments(c.values);
        if (c.moments.ok()) columns.push_back(std::move(c));
      }
    }
  }

  for (double g : gamma_values) {
    TreeConfig amsd;
    amsd.strategy = SplitterStrategy::amsd(alpha, g);
    AblationPoint point;
    point.gamma_max = g;
    for (const auto& c : columns) {
      const auto points = split_points_amsd(c.moments, adaptive_multipliers(c.moments.moments.skewness, alpha, g));
      const auto tail = static_cast<int>(tail_bin(c.moments.moments.skewness));
      ++point.proposals;
      if (std::none_of(c.values.begin(), c.values.end(), [&](double x) { return assign_bin(x, points) == tail; }))
        ++point.empty_outer_bins;
    }
    const auto summary = summarize("", "C4.5-AMSD", run_cv(ds, {"C4.5-AMSD", amsd}, plan));
    point.accuracy_mean = summary.accuracy_mean;
    point.accuracy_stddev = summary.accuracy_stddev;
    result.points.push_back(point);
  }
  return result;
}

double time_root_proposals(const RowView& view, const SplitterStrategy& strategy, std::size_t repetitions) {
  std::vector<double> samples;
  samples.reserve(repetitions);
  const std::size_t attributes = view.dataset().attribute_count();
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t a = 0; a < attributes; ++a) {
      auto p = propose(view, a, strategy);
      if (p) sink += p->score.info_gain;
    }
    const auto t1 = std::chrono::steady_clock::now();
    volatile double observed = sink;
    (void)observed;
    samples.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

std::vector<ScalingPoint> run_scaling_experiment(const ScalingSpec& spec) {
  if (spec.repetitions < 5) throw std::invalid_argument("scaling experiment needs >= 5 repetitions");
  if (!std::is_sorted(spec.sizes.begin(), spec.sizes.end()))
    throw std::invalid_argument("scaling sizes must be ascending");
  std::vector<ScalingPoint> points;
  std::vector<std::optional<double>> previous(spec.strategies.size());
  for (std::size_t n : spec.sizes) {
    synthetic::GaussianMixtureSpec g;
    g.rows = n;
    g.attributes = spec.attributes;
    g.seed = spec.seed;
    const Dataset ds = synthetic::gaussian_mixture(g);
    const RowView view = all_rows(ds);
    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
      ScalingPoint p;
      p.strategy = spec.strategies[s];
      p.n = n;
      p.median_seconds = time_root_proposals(view, p.strategy, spec.repetitions);
      if (previous[s]) p.growth_ratio = p.median_seconds / *previous[s];
      previous[s] = p.median_seconds;
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace amsd
