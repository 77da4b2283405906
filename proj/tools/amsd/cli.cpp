#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amsd/data.hpp"
#include "amsd/eval.hpp"
#include "amsd/forest.hpp"
#include "amsd/io_util.hpp"
#include "amsd/synthetic.hpp"
#include "amsd/tree.hpp"

namespace amsd::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::vector<std::string> data;
  std::vector<std::string> manifests;
  std::string model_out;
  std::string model_in;
  std::string strategy = "amsd";
  std::vector<std::string> strategies{"exhaustive", "msd", "amsd"};
  double alpha = kDefaultAlpha;
  double gamma_max = kDefaultGammaMax;
  std::vector<double> gamma_values{0.0, 0.5, 1.0, 2.0, 4.0};
  std::size_t trees = 100;
  std::size_t mtry = 0;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  std::size_t workers = 0;
  std::string out_dir;
  std::string format = "report";
  std::string missing_policy = "impute";
  std::vector<std::size_t> sizes{10000, 20000, 40000, 80000};
  std::size_t reps = 5;
};

std::string default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return ".";
}

std::map<std::string, std::string> echo(const RunConfig& c, const std::string& command) {
  auto join = [](const auto& items) {
    std::ostringstream s;
    for (std::size_t i = 0; i < items.size(); ++i) s << (i ? "," : "") << items[i];
    return s.str();
  };
  std::map<std::string, std::string> m;
  m["command"] = command;
  m["data"] = join(c.data);
  m["manifest"] = join(c.manifests);
  m["strategy"] = c.strategy;
  m["alpha"] = format_number(c.alpha);
  m["gamma_max"] = format_number(c.gamma_max);
  m["trees"] = std::to_string(c.trees);
  m["mtry"] = c.mtry ? std::to_string(c.mtry) : "auto";
  m["folds"] = std::to_string(c.folds);
  m["seed"] = std::to_string(c.seed);
  m["workers"] = std::to_string(c.workers);
  m["missing_policy"] = c.missing_policy;
  if (command == "ablate-gamma") {
    std::vector<std::string> g;
    for (double v : c.gamma_values) g.push_back(format_number(v));
    m["gamma_values"] = join(g);
  }
  if (command == "scale") {
    m["sizes"] = join(c.sizes);
    m["strategies"] = join(c.strategies);
    m["reps"] = std::to_string(c.reps);
  }
  return m;
}

NamedDataset load_path(const std::string& path) {
  const fs::path p(path);
  if (!fs::exists(p)) throw DataError("file not found: " + path);
  Dataset ds = p.extension() == ".arff" ? load_arff(path) : load_csv(path);
  return {p.stem().string(), std::move(ds)};
}

std::vector<NamedDataset> load_inputs(const RunConfig& c) {
  std::vector<NamedDataset> out;
  for (const auto& m : c.manifests) {
    const auto manifest = load_manifest(m);
    out.push_back({manifest.name, load_dataset(manifest)});
  }
  for (const auto& d : c.data) out.push_back(load_path(d));
  return out;
}

Dataset prepared(const Dataset& ds, const RunConfig& c) {
  return ds.has_missing() ? apply_missing_policy(ds, missing_policy_from_string(c.missing_policy)) : ds;
}

TreeConfig tree_config(const RunConfig& c) {
  TreeConfig t;
  t.strategy.kind = strategy_kind_from_string(c.strategy);
  t.strategy.alpha = c.alpha;
  t.strategy.gamma_max = c.gamma_max;
  t.validate();
  return t;
}

std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.out_dir.empty() ? default_out_dir() : c.out_dir) / name).string();
}

int cmd_train(const RunConfig& c, bool forest_requested, std::ostream& out) {
  auto inputs = load_inputs(c);
  if (inputs.size() != 1) throw std::invalid_argument("train needs exactly one --data or --manifest");
  const Dataset ds = prepared(inputs.front().data, c);
  const std::string model_path = c.model_out.empty() ? out_path(c, "model.json") : c.model_out;
  const TreeConfig tc = tree_config(c);

  if (forest_requested) {
    ForestConfig fc;
    fc.n_trees = c.trees;
    if (c.mtry) fc.mtry = c.mtry;
    fc.seed = c.seed;
    fc.workers = c.workers;
    fc.tree_config = tc;
    const Forest forest = build_forest(ds, fc);
    write_file_atomic(model_path, serialize_forest(forest));
    out << "model\tforest\n"
        << "strategy\t" << c.strategy << "\n"
        << "trees\t" << forest.trees().size() << "\n"
        << "mean_leaf_count\t" << format_number(forest.mean_leaf_count()) << "\n"
        << "build_seconds\t" << format_number(forest.build_seconds()) << "\n"
        << "model_file\t" << model_path << "\n";
    return 0;
  }
  const DecisionTree tree = build_tree(all_rows(ds), tc);
  write_file_atomic(model_path, serialize_tree(tree));
  const auto m = tree.metrics();
  out << "model\ttree\n"
      << "strategy\t" << c.strategy << "\n"
      << "leaf_count\t" << m.leaf_count << "\n"
      << "node_count\t" << m.node_count << "\n"
      << "max_depth\t" << m.max_depth << "\n"
      << "build_seconds\t" << format_number(tree.build_seconds()) << "\n"
      << "model_file\t" << model_path << "\n";
  return 0;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  if (c.model_in.empty()) throw std::invalid_argument("predict needs --model-in");
  const std::string text = read_file(c.model_in);
  const std::string format = model_format(text);
  std::optional<DecisionTree> tree;
  std::optional<Forest> forest;
  if (format == "amsd-tree/1") tree = deserialize_tree(text);
  else if (format == "amsd-forest/1") forest = deserialize_forest(text);
  else throw ModelFormatError("unknown model format '" + format + "'");
  const Schema& schema = tree ? tree->schema() : forest->schema();

  std::string input;
  CsvOptions options;
  if (!c.manifests.empty()) {
    const auto m = load_manifest(c.manifests.front());
    options = m.options;
    input = m.source;
  } else if (!c.data.empty()) {
    input = c.data.front();
  } else {
    throw std::invalid_argument("predict needs --data or --manifest");
  }
  const Dataset ds = load_csv_with_schema(input, schema, options);
  const auto predictions = tree ? predict_all(*tree, ds) : predict_all(*forest, ds);

  std::string lines;
  for (auto p : predictions) lines += schema.class_labels()[static_cast<std::size_t>(p)] + "\n";
  if (!c.out_dir.empty() || std::getenv(kOutDirEnv)) {
    const auto path = out_path(c, "predictions.txt");
    write_file_atomic(path, lines);
    out << "predictions\t" << path << "\n";
  } else {
    out << lines;
  }
  std::size_t labelled = 0, correct = 0;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    if (ds.labels()[r] == kMissingLabel) continue;
    ++labelled;
    correct += predictions[r] == ds.labels()[r];
  }
  if (labelled > 0)
    out << "accuracy\t" << format_number(static_cast<double>(correct) / static_cast<double>(labelled)) << "\t("
        << correct << "/" << labelled << ")\n";
  return 0;
}

std::vector<NamedDataset> benchmark_inputs(const RunConfig& c) {
  auto inputs = load_inputs(c);
  if (!inputs.empty()) return inputs;
  // bundled offline datasets
  synthetic::GaussianMixtureSpec g;
  g.seed = c.seed;
  synthetic::SkewedSpec s;
  s.seed = c.seed;
  inputs.push_back({"synthetic-gmm", synthetic::gaussian_mixture(g)});
  inputs.push_back({"synthetic-skewed", synthetic::skewed_exponential(s)});
  return inputs;
}

int cmd_benchmark(const RunConfig& c, std::ostream& out) {
  const auto inputs = benchmark_inputs(c);
  const auto models = standard_models(c.alpha, c.gamma_max, c.trees,
                                      c.mtry ? std::optional<std::size_t>(c.mtry) : std::nullopt, c.seed, c.workers);
  for (const auto& m : models)
    if (const auto* t = std::get_if<TreeConfig>(&m.model)) t->validate();
  BenchmarkOptions opts;
  opts.k = c.folds;
  opts.seed = c.seed;
  opts.missing_policy = missing_policy_from_string(c.missing_policy);
  EvalReport report = run_benchmark(std::span<const NamedDataset>(inputs), models, opts);
  report.config = echo(c, "benchmark");

  write_file_atomic(out_path(c, "report.json"), report_to_json(report));
  write_file_atomic(out_path(c, "accuracy.tsv"), accuracy_table(report));
  write_file_atomic(out_path(c, "time.tsv"), time_table(report));
  write_file_atomic(out_path(c, "leaves.tsv"), leaf_table(report));
  out << (c.format == "table" ? summary_table(report) : report_to_json(report));
  return 0;
}

int cmd_ablate(const RunConfig& c, std::ostream& out) {
  for (double g : c.gamma_values) SplitterStrategy::amsd(c.alpha, g).validate();
  auto inputs = load_inputs(c);
  Dataset ds;
  if (inputs.empty()) {
    synthetic::HeavyTailSpec h;
    h.seed = c.seed;
    ds = synthetic::heavy_tail_with_outlier(h);
  } else if (inputs.size() == 1) {
    ds = prepared(inputs.front().data, c);
  } else {
    throw std::invalid_argument("ablate-gamma takes at most one dataset");
  }
  const auto result = run_gamma_ablation(ds, c.gamma_values, c.alpha, c.folds, c.seed);
  const auto config = echo(c, "ablate-gamma");
  write_file_atomic(out_path(c, "ablation.json"), ablation_to_json(result, config));
  write_file_atomic(out_path(c, "ablation.tsv"), ablation_table(result));
  out << (c.format == "table" ? ablation_table(result) : ablation_to_json(result, config));
  return 0;
}

int cmd_scale(const RunConfig& c, std::ostream& out) {
  ScalingSpec spec;
  spec.sizes = c.sizes;
  spec.repetitions = c.reps;
  spec.seed = c.seed;
  spec.strategies.clear();
  for (const auto& s : c.strategies) {
    SplitterStrategy st;
    st.kind = strategy_kind_from_string(s);
    st.alpha = c.alpha;
    st.gamma_max = c.gamma_max;
    st.validate();
    spec.strategies.push_back(st);
  }
  const auto points = run_scaling_experiment(spec);
  const std::string table = scaling_table(points);
  write_file_atomic(out_path(c, "scaling.tsv"), table);
  nlohmann::json doc = {{"format", "amsd-scaling/1"}, {"config", echo(c, "scale")}};
  doc["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json row = {{"strategy", to_string(p.strategy.kind)}, {"n", p.n}, {"median_seconds", p.median_seconds}};
    row["growth_ratio"] = p.growth_ratio ? nlohmann::json(*p.growth_ratio) : nlohmann::json(nullptr);
    doc["points"].push_back(std::move(row));
  }
  write_file_atomic(out_path(c, "scaling.json"), doc.dump(1) + "\n");
  out << table;
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Decision trees and forests with statistical (MSD / adaptive MSD) split search", "amsd"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
  app.require_subcommand(1);

  const auto strategies = CLI::IsMember({"exhaustive", "msd", "amsd"});
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", c.data, "CSV or ARFF file (class = last column)");
    sub->add_option("--manifest", c.manifests, "Dataset manifest (JSON)");
    sub->add_option("--missing-policy", c.missing_policy, "Missing-value policy")
        ->check(CLI::IsMember({"drop", "impute"}))
        ->capture_default_str();
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--strategy", c.strategy, "Continuous splitter")->check(strategies)->capture_default_str();
    sub->add_option("--alpha", c.alpha, "Adaptive scaling constant")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--gamma-max", c.gamma_max, "Skewness clip")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--mtry", c.mtry, "Forest attributes per node (0 = floor(sqrt(M)))");
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--out-dir", c.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or .)");
  };

  auto* train = app.add_subcommand("train", "Train a tree (or a forest with --trees) and save it");
  add_data(train);
  add_model(train);
  auto* trees_opt = train->add_option("--trees", c.trees, "Train a forest of this many trees")->check(CLI::PositiveNumber);
  train->add_option("--model-out", c.model_out, "Model file (default <out-dir>/model.json)");

  auto* predict = app.add_subcommand("predict", "Predict labels with a saved model");
  add_data(predict);
  predict->add_option("--model-in", c.model_in, "Model file")->required();
  predict->add_option("--out-dir", c.out_dir, "Write predictions.txt here instead of stdout");

  auto* bench = app.add_subcommand("benchmark", "Four-model stratified cross-validation comparison");
  add_data(bench);
  add_model(bench);
  bench->add_option("--trees", c.trees, "Forest size")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--folds", c.folds, "Cross-validation folds")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))->capture_default_str();
  bench->add_option("--format", c.format, "Stdout format")->check(CLI::IsMember({"report", "table"}))->capture_default_str();

  auto* ablate = app.add_subcommand("ablate-gamma", "Accuracy and empty-outer-bin rate per skewness clip");
  add_data(ablate);
  ablate->add_option("--gamma-max", c.gamma_values, "Clip values, in report order")
      ->check(CLI::NonNegativeNumber)
      ->delimiter(',')
      ->capture_default_str();
  ablate->add_option("--alpha", c.alpha, "Adaptive scaling constant")->check(CLI::NonNegativeNumber)->capture_default_str();
  ablate->add_option("--folds", c.folds, "Cross-validation folds")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))->capture_default_str();
  ablate->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  ablate->add_option("--out-dir", c.out_dir, "Output directory");
  ablate->add_option("--format", c.format, "Stdout format")->check(CLI::IsMember({"report", "table"}))->capture_default_str();

  auto* scale = app.add_subcommand("scale", "Root split-search timing versus row count");
  scale->add_option("--sizes", c.sizes, "Row counts, ascending")->delimiter(',')->capture_default_str();
  scale->add_option("--strategy", c.strategies, "Splitters to time")->check(strategies)->delimiter(',')->capture_default_str();
  scale->add_option("--reps", c.reps, "Repetitions per point (>= 5)")->check(CLI::Range(std::size_t{5}, std::size_t{1000}))->capture_default_str();
  scale->add_option("--alpha", c.alpha, "Adaptive scaling constant")->check(CLI::NonNegativeNumber);
  scale->add_option("--gamma-max", c.gamma_max, "Skewness clip")->check(CLI::NonNegativeNumber);
  scale->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  scale->add_option("--out-dir", c.out_dir, "Output directory");

  std::vector<const char*> argv{"amsd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "amsd: error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*train) return cmd_train(c, trees_opt->count() > 0, out);
    if (*predict) return cmd_predict(c, out);
    if (*bench) return cmd_benchmark(c, out);
    if (*ablate) return cmd_ablate(c, out);
    if (*scale) return cmd_scale(c, out);
  } catch (const std::exception& e) {
    err << "amsd: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace amsd::cli
