#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "amsd/data.hpp"
#include "amsd/forest.hpp"
#include "amsd/tree.hpp"

namespace amsd {

/// Stratified fold assignment.
struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  /// Row indices per fold, ascending.
  std::vector<std::vector<std::size_t>> folds;
};

/// Rows of each class (ascending class index) are shuffled by the seeded stream and
/// dealt round-robin; the dealing position carries over from one class to the next so
/// fold sizes also differ by at most one. Throws std::invalid_argument when k < 2,
/// k > rows, or a label is missing.
FoldPlan make_folds(std::span<const ClassIndex> labels, std::size_t k, std::uint64_t seed);

struct ModelSpec {
  std::string name;
  std::variant<TreeConfig, ForestConfig> model;
};

/// The four models of the comparison protocol: exhaustive C4.5, MSD, AMSD and a
/// `trees`-tree AMSD forest.
std::vector<ModelSpec> standard_models(double alpha = kDefaultAlpha, double gamma_max = kDefaultGammaMax,
                                       std::size_t trees = 100, std::optional<std::size_t> mtry = std::nullopt,
                                       std::uint64_t seed = 0, std::size_t workers = 0);

struct FoldResult {
  double accuracy = 0.0;
  double train_seconds = 0.0;
  /// Leaf count for trees, mean per-tree leaf count for forests.
  double leaf_metric = 0.0;
  std::size_t test_rows = 0;
};

/// Monotonic time source in seconds.
using Clock = std::function<double()>;
Clock steady_clock_seconds();

struct CvOptions {
  /// Defaults to steady_clock_seconds(). Read exactly twice per fold, around training.
  Clock clock;
  /// Passed to single-tree training (ignored for forests).
  BuildHooks tree_hooks;
};

std::vector<FoldResult> run_cv(const Dataset& ds, const ModelSpec& model, const FoldPlan& plan,
                               const CvOptions& options = {});

struct ModelResult {
  std::string dataset;
  std::string model;
  std::vector<FoldResult> folds;
  double accuracy_mean = 0.0;
  double accuracy_stddev = 0.0;  // sample standard deviation over folds
  double train_seconds_total = 0.0;
  double leaf_mean = 0.0;
};

ModelResult summarize(std::string dataset, std::string model, std::vector<FoldResult> folds);

struct Environment {
  std::string hardware;
  std::string timestamp;  // UTC, ISO-8601
  std::uint64_t seed = 0;
  std::size_t folds = 0;
};
Environment capture_environment(std::uint64_t seed, std::size_t folds);

struct EvalReport {
  std::vector<ModelResult> results;
  Environment environment;
  /// Effective configuration, echoed verbatim into every emitted document.
  std::map<std::string, std::string> config;
};

struct NamedDataset {
  std::string name;
  Dataset data;
};

struct BenchmarkOptions {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  MissingPolicy missing_policy = MissingPolicy::ImputeMeanMode;
};

/// Cross product of datasets x models under one fold seed per dataset.
EvalReport run_benchmark(std::span<const NamedDataset> datasets, std::span<const ModelSpec> models,
                         const BenchmarkOptions& options);
/// Loads every manifest first; a missing file raises DataError naming it.
EvalReport run_benchmark(std::span<const DatasetManifest> manifests, std::span<const ModelSpec> models,
                         const BenchmarkOptions& options);

/// Empty tail-side outer bin accounting for AMSD splits chosen during training. The tail
/// side is bin 3 when the upper interval is at least as wide as the lower one, else bin 0.
struct AblationPoint {
  double gamma_max = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_stddev = 0.0;
  std::size_t proposals = 0;  // (node view, continuous attribute) pairs
  std::size_t empty_outer_bins = 0;
  double empty_outer_fraction() const {
    return proposals ? static_cast<double>(empty_outer_bins) / static_cast<double>(proposals) : 0.0;
  }
};

struct AblationResult {
  ModelResult msd_reference;
  std::vector<AblationPoint> points;  // input order
};

AblationResult run_gamma_ablation(const Dataset& ds, std::span<const double> gamma_values, double alpha,
                                  std::size_t k, std::uint64_t seed);

/// Outer bin on the long-tail side: 3 for right skew (and zero skew), 0 for left skew.
std::size_t tail_bin(double skewness);

struct ScalingSpec {
  std::vector<std::size_t> sizes{10000, 20000, 40000, 80000};
  std::vector<SplitterStrategy> strategies{SplitterStrategy::exhaustive(), SplitterStrategy::msd(),
                                           SplitterStrategy::amsd()};
  std::size_t repetitions = 5;
  std::size_t attributes = 4;
  std::uint64_t seed = 0;
};

struct ScalingPoint {
  SplitterStrategy strategy;
  std::size_t n = 0;
  double median_seconds = 0.0;
  /// median(n) / median(previous size); absent for the first size.
  std::optional<double> growth_ratio;
};

/// Times only the root-node candidate proposals (every attribute) on synthetic data.
/// Throws std::invalid_argument if sizes are not ascending or repetitions < 5.
std::vector<ScalingPoint> run_scaling_experiment(const ScalingSpec& spec);

/// Median wall time of proposing a split for every attribute of `view`.
double time_root_proposals(const RowView& view, const SplitterStrategy& strategy, std::size_t repetitions);

// --- emitters -------------------------------------------------------------

/// Structured report: one record per model x dataset x fold plus summary records.
std::string report_to_json(const EvalReport& report);
/// Flat tab-separated tables (header row first).
std::string accuracy_table(const EvalReport& report);
std::string time_table(const EvalReport& report);
std::string leaf_table(const EvalReport& report);
std::string summary_table(const EvalReport& report);
std::string scaling_table(std::span<const ScalingPoint> points);
std::string ablation_table(const AblationResult& result);
std::string ablation_to_json(const AblationResult& result, const std::map<std::string, std::string>& config);

}  // namespace amsd
