#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amsd/data.hpp"
#include "amsd/tree.hpp"

namespace amsd {

struct ForestConfig {
  std::size_t n_trees = 100;
  /// Candidate attributes per node; default floor(sqrt(predictors)), at least 1.
  std::optional<std::size_t> mtry;
  std::uint64_t seed = 0;
  TreeConfig tree_config;
  /// Bootstrap sample size; default = training rows.
  std::optional<std::size_t> bootstrap_size;
  /// Worker threads; 0 = hardware concurrency. Does not affect the result.
  std::size_t workers = 0;
  /// Test hook: every tree sees the training rows as-is instead of a bootstrap sample.
  bool identity_bootstrap = false;

  void validate(std::size_t predictor_count) const;
  std::size_t effective_mtry(std::size_t predictor_count) const;
};

class Forest {
 public:
  Forest() = default;
  Forest(Schema schema, ForestConfig config, std::vector<DecisionTree> trees,
         std::vector<std::uint64_t> tree_seeds);

  const Schema& schema() const { return schema_; }
  const ForestConfig& config() const { return config_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const std::vector<std::uint64_t>& tree_seeds() const { return tree_seeds_; }
  double build_seconds() const { return build_seconds_; }
  void set_build_seconds(double s) { build_seconds_ = s; }

  double mean_leaf_count() const;

 private:
  Schema schema_;
  ForestConfig config_;
  std::vector<DecisionTree> trees_;
  std::vector<std::uint64_t> tree_seeds_;
  double build_seconds_ = 0.0;
};

/// Per-tree instrumentation; called from worker threads, so it must be thread-safe.
struct ForestHooks {
  std::function<void(std::size_t tree, const std::vector<std::size_t>& bootstrap)> on_bootstrap;
  std::function<void(std::size_t tree, const SplitEvent&)> on_split;
};

/// Bootstrap rows for tree `tree` (drawn from `training`), reproducible from the seed alone.
std::vector<std::size_t> bootstrap_rows(std::span<const std::size_t> training, std::size_t size,
                                        std::uint64_t tree_seed);

Forest build_forest(const RowView& training, const ForestConfig& config, const ForestHooks& hooks = {});
Forest build_forest(const Dataset& ds, const ForestConfig& config, const ForestHooks& hooks = {});

/// Majority vote, ties to the lowest class index.
ClassIndex predict_forest(const Forest& forest, const Dataset& ds, std::size_t row);
/// Vote fractions per class; sums to 1.
std::vector<double> predict_forest_proba(const Forest& forest, const Dataset& ds, std::size_t row);
std::vector<ClassIndex> predict_all(const Forest& forest, const Dataset& ds);

std::string serialize_forest(const Forest& forest);
Forest deserialize_forest(const std::string& text);

}  // namespace amsd
