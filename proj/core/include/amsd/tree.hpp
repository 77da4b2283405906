#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "amsd/data.hpp"
#include "amsd/splitters.hpp"

namespace amsd {

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreeConfig {
  SplitterStrategy strategy;
  std::size_t min_node_size = 2;
  std::optional<std::size_t> max_depth;
  double min_gain_ratio = 0.0;

  void validate() const;
  bool operator==(const TreeConfig&) const = default;
};

struct TreeNode {
  /// Training class counts at this node (the parent's counts for empty children).
  std::vector<std::size_t> distribution;
  ClassIndex predicted = 0;
  /// Absent for leaves.
  std::optional<SplitRule> rule;
  std::vector<std::uint32_t> children;
  /// Child taken by missing values and unseen categories: the largest child.
  std::uint32_t fallback_child = 0;

  bool is_leaf() const { return !rule.has_value(); }
  bool operator==(const TreeNode&) const = default;
};

struct TreeMetrics {
  std::size_t leaf_count = 0;
  std::size_t node_count = 0;
  std::size_t max_depth = 0;
  bool operator==(const TreeMetrics&) const = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(Schema schema, TreeConfig config, std::vector<TreeNode> nodes);

  const Schema& schema() const { return schema_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const TreeConfig& config() const { return config_; }
  /// Node 0 is the root; children always have larger indices than their parent.
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

  TreeMetrics metrics() const { return metrics_; }
  double build_seconds() const { return build_seconds_; }
  void set_build_seconds(double s) { build_seconds_ = s; }

  /// Row `row` of `ds`, which must share this tree's schema.
  ClassIndex predict(const Dataset& ds, std::size_t row) const;
  /// Index of the leaf reached by the row.
  std::size_t leaf_for(const Dataset& ds, std::size_t row) const;

  /// Structural equality (schema, config and nodes; build time ignored).
  bool operator==(const DecisionTree& other) const;

 private:
  Schema schema_;
  std::string fingerprint_;
  TreeConfig config_;
  std::vector<TreeNode> nodes_;
  TreeMetrics metrics_;
  double build_seconds_ = 0.0;
};

/// Reported for every node that becomes internal.
struct SplitEvent {
  std::size_t depth = 0;
  std::size_t rows = 0;
  std::span<const std::size_t> candidates;
  const Proposal* chosen = nullptr;
};

struct BuildHooks {
  /// Restricts the candidate attributes at a node. Receives the eligible attributes in
  /// ascending order and returns the subset to evaluate.
  std::function<std::vector<std::size_t>(std::span<const std::size_t>)> sample_candidates;
  std::function<void(const SplitEvent&)> on_split;
  /// Every binned (MSD/AMSD) proposal evaluated during induction.
  std::function<void(const Proposal&, const BinnedDiagnostics&)> on_binned_proposal;
};

/// Recursive induction. Throws std::invalid_argument on an empty view, a schema without
/// predictors or rows with missing labels.
DecisionTree build_tree(const RowView& view, const TreeConfig& config, const BuildHooks& hooks = {});

/// Predicts every row; throws SchemaMismatchError when the dataset schema differs.
std::vector<ClassIndex> predict_all(const DecisionTree& tree, const Dataset& ds);

/// Exact counts by traversal from the root.
TreeMetrics tree_metrics(const DecisionTree& tree);

/// Throws SchemaMismatchError naming the first differing attribute.
void check_schema_compatible(const Schema& expected, const Schema& actual);

std::string serialize_tree(const DecisionTree& tree);
/// Format tag of a serialized model ("amsd-tree/1", "amsd-forest/1"); throws ModelFormatError.
std::string model_format(const std::string& text);
/// Throws ModelFormatError (with the byte position for syntax errors).
DecisionTree deserialize_tree(const std::string& text);

}  // namespace amsd
