#include "amsd/tree.hpp"

#include <algorithm>
#include <chrono>

namespace amsd {

void TreeConfig::validate() const {
  strategy.validate();
  if (min_node_size < 1) throw std::invalid_argument("min_node_size must be >= 1");
  if (!(min_gain_ratio >= 0.0)) throw std::invalid_argument("min_gain_ratio must be >= 0");
}

namespace {

ClassIndex argmax_class(std::span<const std::size_t> distribution) {
  // ties to the lowest class index
  return static_cast<ClassIndex>(std::max_element(distribution.begin(), distribution.end()) -
                                 distribution.begin());
}

TreeMetrics traverse(const std::vector<TreeNode>& nodes) {
  TreeMetrics m;
  if (nodes.empty()) return m;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    ++m.node_count;
    m.max_depth = std::max(m.max_depth, depth);
    const auto& node = nodes[id];
    if (node.is_leaf()) {
      ++m.leaf_count;
      continue;
    }
    for (auto c : node.children) stack.emplace_back(c, depth + 1);
  }
  return m;
}

}  // namespace

DecisionTree::DecisionTree(Schema schema, TreeConfig config, std::vector<TreeNode> nodes)
    : schema_(std::move(schema)), config_(std::move(config)), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("tree has no nodes");
  fingerprint_ = schema_.fingerprint();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.distribution.size() != schema_.class_count())
      throw std::invalid_argument("node distribution size does not match class count");
    if (n.predicted < 0 || static_cast<std::size_t>(n.predicted) >= schema_.class_count())
      throw std::invalid_argument("node predicted class out of range");
    if (n.is_leaf()) continue;
    if (n.rule->attribute >= schema_.attribute_count())
      throw std::invalid_argument("split attribute out of range");
    if (n.children.size() != n.rule->arity()) throw std::invalid_argument("child count != rule arity");
    if (n.fallback_child >= n.children.size()) throw std::invalid_argument("fallback child out of range");
    for (auto c : n.children)
      if (c <= i || c >= nodes_.size()) throw std::invalid_argument("child index out of order");
  }
  metrics_ = traverse(nodes_);
}

std::size_t DecisionTree::leaf_for(const Dataset& ds, std::size_t row) const {
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const auto& node = nodes_[id];
    const auto child = route(*node.rule, ds, row);
    id = node.children[child ? *child : node.fallback_child];
  }
  return id;
}

ClassIndex DecisionTree::predict(const Dataset& ds, std::size_t row) const {
  return nodes_[leaf_for(ds, row)].predicted;
}

bool DecisionTree::operator==(const DecisionTree& other) const {
  return schema_ == other.schema_ && config_ == other.config_ && nodes_ == other.nodes_;
}

void check_schema_compatible(const Schema& expected, const Schema& actual) {
  if (expected == actual) return;
  const std::size_t n = std::max(expected.attribute_count(), actual.attribute_count());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= expected.attribute_count())
      throw SchemaMismatchError("schema mismatch: unexpected attribute '" + actual.attribute(i).name + "'");
    if (i >= actual.attribute_count())
      throw SchemaMismatchError("schema mismatch: missing attribute '" + expected.attribute(i).name + "'");
    if (!(expected.attribute(i) == actual.attribute(i)))
      throw SchemaMismatchError("schema mismatch at attribute '" + expected.attribute(i).name + "'");
  }
  throw SchemaMismatchError("schema mismatch: class attribute or labels differ");
}

std::vector<ClassIndex> predict_all(const DecisionTree& tree, const Dataset& ds) {
  check_schema_compatible(tree.schema(), ds.schema());
  std::vector<ClassIndex> out(ds.row_count());
  for (std::size_t r = 0; r < ds.row_count(); ++r) out[r] = tree.predict(ds, r);
  return out;
}

TreeMetrics tree_metrics(const DecisionTree& tree) { return traverse(tree.nodes()); }

namespace {

class Builder {
 public:
  Builder(const Dataset& ds, const TreeConfig& config, const BuildHooks& hooks)
      : ds_(ds),
        config_(config),
        hooks_(hooks),
        classes_(ds.schema().class_count()),
        consumed_(ds.attribute_count(), false) {}

  std::vector<TreeNode> run(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::vector<std::size_t> distribution_of(std::span<const std::size_t> rows) const {
    std::vector<std::size_t> d(classes_, 0);
    const auto labels = ds_.labels();
    for (auto r : rows) ++d[static_cast<std::size_t>(labels[r])];
    return d;
  }

  std::uint32_t make_leaf(std::vector<std::size_t> distribution) {
    TreeNode leaf;
    leaf.predicted = argmax_class(distribution);
    leaf.distribution = std::move(distribution);
    nodes_.push_back(std::move(leaf));
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    auto distribution = distribution_of(rows);
    const auto nonzero = std::count_if(distribution.begin(), distribution.end(),
                                       [](std::size_t c) { return c > 0; });
    if (nonzero <= 1 || rows.size() < config_.min_node_size ||
        (config_.max_depth && depth >= *config_.max_depth))
      return make_leaf(std::move(distribution));

    std::vector<std::size_t> eligible;
    for (std::size_t a = 0; a < ds_.attribute_count(); ++a)
      if (!consumed_[a]) eligible.push_back(a);
    std::vector<std::size_t> candidates =
        hooks_.sample_candidates ? hooks_.sample_candidates(eligible) : eligible;
    std::sort(candidates.begin(), candidates.end());

    const RowView view(ds_, rows);
    std::vector<Proposal> proposals;
    for (auto a : candidates) {
      BinnedDiagnostics diag;
      auto p = propose(view, a, config_.strategy, &diag);
      if (!p) continue;
      if (hooks_.on_binned_proposal && std::holds_alternative<BinnedSplit>(p->rule.kind))
        hooks_.on_binned_proposal(*p, diag);
      proposals.push_back(std::move(*p));
    }
    const auto best = select_best(proposals);
    if (!best || proposals[*best].score.gain_ratio < config_.min_gain_ratio)
      return make_leaf(std::move(distribution));

    const Proposal& chosen = proposals[*best];
    if (hooks_.on_split) hooks_.on_split(SplitEvent{depth, rows.size(), candidates, &chosen});

    const std::size_t arity = chosen.rule.arity();
    const auto& counts = chosen.score.child_counts;
    const auto fallback = static_cast<std::uint32_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());

    std::vector<std::vector<std::size_t>> parts(arity);
    for (auto r : rows) {
      const auto c = route(chosen.rule, ds_, r);
      parts[c ? *c : fallback].push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    TreeNode node;
    node.predicted = argmax_class(distribution);
    node.distribution = distribution;
    node.rule = chosen.rule;
    node.fallback_child = fallback;
    nodes_.push_back(std::move(node));
    const std::size_t id = nodes_.size() - 1;

    const bool categorical = std::holds_alternative<CategoricalSplit>(chosen.rule.kind);
    const std::size_t attribute = chosen.rule.attribute;
    if (categorical) consumed_[attribute] = true;
    std::vector<std::uint32_t> children;
    children.reserve(arity);
    for (auto& part : parts) {
      if (part.empty())
        children.push_back(make_leaf(distribution));
      else
        children.push_back(grow(std::move(part), depth + 1));
    }
    if (categorical) consumed_[attribute] = false;
    nodes_[id].children = std::move(children);
    return static_cast<std::uint32_t>(id);
  }

  const Dataset& ds_;
  const TreeConfig& config_;
  const BuildHooks& hooks_;
  std::size_t classes_;
  std::vector<bool> consumed_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree build_tree(const RowView& view, const TreeConfig& config, const BuildHooks& hooks) {
  config.validate();
  if (view.empty()) throw std::invalid_argument("build_tree: empty view");
  const Dataset& ds = view.dataset();
  if (ds.attribute_count() == 0) throw std::invalid_argument("build_tree: schema has no predictors");
  for (auto r : view.rows())
    if (ds.labels()[r] == kMissingLabel) throw std::invalid_argument("build_tree: row with missing label");

  const auto start = std::chrono::steady_clock::now();
  auto nodes = Builder(ds, config, hooks).run(std::vector<std::size_t>(view.rows().begin(), view.rows().end()));
  DecisionTree tree(ds.schema(), config, std::move(nodes));
  tree.set_build_seconds(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return tree;
}

}  // namespace amsd
