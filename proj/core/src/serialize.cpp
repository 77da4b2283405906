#include <functional>

#include "serialize_detail.hpp"

namespace amsd {
namespace detail {

json schema_to_json(const Schema& schema) {
  json attrs = json::array();
  for (const auto& a : schema.attributes()) {
    json entry = {{"name", a.name}, {"kind", to_string(a.kind)}};
    if (a.kind == AttributeKind::Categorical) entry["categories"] = a.categories;
    attrs.push_back(std::move(entry));
  }
  return {{"fingerprint", schema.fingerprint()},
          {"class_attribute", schema.class_attribute()},
          {"class_labels", schema.class_labels()},
          {"attributes", std::move(attrs)}};
}

Schema schema_from_json(const json& doc) {
  std::vector<Attribute> attrs;
  for (const auto& entry : doc.at("attributes")) {
    Attribute a;
    a.name = entry.at("name").get<std::string>();
    a.kind = attribute_kind_from_string(entry.at("kind").get<std::string>());
    if (entry.contains("categories")) a.categories = entry["categories"].get<std::vector<std::string>>();
    attrs.push_back(std::move(a));
  }
  Schema schema(std::move(attrs), doc.at("class_attribute").get<std::string>(),
                doc.at("class_labels").get<std::vector<std::string>>());
  if (doc.contains("fingerprint") && doc["fingerprint"].get<std::string>() != schema.fingerprint())
    throw ModelFormatError("schema fingerprint mismatch: document says " +
                           doc["fingerprint"].get<std::string>() + ", schema hashes to " +
                           schema.fingerprint());
  return schema;
}

json tree_config_to_json(const TreeConfig& c) {
  json doc = {{"strategy", to_string(c.strategy.kind)},
              {"alpha", c.strategy.alpha},
              {"gamma_max", c.strategy.gamma_max},
              {"min_node_size", c.min_node_size},
              {"min_gain_ratio", c.min_gain_ratio}};
  doc["max_depth"] = c.max_depth ? json(*c.max_depth) : json(nullptr);
  return doc;
}

TreeConfig tree_config_from_json(const json& doc) {
  TreeConfig c;
  c.strategy.kind = strategy_kind_from_string(doc.value("strategy", std::string{"amsd"}));
  c.strategy.alpha = doc.value("alpha", kDefaultAlpha);
  c.strategy.gamma_max = doc.value("gamma_max", kDefaultGammaMax);
  c.min_node_size = doc.value("min_node_size", std::size_t{2});
  c.min_gain_ratio = doc.value("min_gain_ratio", 0.0);
  if (doc.contains("max_depth") && !doc["max_depth"].is_null()) c.max_depth = doc["max_depth"].get<std::size_t>();
  return c;
}

namespace {

json rule_to_json(const SplitRule& rule) {
  if (const auto* b = std::get_if<BinnedSplit>(&rule.kind))
    return {{"type", "binned"}, {"points", {b->points.s1, b->points.s2, b->points.s3}}};
  if (const auto* t = std::get_if<ThresholdSplit>(&rule.kind))
    return {{"type", "threshold"}, {"threshold", t->threshold}};
  return {{"type", "categorical"}, {"arity", std::get<CategoricalSplit>(rule.kind).arity}};
}

SplitRule rule_from_json(std::size_t attribute, const json& doc) {
  const auto type = doc.at("type").get<std::string>();
  if (type == "binned") {
    const auto& p = doc.at("points");
    if (!p.is_array() || p.size() != 3) throw ModelFormatError("binned split needs 3 points");
    return {attribute, BinnedSplit{{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()}}};
  }
  if (type == "threshold") return {attribute, ThresholdSplit{doc.at("threshold").get<double>()}};
  if (type == "categorical") return {attribute, CategoricalSplit{doc.at("arity").get<std::size_t>()}};
  throw ModelFormatError("unknown split type '" + type + "'");
}

}  // namespace

json nodes_to_json(const DecisionTree& tree) {
  const auto& nodes = tree.nodes();
  std::function<json(std::size_t)> emit = [&](std::size_t id) -> json {
    const auto& n = nodes[id];
    json doc = {{"distribution", n.distribution}, {"predicted", n.predicted}};
    if (n.is_leaf()) {
      doc["leaf"] = true;
      return doc;
    }
    doc["leaf"] = false;
    doc["attribute"] = n.rule->attribute;
    doc["split"] = rule_to_json(*n.rule);
    doc["fallback"] = n.fallback_child;
    json children = json::array();
    for (auto c : n.children) children.push_back(emit(c));
    doc["children"] = std::move(children);
    return doc;
  };
  return emit(0);
}

std::vector<TreeNode> nodes_from_json(const json& root, std::size_t classes) {
  std::vector<TreeNode> nodes;
  std::function<std::uint32_t(const json&)> read = [&](const json& doc) -> std::uint32_t {
    TreeNode n;
    n.distribution = doc.at("distribution").get<std::vector<std::size_t>>();
    if (n.distribution.size() != classes) throw ModelFormatError("node distribution has wrong class count");
    n.predicted = doc.at("predicted").get<ClassIndex>();
    const bool leaf = doc.value("leaf", !doc.contains("children"));
    nodes.push_back(n);
    const auto id = static_cast<std::uint32_t>(nodes.size() - 1);
    if (leaf) return id;
    SplitRule rule = rule_from_json(doc.at("attribute").get<std::size_t>(), doc.at("split"));
    std::vector<std::uint32_t> children;
    for (const auto& c : doc.at("children")) children.push_back(read(c));
    nodes[id].rule = std::move(rule);
    nodes[id].children = std::move(children);
    nodes[id].fallback_child = doc.at("fallback").get<std::uint32_t>();
    return id;
  };
  read(root);
  return nodes;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError("model parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace detail

inline constexpr const char* kTreeFormat = "amsd-tree/1";

std::string serialize_tree(const DecisionTree& tree) {
  detail::json doc;
  doc["format"] = kTreeFormat;
  doc["schema"] = detail::schema_to_json(tree.schema());
  doc["config"] = detail::tree_config_to_json(tree.config());
  const auto m = tree.metrics();
  doc["stats"] = {{"node_count", m.node_count}, {"leaf_count", m.leaf_count}, {"max_depth", m.max_depth}};
  doc["root"] = detail::nodes_to_json(tree);
  return doc.dump(1) + "\n";
}

std::string model_format(const std::string& text) {
  const auto doc = detail::parse_document(text);
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string())
    throw ModelFormatError("model document has no format tag");
  return doc["format"].get<std::string>();
}

DecisionTree deserialize_tree(const std::string& text) {
  const auto doc = detail::parse_document(text);
  try {
    if (!doc.is_object() || doc.value("format", std::string{}) != kTreeFormat)
      throw ModelFormatError(std::string("not a tree document (expected format '") + kTreeFormat + "')");
    Schema schema = detail::schema_from_json(doc.at("schema"));
    TreeConfig config = doc.contains("config") ? detail::tree_config_from_json(doc["config"]) : TreeConfig{};
    auto nodes = detail::nodes_from_json(doc.at("root"), schema.class_count());
    return DecisionTree(std::move(schema), std::move(config), std::move(nodes));
  } catch (const detail::json::exception& e) {
    throw ModelFormatError(std::string("malformed tree document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("invalid tree document: ") + e.what());
  } catch (const DataError& e) {
    throw ModelFormatError(std::string("invalid schema in tree document: ") + e.what());
  }
}

}  // namespace amsd
