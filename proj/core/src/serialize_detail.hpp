#pragma once

#include <json.hpp>

#include "amsd/tree.hpp"

namespace amsd::detail {

using nlohmann::json;

json schema_to_json(const Schema& schema);
Schema schema_from_json(const json& doc);

json tree_config_to_json(const TreeConfig& config);
TreeConfig tree_config_from_json(const json& doc);

/// The nested node document rooted at node 0.
json nodes_to_json(const DecisionTree& tree);
std::vector<TreeNode> nodes_from_json(const json& root, std::size_t classes);

/// Parses text, converting syntax errors into ModelFormatError with the byte position.
json parse_document(const std::string& text);

}  // namespace amsd::detail
