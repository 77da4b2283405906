#include "amsd/forest.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "amsd/random.hpp"
#include "serialize_detail.hpp"

namespace amsd {

void ForestConfig::validate(std::size_t predictor_count) const {
  if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (mtry && (*mtry < 1 || *mtry > predictor_count))
    throw std::invalid_argument("mtry must be in [1, predictor count]");
  if (bootstrap_size && *bootstrap_size < 1) throw std::invalid_argument("bootstrap_size must be >= 1");
  tree_config.validate();
}

std::size_t ForestConfig::effective_mtry(std::size_t predictor_count) const {
  if (mtry) return *mtry;
  const auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(predictor_count))));
  return std::max<std::size_t>(1, m);
}

Forest::Forest(Schema schema, ForestConfig config, std::vector<DecisionTree> trees,
               std::vector<std::uint64_t> tree_seeds)
    : schema_(std::move(schema)),
      config_(std::move(config)),
      trees_(std::move(trees)),
      tree_seeds_(std::move(tree_seeds)) {
  if (trees_.empty()) throw std::invalid_argument("forest has no trees");
  if (trees_.size() != config_.n_trees) throw std::invalid_argument("tree count != n_trees");
  if (tree_seeds_.size() != trees_.size()) throw std::invalid_argument("seed record size != tree count");
}

double Forest::mean_leaf_count() const {
  double sum = 0.0;
  for (const auto& t : trees_) sum += static_cast<double>(t.metrics().leaf_count);
  return sum / static_cast<double>(trees_.size());
}

namespace {

std::vector<std::size_t> draw_bootstrap(std::span<const std::size_t> training, std::size_t size, Rng& rng) {
  std::vector<std::size_t> rows(size);
  for (auto& r : rows) r = training[static_cast<std::size_t>(rng.below(training.size()))];
  return rows;
}

DecisionTree grow_member(const RowView& training, const ForestConfig& config, std::size_t index,
                         std::uint64_t tree_seed, std::size_t mtry, const ForestHooks& hooks) {
  Rng rng(tree_seed);
  std::vector<std::size_t> rows;
  if (config.identity_bootstrap) {
    rows.assign(training.rows().begin(), training.rows().end());
  } else {
    rows = draw_bootstrap(training.rows(), config.bootstrap_size.value_or(training.size()), rng);
  }
  if (hooks.on_bootstrap) hooks.on_bootstrap(index, rows);

  BuildHooks build_hooks;
  build_hooks.sample_candidates = [&rng, mtry](std::span<const std::size_t> eligible) {
    std::vector<std::size_t> pool(eligible.begin(), eligible.end());
    const std::size_t take = std::min(mtry, pool.size());
    // partial Fisher-Yates
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    // keep attribute order so gain-ratio ties still go to the lowest index
    std::sort(pool.begin(), pool.end());
    return pool;
  };
  if (hooks.on_split)
    build_hooks.on_split = [&hooks, index](const SplitEvent& e) { hooks.on_split(index, e); };

  return build_tree(RowView(training.dataset(), std::move(rows)), config.tree_config, build_hooks);
}

}  // namespace

std::vector<std::size_t> bootstrap_rows(std::span<const std::size_t> training, std::size_t size,
                                        std::uint64_t tree_seed) {
  Rng rng(tree_seed);
  return draw_bootstrap(training, size, rng);
}

Forest build_forest(const RowView& training, const ForestConfig& config, const ForestHooks& hooks) {
  const Dataset& ds = training.dataset();
  config.validate(ds.attribute_count());
  if (training.empty()) throw std::invalid_argument("build_forest: empty training set");
  const std::size_t mtry = config.effective_mtry(ds.attribute_count());

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> seeds(config.n_trees);
  for (std::size_t t = 0; t < seeds.size(); ++t) seeds[t] = child_seed(config.seed, t);

  std::vector<std::optional<DecisionTree>> slots(config.n_trees);
  std::size_t workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.n_trees);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < config.n_trees; t = next++) {
      try {
        slots[t] = grow_member(training, config, t, seeds[t], mtry, hooks);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<DecisionTree> trees;
  trees.reserve(slots.size());
  for (auto& s : slots) trees.push_back(std::move(*s));
  Forest forest(ds.schema(), config, std::move(trees), std::move(seeds));
  forest.set_build_seconds(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return forest;
}

Forest build_forest(const Dataset& ds, const ForestConfig& config, const ForestHooks& hooks) {
  return build_forest(all_rows(ds), config, hooks);
}

std::vector<double> predict_forest_proba(const Forest& forest, const Dataset& ds, std::size_t row) {
  std::vector<double> votes(forest.schema().class_count(), 0.0);
  for (const auto& t : forest.trees()) votes[static_cast<std::size_t>(t.predict(ds, row))] += 1.0;
  const double n = static_cast<double>(forest.trees().size());
  for (auto& v : votes) v /= n;
  return votes;
}

ClassIndex predict_forest(const Forest& forest, const Dataset& ds, std::size_t row) {
  std::vector<std::size_t> votes(forest.schema().class_count(), 0);
  for (const auto& t : forest.trees()) ++votes[static_cast<std::size_t>(t.predict(ds, row))];
  return static_cast<ClassIndex>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<ClassIndex> predict_all(const Forest& forest, const Dataset& ds) {
  check_schema_compatible(forest.schema(), ds.schema());
  std::vector<ClassIndex> out(ds.row_count());
  for (std::size_t r = 0; r < ds.row_count(); ++r) out[r] = predict_forest(forest, ds, r);
  return out;
}

inline constexpr const char* kForestFormat = "amsd-forest/1";

std::string serialize_forest(const Forest& forest) {
  using detail::json;
  const auto& c = forest.config();
  json config = {{"n_trees", c.n_trees},
                 {"seed", c.seed},
                 {"identity_bootstrap", c.identity_bootstrap},
                 {"tree", detail::tree_config_to_json(c.tree_config)}};
  config["mtry"] = c.mtry ? json(*c.mtry) : json(nullptr);
  config["bootstrap_size"] = c.bootstrap_size ? json(*c.bootstrap_size) : json(nullptr);

  json trees = json::array();
  for (const auto& t : forest.trees()) {
    const auto m = t.metrics();
    trees.push_back({{"stats", {{"node_count", m.node_count}, {"leaf_count", m.leaf_count}, {"max_depth", m.max_depth}}},
                     {"root", detail::nodes_to_json(t)}});
  }
  json doc;
  doc["format"] = kForestFormat;
  doc["schema"] = detail::schema_to_json(forest.schema());
  doc["config"] = std::move(config);
  doc["tree_seeds"] = forest.tree_seeds();
  doc["trees"] = std::move(trees);
  return doc.dump(1) + "\n";
}

Forest deserialize_forest(const std::string& text) {
  const auto doc = detail::parse_document(text);
  try {
    if (!doc.is_object() || doc.value("format", std::string{}) != kForestFormat)
      throw ModelFormatError(std::string("not a forest document (expected format '") + kForestFormat + "')");
    Schema schema = detail::schema_from_json(doc.at("schema"));
    const auto& cdoc = doc.at("config");
    ForestConfig config;
    config.n_trees = cdoc.at("n_trees").get<std::size_t>();
    config.seed = cdoc.at("seed").get<std::uint64_t>();
    config.identity_bootstrap = cdoc.value("identity_bootstrap", false);
    config.tree_config = detail::tree_config_from_json(cdoc.at("tree"));
    if (cdoc.contains("mtry") && !cdoc["mtry"].is_null()) config.mtry = cdoc["mtry"].get<std::size_t>();
    if (cdoc.contains("bootstrap_size") && !cdoc["bootstrap_size"].is_null())
      config.bootstrap_size = cdoc["bootstrap_size"].get<std::size_t>();

    std::vector<DecisionTree> trees;
    for (const auto& t : doc.at("trees"))
      trees.emplace_back(schema, config.tree_config, detail::nodes_from_json(t.at("root"), schema.class_count()));
    auto seeds = doc.at("tree_seeds").get<std::vector<std::uint64_t>>();
    return Forest(std::move(schema), std::move(config), std::move(trees), std::move(seeds));
  } catch (const detail::json::exception& e) {
    throw ModelFormatError(std::string("malformed forest document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("invalid forest document: ") + e.what());
  } catch (const DataError& e) {
    throw ModelFormatError(std::string("invalid schema in forest document: ") + e.what());
  }
}

}  // namespace amsd
