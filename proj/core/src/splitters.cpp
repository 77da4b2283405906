#include "amsd/splitters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amsd {

std::size_t SplitRule::arity() const {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BinnedSplit>) return 4;
        else if constexpr (std::is_same_v<T, ThresholdSplit>) return 2;
        else return k.arity;
      },
      kind);
}

std::optional<std::size_t> route_value(const SplitRule& rule, double value) {
  if (is_missing(value)) return std::nullopt;
  if (const auto* b = std::get_if<BinnedSplit>(&rule.kind))
    return static_cast<std::size_t>(assign_bin(value, b->points));
  if (const auto* t = std::get_if<ThresholdSplit>(&rule.kind))
    return value < t->threshold ? 0u : 1u;
  return std::nullopt;
}

std::optional<std::size_t> route_code(const SplitRule& rule, CategoryCode code) {
  const auto* c = std::get_if<CategoricalSplit>(&rule.kind);
  if (!c || is_missing(code) || static_cast<std::size_t>(code) >= c->arity) return std::nullopt;
  return static_cast<std::size_t>(code);
}

std::optional<std::size_t> route(const SplitRule& rule, const Dataset& ds, std::size_t row) {
  if (ds.schema().attribute(rule.attribute).kind == AttributeKind::Continuous)
    return route_value(rule, ds.continuous(rule.attribute)[row]);
  return route_code(rule, ds.categorical(rule.attribute)[row]);
}

bool SplitScore::gain_ratio_defined() const { return !std::isnan(gain_ratio); }

bool SplitScore::operator==(const SplitScore& other) const {
  const bool ratios = gain_ratio_defined() ? gain_ratio == other.gain_ratio : !other.gain_ratio_defined();
  return info_gain == other.info_gain && split_info == other.split_info && ratios &&
         child_counts == other.child_counts;
}

double class_entropy(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("class_entropy: empty count vector");
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

struct GainParts {
  double info_gain;
  std::size_t total;
};

// Shared by score_table and the exhaustive sweep so both produce identical bits.
GainParts info_gain_of(const ContingencyTable& t, std::vector<std::size_t>& parent_scratch) {
  parent_scratch.assign(t.classes(), 0);
  std::size_t total = 0;
  for (std::size_t c = 0; c < t.arity(); ++c)
    for (std::size_t k = 0; k < t.classes(); ++k) {
      parent_scratch[k] += t.at(c, k);
      total += t.at(c, k);
    }
  if (total == 0) throw std::invalid_argument("score: empty partition");
  const double n = static_cast<double>(total);
  double weighted = 0.0;
  for (std::size_t c = 0; c < t.arity(); ++c) {
    std::size_t size = 0;
    for (auto v : t.child(c)) size += v;
    if (size == 0) continue;
    weighted += static_cast<double>(size) / n * class_entropy(t.child(c));
  }
  return {std::max(0.0, class_entropy(parent_scratch) - weighted), total};
}

}  // namespace

SplitScore score_table(const ContingencyTable& table) {
  std::vector<std::size_t> scratch;
  const auto [gain, total] = info_gain_of(table, scratch);
  SplitScore s;
  s.info_gain = gain;
  s.child_counts.assign(table.arity(), 0);
  const double n = static_cast<double>(total);
  for (std::size_t c = 0; c < table.arity(); ++c) {
    for (auto v : table.child(c)) s.child_counts[c] += v;
    if (s.child_counts[c] == 0) continue;
    const double p = static_cast<double>(s.child_counts[c]) / n;
    s.split_info -= p * std::log2(p);
  }
  s.gain_ratio = s.split_info > kSplitInfoEpsilon ? s.info_gain / s.split_info
                                                  : std::numeric_limits<double>::quiet_NaN();
  return s;
}

SplitScore score_partition(std::span<const ClassIndex> parent_labels,
                           std::span<const std::size_t> child_assignment, std::size_t arity,
                           std::size_t classes) {
  if (parent_labels.empty()) throw std::invalid_argument("score_partition: empty parent");
  if (parent_labels.size() != child_assignment.size())
    throw std::invalid_argument("score_partition: label/assignment length mismatch");
  ContingencyTable t(arity, classes);
  for (std::size_t i = 0; i < parent_labels.size(); ++i) {
    if (child_assignment[i] >= arity) throw std::invalid_argument("score_partition: child index >= arity");
    if (parent_labels[i] < 0 || static_cast<std::size_t>(parent_labels[i]) >= classes)
      throw std::invalid_argument("score_partition: label out of range");
    t.add(child_assignment[i], static_cast<std::size_t>(parent_labels[i]));
  }
  return score_table(t);
}

namespace {

struct Column {
  std::vector<double> values;
  std::vector<ClassIndex> labels;
};

Column gather_present(const RowView& view, std::size_t attribute) {
  const auto col = view.dataset().continuous(attribute);
  const auto labels = view.dataset().labels();
  Column out;
  out.values.reserve(view.size());
  out.labels.reserve(view.size());
  for (std::size_t r : view.rows()) {
    const double v = col[r];
    if (is_missing(v)) continue;
    out.values.push_back(v);
    out.labels.push_back(labels[r]);
  }
  return out;
}

std::optional<Proposal> binned_proposal(const RowView& view, std::size_t attribute, bool adaptive,
                                        double alpha, double gamma_max, BinnedDiagnostics* diag) {
  const Column col = gather_present(view, attribute);
  const MomentsResult m = compute_moments(col.values);
  if (diag) diag->moments = m;
  if (!m.ok()) return std::nullopt;
  AdaptiveMultipliers k;
  k.alpha = alpha;
  k.gamma_max = gamma_max;
  SplitPoints points;
  if (adaptive) {
    k = adaptive_multipliers(m.moments.skewness, alpha, gamma_max);
    points = split_points_amsd(m, k);
  } else {
    points = split_points_msd(m);
  }
  if (diag) diag->multipliers = k;
  ContingencyTable table(4, view.dataset().schema().class_count());
  for (std::size_t i = 0; i < col.values.size(); ++i)
    table.add(static_cast<std::size_t>(assign_bin(col.values[i], points)),
              static_cast<std::size_t>(col.labels[i]));
  return Proposal{SplitRule{attribute, BinnedSplit{points}}, score_table(table)};
}

}  // namespace

std::optional<Proposal> propose_msd(const RowView& view, std::size_t attribute, BinnedDiagnostics* diagnostics) {
  return binned_proposal(view, attribute, false, kDefaultAlpha, kDefaultGammaMax, diagnostics);
}

std::optional<Proposal> propose_amsd(const RowView& view, std::size_t attribute, double alpha,
                                     double gamma_max, BinnedDiagnostics* diagnostics) {
  return binned_proposal(view, attribute, true, alpha, gamma_max, diagnostics);
}

double midpoint_threshold(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid > a ? mid : b;
}

inline constexpr double kGainTieTolerance = 1e-12;

std::optional<Proposal> propose_exhaustive(const RowView& view, std::size_t attribute) {
  const auto col = view.dataset().continuous(attribute);
  const auto labels = view.dataset().labels();
  std::vector<std::pair<double, ClassIndex>> items;
  items.reserve(view.size());
  for (std::size_t r : view.rows())
    if (!is_missing(col[r])) items.emplace_back(col[r], labels[r]);
  if (items.size() < 2) return std::nullopt;
  std::sort(items.begin(), items.end());
  if (items.front().first == items.back().first) return std::nullopt;

  const std::size_t classes = view.dataset().schema().class_count();
  ContingencyTable table(2, classes);
  for (const auto& [v, l] : items) table.add(1, static_cast<std::size_t>(l));

  std::vector<std::size_t> scratch;
  double best_gain = -1.0;
  double best_threshold = 0.0;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    table.remove(1, static_cast<std::size_t>(items[i].second));
    table.add(0, static_cast<std::size_t>(items[i].second));
    if (!(items[i].first < items[i + 1].first)) continue;
    const double gain = info_gain_of(table, scratch).info_gain;
    // mirror-image tables can differ in the last bits; keep the smaller threshold
    if (gain > best_gain + kGainTieTolerance) {
      best_gain = gain;
      best_threshold = midpoint_threshold(items[i].first, items[i + 1].first);
    }
  }

  ContingencyTable chosen(2, classes);
  for (const auto& [v, l] : items) chosen.add(v < best_threshold ? 0 : 1, static_cast<std::size_t>(l));
  return Proposal{SplitRule{attribute, ThresholdSplit{best_threshold}}, score_table(chosen)};
}

std::optional<Proposal> propose_categorical(const RowView& view, std::size_t attribute) {
  const auto& attr = view.dataset().schema().attribute(attribute);
  const auto col = view.dataset().categorical(attribute);
  const auto labels = view.dataset().labels();
  const std::size_t arity = attr.categories.size();
  ContingencyTable table(arity, view.dataset().schema().class_count());
  std::vector<bool> seen(arity, false);
  std::size_t distinct = 0;
  for (std::size_t r : view.rows()) {
    const CategoryCode c = col[r];
    if (is_missing(c)) continue;
    const auto ci = static_cast<std::size_t>(c);
    if (!seen[ci]) {
      seen[ci] = true;
      ++distinct;
    }
    table.add(ci, static_cast<std::size_t>(labels[r]));
  }
  if (distinct < 2) return std::nullopt;
  return Proposal{SplitRule{attribute, CategoricalSplit{arity}}, score_table(table)};
}

void SplitterStrategy::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(gamma_max >= 0.0)) throw std::invalid_argument("gamma_max must be >= 0");
  if (kind == Kind::AMSD && alpha * gamma_max > 1.0)
    throw std::invalid_argument("alpha * gamma_max must be <= 1 so multipliers stay non-negative");
}

const char* to_string(SplitterStrategy::Kind kind) {
  switch (kind) {
    case SplitterStrategy::Kind::Exhaustive: return "exhaustive";
    case SplitterStrategy::Kind::MSD: return "msd";
    case SplitterStrategy::Kind::AMSD: return "amsd";
  }
  return "?";
}

SplitterStrategy::Kind strategy_kind_from_string(const std::string& text) {
  if (text == "exhaustive") return SplitterStrategy::Kind::Exhaustive;
  if (text == "msd") return SplitterStrategy::Kind::MSD;
  if (text == "amsd") return SplitterStrategy::Kind::AMSD;
  throw std::invalid_argument("unknown strategy '" + text + "' (expected exhaustive|msd|amsd)");
}

std::optional<Proposal> propose(const RowView& view, std::size_t attribute,
                                const SplitterStrategy& strategy, BinnedDiagnostics* diagnostics) {
  if (view.dataset().schema().attribute(attribute).kind == AttributeKind::Categorical)
    return propose_categorical(view, attribute);
  switch (strategy.kind) {
    case SplitterStrategy::Kind::Exhaustive: return propose_exhaustive(view, attribute);
    case SplitterStrategy::Kind::MSD: return propose_msd(view, attribute, diagnostics);
    case SplitterStrategy::Kind::AMSD:
      return propose_amsd(view, attribute, strategy.alpha, strategy.gamma_max, diagnostics);
  }
  return std::nullopt;
}

std::optional<std::size_t> select_best(std::span<const Proposal> candidates) {
  double sum = 0.0;
  double max_gain = 0.0;
  std::size_t positive = 0;
  for (const auto& c : candidates) {
    if (c.score.info_gain > 0.0) {
      sum += c.score.info_gain;
      max_gain = std::max(max_gain, c.score.info_gain);
      ++positive;
    }
  }
  if (positive == 0) return std::nullopt;
  const double mean = sum / static_cast<double>(positive);

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& s = candidates[i].score;
    if (!(s.info_gain > 0.0) || !s.gain_ratio_defined()) continue;
    // the top-gain candidate always survives rounding in the mean
    if (s.info_gain < mean && s.info_gain != max_gain) continue;
    if (!best || s.gain_ratio > candidates[*best].score.gain_ratio) best = i;
  }
  return best;
}

}  // namespace amsd
