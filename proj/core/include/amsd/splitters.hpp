#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "amsd/data.hpp"
#include "amsd/stats.hpp"

namespace amsd {

/// Four-way statistical binning at (s1, s2, s3).
struct BinnedSplit {
  SplitPoints points;
  bool operator==(const BinnedSplit&) const = default;
};

/// Binary split: child 0 for x < threshold, child 1 otherwise.
struct ThresholdSplit {
  double threshold = 0.0;
  bool operator==(const ThresholdSplit&) const = default;
};

/// One child per category code of the attribute.
struct CategoricalSplit {
  std::size_t arity = 0;
  bool operator==(const CategoricalSplit&) const = default;
};

struct SplitRule {
  std::size_t attribute = 0;
  std::variant<BinnedSplit, ThresholdSplit, CategoricalSplit> kind;

  std::size_t arity() const;
  bool operator==(const SplitRule&) const = default;
};

/// Child index for a present value; std::nullopt for missing values and unseen codes.
std::optional<std::size_t> route_value(const SplitRule& rule, double value);
std::optional<std::size_t> route_code(const SplitRule& rule, CategoryCode code);
std::optional<std::size_t> route(const SplitRule& rule, const Dataset& ds, std::size_t row);

struct SplitScore {
  double info_gain = 0.0;
  double split_info = 0.0;
  /// NaN when split_info is not above kSplitInfoEpsilon.
  double gain_ratio = 0.0;
  std::vector<std::size_t> child_counts;

  bool gain_ratio_defined() const;
  bool operator==(const SplitScore& other) const;
};

inline constexpr double kSplitInfoEpsilon = 1e-12;

/// Shannon entropy in bits. Throws std::invalid_argument on an all-zero count vector.
double class_entropy(std::span<const std::size_t> counts);

/// Per-child class counts, row-major [child][class].
class ContingencyTable {
 public:
  ContingencyTable(std::size_t arity, std::size_t classes)
      : arity_(arity), classes_(classes), counts_(arity * classes, 0) {}

  void add(std::size_t child, std::size_t label) { ++counts_[child * classes_ + label]; }
  void remove(std::size_t child, std::size_t label) { --counts_[child * classes_ + label]; }
  std::size_t at(std::size_t child, std::size_t label) const { return counts_[child * classes_ + label]; }
  std::span<const std::size_t> child(std::size_t c) const {
    return std::span<const std::size_t>(counts_).subspan(c * classes_, classes_);
  }
  std::size_t arity() const { return arity_; }
  std::size_t classes() const { return classes_; }

 private:
  std::size_t arity_;
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

/// Information gain, split information and gain ratio of a partition. Empty children
/// contribute to neither sum. Throws std::invalid_argument on an empty partition.
SplitScore score_table(const ContingencyTable& table);

/// Same as score_table, built from explicit label / child-index sequences.
SplitScore score_partition(std::span<const ClassIndex> parent_labels,
                           std::span<const std::size_t> child_assignment, std::size_t arity,
                           std::size_t classes);

struct Proposal {
  SplitRule rule;
  SplitScore score;
};

/// Statistics gathered while proposing a binned split; handy for instrumentation.
struct BinnedDiagnostics {
  MomentsResult moments;
  AdaptiveMultipliers multipliers;
};

std::optional<Proposal> propose_msd(const RowView& view, std::size_t attribute,
                                    BinnedDiagnostics* diagnostics = nullptr);
std::optional<Proposal> propose_amsd(const RowView& view, std::size_t attribute,
                                     double alpha = kDefaultAlpha,
                                     double gamma_max = kDefaultGammaMax,
                                     BinnedDiagnostics* diagnostics = nullptr);
/// Sorts the view's values and scans every midpoint between adjacent distinct values;
/// highest information gain wins, ties go to the smaller threshold.
std::optional<Proposal> propose_exhaustive(const RowView& view, std::size_t attribute);
std::optional<Proposal> propose_categorical(const RowView& view, std::size_t attribute);

/// Threshold placed between adjacent distinct sorted values a < b. Always satisfies
/// a < t <= b so that `x < t` separates them.
double midpoint_threshold(double a, double b);

struct SplitterStrategy {
  enum class Kind { Exhaustive, MSD, AMSD };
  Kind kind = Kind::AMSD;
  double alpha = kDefaultAlpha;
  double gamma_max = kDefaultGammaMax;

  static SplitterStrategy exhaustive() { return {Kind::Exhaustive, kDefaultAlpha, kDefaultGammaMax}; }
  static SplitterStrategy msd() { return {Kind::MSD, kDefaultAlpha, kDefaultGammaMax}; }
  static SplitterStrategy amsd(double alpha = kDefaultAlpha, double gamma_max = kDefaultGammaMax) {
    return {Kind::AMSD, alpha, gamma_max};
  }

  /// Throws std::invalid_argument unless alpha >= 0, gamma_max >= 0 and
  /// alpha * gamma_max <= 1 (keeps both multipliers non-negative).
  void validate() const;
  bool operator==(const SplitterStrategy&) const = default;
};

const char* to_string(SplitterStrategy::Kind kind);
SplitterStrategy::Kind strategy_kind_from_string(const std::string& text);

/// Proposal for one attribute under a strategy (categorical attributes always use
/// the multiway split).
std::optional<Proposal> propose(const RowView& view, std::size_t attribute,
                                const SplitterStrategy& strategy,
                                BinnedDiagnostics* diagnostics = nullptr);

/// C4.5 selection: among candidates with positive gain, drop those whose gain is
/// below the mean positive gain, then take the highest gain ratio. Candidates must be
/// ordered by attribute index; exact ties keep the earlier one. Returns the index
/// into `candidates`.
std::optional<std::size_t> select_best(std::span<const Proposal> candidates);

}  // namespace amsd
