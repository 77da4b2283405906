#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace amsd {

/// Raised for malformed input files, inconsistent schemas and invalid row selections.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AttributeKind { Continuous, Categorical };

const char* to_string(AttributeKind kind);
AttributeKind attribute_kind_from_string(const std::string& text);

using CategoryCode = std::int32_t;
using ClassIndex = std::int32_t;

inline constexpr CategoryCode kMissingCode = -1;
inline constexpr ClassIndex kMissingLabel = -1;

/// Sentinel stored in continuous columns for a missing value. Never equal to a finite value.
inline constexpr double kMissingValue = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double value) { return std::isnan(value); }
inline bool is_missing(CategoryCode code) { return code < 0; }

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::Continuous;
  /// Category texts by code; empty for continuous attributes.
  std::vector<std::string> categories;

  bool operator==(const Attribute&) const = default;
};

class Schema {
 public:
  Schema() = default;
  Schema(std::vector<Attribute> attributes, std::string class_attribute,
         std::vector<std::string> class_labels);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute& attribute(std::size_t index) const { return attributes_.at(index); }
  std::size_t attribute_count() const { return attributes_.size(); }
  const std::string& class_attribute() const { return class_attribute_; }
  const std::vector<std::string>& class_labels() const { return class_labels_; }
  std::size_t class_count() const { return class_labels_.size(); }

  /// Index of the named predictor, or attribute_count() when absent.
  std::size_t find(const std::string& name) const;

  /// Stable 64-bit FNV-1a digest of names, kinds, categories and class labels, as 16 hex digits.
  std::string fingerprint() const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<Attribute> attributes_;
  std::string class_attribute_;
  std::vector<std::string> class_labels_;
};

/// Column-major table. Continuous columns hold doubles (NaN = missing), categorical
/// columns hold codes (kMissingCode = missing). Immutable after construction.
class Dataset {
 public:
  Dataset() = default;

  /// `columns_continuous` / `columns_categorical` are indexed by attribute index; the
  /// entry of the kind not matching the attribute must be empty.
  Dataset(Schema schema, std::vector<std::vector<double>> columns_continuous,
          std::vector<std::vector<CategoryCode>> columns_categorical,
          std::vector<ClassIndex> labels);

  const Schema& schema() const { return schema_; }
  std::size_t row_count() const { return labels_.size(); }
  std::size_t attribute_count() const { return schema_.attribute_count(); }

  std::span<const double> continuous(std::size_t attribute) const;
  std::span<const CategoryCode> categorical(std::size_t attribute) const;
  std::span<const ClassIndex> labels() const { return labels_; }

  /// Number of rows whose label is missing.
  std::size_t missing_label_count() const;
  bool has_missing() const;

  /// Copies the given rows (in order, duplicates allowed) into a new dataset.
  Dataset subset(std::span<const std::size_t> rows) const;

  bool operator==(const Dataset& other) const;

 private:
  void validate() const;

  Schema schema_;
  std::vector<std::vector<double>> continuous_;
  std::vector<std::vector<CategoryCode>> categorical_;
  std::vector<ClassIndex> labels_;
};

/// A list of row indices into a dataset. Does not own the dataset; the dataset must
/// outlive the view. Duplicate indices are legal (bootstrap samples).
class RowView {
 public:
  RowView(const Dataset& dataset, std::vector<std::size_t> rows)
      : dataset_(&dataset), rows_(std::move(rows)) {}

  const Dataset& dataset() const { return *dataset_; }
  std::span<const std::size_t> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  std::size_t operator[](std::size_t i) const { return rows_[i]; }

 private:
  const Dataset* dataset_;
  std::vector<std::size_t> rows_;
};

/// Throws DataError naming the first out-of-range index.
RowView select_rows(const Dataset& dataset, std::vector<std::size_t> rows);
RowView all_rows(const Dataset& dataset);

enum class MissingPolicy { DropRows, ImputeMeanMode };

MissingPolicy missing_policy_from_string(const std::string& text);

/// DropRows drops rows with any missing predictor or label. ImputeMeanMode fills
/// continuous gaps with the column mean and categorical gaps with the column mode;
/// rows with a missing label are dropped under both policies.
Dataset apply_missing_policy(const Dataset& dataset, MissingPolicy policy);

// ---------------------------------------------------------------------------
// File ingestion

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  /// Class column by name; empty selects the last column.
  std::string class_column;
  std::vector<std::string> missing_tokens{"?", ""};
  std::map<std::string, AttributeKind> kind_overrides;
  /// A column is inferred Continuous when all tokens are numeric and its distinct
  /// value count exceeds this threshold.
  std::size_t categorical_threshold = 10;
};

Dataset load_csv(const std::string& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

/// Writes a dataset with a header row; the class column comes last.
void write_csv(const Dataset& dataset, const std::string& path, char delimiter = ',');
std::string format_csv(const Dataset& dataset, char delimiter = ',');

/// Parses `text` against an existing schema (e.g. the one embedded in a model).
/// Columns are matched by name; the class column may be absent, in which case every
/// label is kMissingLabel. Unseen categories become kMissingCode, unseen class labels
/// become kMissingLabel.
Dataset parse_csv_with_schema(const std::string& text, const Schema& schema,
                              const CsvOptions& options = {});
Dataset load_csv_with_schema(const std::string& path, const Schema& schema,
                             const CsvOptions& options = {});

/// ARFF subset: @relation, @attribute with `numeric`/`real`/`integer` or nominal
/// `{a,b,...}` types, and a CSV-style @data body. `options.class_column` empty selects
/// the last attribute.
Dataset load_arff(const std::string& path, const CsvOptions& options = {});
Dataset parse_arff(const std::string& text, const CsvOptions& options = {});

/// Benchmark dataset description, stored as a JSON document.
struct DatasetManifest {
  std::string name;
  /// Resolved against the manifest's directory when relative.
  std::string source;
  /// "csv" or "arff"; inferred from the source extension when empty.
  std::string format;
  CsvOptions options;
  /// Keep only the first `max_rows` rows after loading (0 = all).
  std::size_t max_rows = 0;
};

DatasetManifest load_manifest(const std::string& path);
DatasetManifest parse_manifest(const std::string& text, const std::string& base_dir);
Dataset load_dataset(const DatasetManifest& manifest);

}  // namespace amsd
