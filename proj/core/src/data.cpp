#include "amsd/data.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace amsd {

const char* to_string(AttributeKind kind) {
  return kind == AttributeKind::Continuous ? "continuous" : "categorical";
}

AttributeKind attribute_kind_from_string(const std::string& text) {
  if (text == "continuous" || text == "numeric") return AttributeKind::Continuous;
  if (text == "categorical" || text == "nominal") return AttributeKind::Categorical;
  throw DataError("unknown attribute kind '" + text + "'");
}

Schema::Schema(std::vector<Attribute> attributes, std::string class_attribute,
               std::vector<std::string> class_labels)
    : attributes_(std::move(attributes)),
      class_attribute_(std::move(class_attribute)),
      class_labels_(std::move(class_labels)) {
  std::set<std::string> names;
  for (const auto& a : attributes_) {
    if (!names.insert(a.name).second) throw DataError("duplicate attribute name '" + a.name + "'");
    if (a.name == class_attribute_)
      throw DataError("class attribute '" + a.name + "' listed as a predictor");
    if (a.kind == AttributeKind::Continuous && !a.categories.empty())
      throw DataError("continuous attribute '" + a.name + "' has categories");
  }
  if (class_labels_.empty()) throw DataError("schema has no class labels");
  std::set<std::string> labels(class_labels_.begin(), class_labels_.end());
  if (labels.size() != class_labels_.size()) throw DataError("duplicate class label");
}

std::size_t Schema::find(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return i;
  return attributes_.size();
}

namespace {

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  void add(const std::string& s) {
    for (unsigned char c : s) {
      state ^= c;
      state *= 0x100000001b3ULL;
    }
    // field separator so ("ab","c") != ("a","bc")
    state ^= 0xff;
    state *= 0x100000001b3ULL;
  }
};

}  // namespace

std::string Schema::fingerprint() const {
  Fnv1a h;
  for (const auto& a : attributes_) {
    h.add(a.name);
    h.add(to_string(a.kind));
    for (const auto& c : a.categories) h.add(c);
    h.add("|");
  }
  h.add(class_attribute_);
  for (const auto& l : class_labels_) h.add(l);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.state));
  return buf;
}

Dataset::Dataset(Schema schema, std::vector<std::vector<double>> columns_continuous,
                 std::vector<std::vector<CategoryCode>> columns_categorical,
                 std::vector<ClassIndex> labels)
    : schema_(std::move(schema)),
      continuous_(std::move(columns_continuous)),
      categorical_(std::move(columns_categorical)),
      labels_(std::move(labels)) {
  continuous_.resize(schema_.attribute_count());
  categorical_.resize(schema_.attribute_count());
  validate();
}

void Dataset::validate() const {
  const std::size_t n = labels_.size();
  for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
    const auto& attr = schema_.attribute(a);
    if (attr.kind == AttributeKind::Continuous) {
      if (continuous_[a].size() != n || !categorical_[a].empty())
        throw DataError("column length mismatch for attribute '" + attr.name + "'");
    } else {
      if (categorical_[a].size() != n || !continuous_[a].empty())
        throw DataError("column length mismatch for attribute '" + attr.name + "'");
      const auto limit = static_cast<CategoryCode>(attr.categories.size());
      for (CategoryCode c : categorical_[a])
        if (c != kMissingCode && (c < 0 || c >= limit))
          throw DataError("invalid category code in attribute '" + attr.name + "'");
    }
  }
  const auto classes = static_cast<ClassIndex>(schema_.class_count());
  for (ClassIndex l : labels_)
    if (l != kMissingLabel && (l < 0 || l >= classes)) throw DataError("invalid class index");
}

std::span<const double> Dataset::continuous(std::size_t attribute) const {
  if (schema_.attribute(attribute).kind != AttributeKind::Continuous)
    throw DataError("attribute '" + schema_.attribute(attribute).name + "' is not continuous");
  return continuous_[attribute];
}

std::span<const CategoryCode> Dataset::categorical(std::size_t attribute) const {
  if (schema_.attribute(attribute).kind != AttributeKind::Categorical)
    throw DataError("attribute '" + schema_.attribute(attribute).name + "' is not categorical");
  return categorical_[attribute];
}

std::size_t Dataset::missing_label_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kMissingLabel));
}

bool Dataset::has_missing() const {
  if (missing_label_count() > 0) return true;
  for (std::size_t a = 0; a < attribute_count(); ++a) {
    if (schema_.attribute(a).kind == AttributeKind::Continuous) {
      for (double v : continuous_[a])
        if (is_missing(v)) return true;
    } else {
      for (CategoryCode c : categorical_[a])
        if (is_missing(c)) return true;
    }
  }
  return false;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cont(attribute_count());
  std::vector<std::vector<CategoryCode>> cat(attribute_count());
  for (std::size_t a = 0; a < attribute_count(); ++a) {
    if (schema_.attribute(a).kind == AttributeKind::Continuous) {
      cont[a].reserve(rows.size());
      for (std::size_t r : rows) cont[a].push_back(continuous_[a].at(r));
    } else {
      cat[a].reserve(rows.size());
      for (std::size_t r : rows) cat[a].push_back(categorical_[a].at(r));
    }
  }
  std::vector<ClassIndex> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) labels.push_back(labels_.at(r));
  return Dataset(schema_, std::move(cont), std::move(cat), std::move(labels));
}

bool Dataset::operator==(const Dataset& other) const {
  if (schema_ != other.schema_ || labels_ != other.labels_ || categorical_ != other.categorical_)
    return false;
  for (std::size_t a = 0; a < continuous_.size(); ++a) {
    const auto& x = continuous_[a];
    const auto& y = other.continuous_[a];
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (is_missing(x[i]) != is_missing(y[i])) return false;
      if (!is_missing(x[i]) && x[i] != y[i]) return false;
    }
  }
  return true;
}

RowView select_rows(const Dataset& dataset, std::vector<std::size_t> rows) {
  for (std::size_t r : rows)
    if (r >= dataset.row_count())
      throw DataError("row index " + std::to_string(r) + " out of range (row_count " +
                      std::to_string(dataset.row_count()) + ")");
  return RowView(dataset, std::move(rows));
}

RowView all_rows(const Dataset& dataset) {
  std::vector<std::size_t> rows(dataset.row_count());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return RowView(dataset, std::move(rows));
}

MissingPolicy missing_policy_from_string(const std::string& text) {
  if (text == "drop") return MissingPolicy::DropRows;
  if (text == "impute") return MissingPolicy::ImputeMeanMode;
  throw DataError("unknown missing policy '" + text + "' (expected drop|impute)");
}

Dataset apply_missing_policy(const Dataset& dataset, MissingPolicy policy) {
  const Schema& schema = dataset.schema();
  const std::size_t n = dataset.row_count();
  std::vector<std::size_t> keep;
  keep.reserve(n);

  if (policy == MissingPolicy::DropRows) {
    for (std::size_t r = 0; r < n; ++r) {
      bool ok = dataset.labels()[r] != kMissingLabel;
      for (std::size_t a = 0; ok && a < schema.attribute_count(); ++a) {
        ok = schema.attribute(a).kind == AttributeKind::Continuous
                 ? !is_missing(dataset.continuous(a)[r])
                 : !is_missing(dataset.categorical(a)[r]);
      }
      if (ok) keep.push_back(r);
    }
    return dataset.subset(keep);
  }

  for (std::size_t r = 0; r < n; ++r)
    if (dataset.labels()[r] != kMissingLabel) keep.push_back(r);
  const Dataset labelled = dataset.subset(keep);

  std::vector<std::vector<double>> cont(schema.attribute_count());
  std::vector<std::vector<CategoryCode>> cat(schema.attribute_count());
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    const auto& attr = schema.attribute(a);
    if (attr.kind == AttributeKind::Continuous) {
      auto col = labelled.continuous(a);
      double sum = 0.0;
      std::size_t count = 0;
      for (double v : col)
        if (!is_missing(v)) {
          sum += v;
          ++count;
        }
      cont[a].assign(col.begin(), col.end());
      if (count == col.size()) continue;
      if (count == 0) throw DataError("cannot impute attribute '" + attr.name + "': all values missing");
      const double mean = sum / static_cast<double>(count);
      for (double& v : cont[a])
        if (is_missing(v)) v = mean;
    } else {
      auto col = labelled.categorical(a);
      std::vector<std::size_t> freq(attr.categories.size(), 0);
      std::size_t count = 0;
      for (CategoryCode c : col)
        if (!is_missing(c)) {
          ++freq[static_cast<std::size_t>(c)];
          ++count;
        }
      cat[a].assign(col.begin(), col.end());
      if (count == col.size()) continue;
      if (count == 0) throw DataError("cannot impute attribute '" + attr.name + "': all values missing");
      // ties go to the lowest code
      const auto mode = static_cast<CategoryCode>(
          std::max_element(freq.begin(), freq.end()) - freq.begin());
      for (CategoryCode& c : cat[a])
        if (is_missing(c)) c = mode;
    }
  }
  std::vector<ClassIndex> labels(labelled.labels().begin(), labelled.labels().end());
  return Dataset(schema, std::move(cont), std::move(cat), std::move(labels));
}

}  // namespace amsd
