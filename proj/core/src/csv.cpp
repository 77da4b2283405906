#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "amsd/data.hpp"
#include "amsd/io_util.hpp"
#include "csv_detail.hpp"

namespace amsd {
namespace detail {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_blank(s[b])) ++b;
  while (e > b && is_blank(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<Record> tokenize_csv(std::string_view text, char delimiter) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool quoted = false;      // inside quotes
  bool was_quoted = false;  // current field started with a quote
  bool line_has_content = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(was_quoted ? field : trim(field));
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (line_has_content) records.push_back(std::move(current));
    current = Record{};
    line_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
      line_has_content = true;
    } else if (c == delimiter) {
      line_has_content = true;
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF, handled at '\n'
    } else if (c == '\n' || c == '\r') {
      end_record();
      ++line;
      current.line = line;
    } else {
      if (!is_blank(c)) line_has_content = true;
      if (!was_quoted) field.push_back(c);
    }
  }
  if (quoted) throw DataError("unterminated quoted field starting before line " + std::to_string(line));
  if (line_has_content || !field.empty() || !current.fields.empty()) end_record();
  return records;
}

Dataset build_dataset(const std::vector<std::string>& names, const std::vector<Record>& rows,
                      const CsvOptions& options, const std::vector<ColumnSpec>& declared) {
  const std::size_t width = names.size();
  if (rows.empty()) throw DataError("zero data rows");
  if (width < 2) throw DataError("need at least one predictor column and a class column");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].fields.size() != width)
      throw DataError("ragged row " + std::to_string(r) + " (line " + std::to_string(rows[r].line) +
                      "): expected " + std::to_string(width) + " fields, got " +
                      std::to_string(rows[r].fields.size()));
  }

  std::size_t class_col = width - 1;
  if (!options.class_column.empty()) {
    auto it = std::find(names.begin(), names.end(), options.class_column);
    if (it == names.end()) throw DataError("class column '" + options.class_column + "' not found");
    class_col = static_cast<std::size_t>(it - names.begin());
  }

  const std::unordered_set<std::string> missing(options.missing_tokens.begin(),
                                                options.missing_tokens.end());
  auto is_missing_token = [&](const std::string& t) { return missing.count(t) > 0; };

  std::vector<Attribute> attributes;
  std::vector<std::vector<double>> cont;
  std::vector<std::vector<CategoryCode>> cat;

  for (std::size_t c = 0; c < width; ++c) {
    if (c == class_col) continue;
    Attribute attr;
    attr.name = names[c];

    std::optional<AttributeKind> kind;
    if (auto it = options.kind_overrides.find(attr.name); it != options.kind_overrides.end())
      kind = it->second;
    else if (!declared.empty() && declared[c].kind)
      kind = declared[c].kind;

    if (!kind) {
      bool numeric = true;
      std::set<double> distinct;
      for (const auto& rec : rows) {
        const auto& tok = rec.fields[c];
        if (is_missing_token(tok)) continue;
        auto v = parse_number(tok);
        if (!v) {
          numeric = false;
          break;
        }
        if (distinct.size() <= options.categorical_threshold) distinct.insert(*v);
      }
      kind = numeric && distinct.size() > options.categorical_threshold
                 ? AttributeKind::Continuous
                 : AttributeKind::Categorical;
    }
    attr.kind = *kind;

    std::vector<double> dcol;
    std::vector<CategoryCode> ccol;
    if (attr.kind == AttributeKind::Continuous) {
      dcol.reserve(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& tok = rows[r].fields[c];
        if (is_missing_token(tok)) {
          dcol.push_back(kMissingValue);
          continue;
        }
        auto v = parse_number(tok);
        if (!v)
          throw DataError("unparseable numeric token '" + tok + "' in column '" + attr.name +
                          "' at row " + std::to_string(r) + " (line " +
                          std::to_string(rows[r].line) + ")");
        dcol.push_back(*v);
      }
    } else {
      std::unordered_map<std::string, CategoryCode> codes;
      if (!declared.empty() && declared[c].categories) {
        attr.categories = *declared[c].categories;
        for (std::size_t i = 0; i < attr.categories.size(); ++i)
          codes.emplace(attr.categories[i], static_cast<CategoryCode>(i));
      }
      const bool closed = !declared.empty() && declared[c].categories.has_value();
      ccol.reserve(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& tok = rows[r].fields[c];
        if (is_missing_token(tok)) {
          ccol.push_back(kMissingCode);
          continue;
        }
        auto [it, inserted] = codes.emplace(tok, static_cast<CategoryCode>(attr.categories.size()));
        if (inserted) {
          if (closed)
            throw DataError("value '" + tok + "' not declared for attribute '" + attr.name +
                            "' (line " + std::to_string(rows[r].line) + ")");
          attr.categories.push_back(tok);
        }
        ccol.push_back(it->second);
      }
    }
    attributes.push_back(std::move(attr));
    cont.push_back(std::move(dcol));
    cat.push_back(std::move(ccol));
  }

  std::vector<std::string> class_labels;
  std::unordered_map<std::string, ClassIndex> label_codes;
  const bool closed_labels = !declared.empty() && declared[class_col].categories.has_value();
  if (closed_labels) {
    class_labels = *declared[class_col].categories;
    for (std::size_t i = 0; i < class_labels.size(); ++i)
      label_codes.emplace(class_labels[i], static_cast<ClassIndex>(i));
  }
  std::vector<ClassIndex> labels;
  labels.reserve(rows.size());
  std::size_t present = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& tok = rows[r].fields[class_col];
    if (is_missing_token(tok)) {
      labels.push_back(kMissingLabel);
      continue;
    }
    ++present;
    auto [it, inserted] = label_codes.emplace(tok, static_cast<ClassIndex>(class_labels.size()));
    if (inserted) {
      if (closed_labels)
        throw DataError("class label '" + tok + "' not declared (line " +
                        std::to_string(rows[r].line) + ")");
      class_labels.push_back(tok);
    }
    labels.push_back(it->second);
  }
  if (present == 0) throw DataError("class column '" + names[class_col] + "' is entirely missing");

  Schema schema(std::move(attributes), names[class_col], std::move(class_labels));
  return Dataset(std::move(schema), std::move(cont), std::move(cat), std::move(labels));
}

}  // namespace detail

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  auto records = detail::tokenize_csv(text, options.delimiter);
  if (records.empty()) throw DataError("zero data rows");
  std::vector<std::string> names;
  if (options.header) {
    names = std::move(records.front().fields);
    records.erase(records.begin());
  } else {
    for (std::size_t i = 0; i < records.front().fields.size(); ++i)
      names.push_back("c" + std::to_string(i));
  }
  return detail::build_dataset(names, records, options);
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options);
}

namespace {

std::string quote_field(const std::string& s, char delimiter) {
  const bool needs = s.empty() || s.find(delimiter) != std::string::npos ||
                     s.find('"') != std::string::npos || s.find('\n') != std::string::npos ||
                     s.find('\r') != std::string::npos || s.front() == ' ' || s.back() == ' ' ||
                     s.front() == '\t' || s.back() == '\t';
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_csv(const Dataset& dataset, char delimiter) {
  const Schema& schema = dataset.schema();
  std::string out;
  for (const auto& a : schema.attributes()) {
    out += quote_field(a.name, delimiter);
    out.push_back(delimiter);
  }
  out += quote_field(schema.class_attribute(), delimiter);
  out.push_back('\n');
  for (std::size_t r = 0; r < dataset.row_count(); ++r) {
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      const auto& attr = schema.attribute(a);
      if (attr.kind == AttributeKind::Continuous) {
        const double v = dataset.continuous(a)[r];
        out += is_missing(v) ? "?" : format_number(v);
      } else {
        const CategoryCode c = dataset.categorical(a)[r];
        out += is_missing(c) ? "?" : quote_field(attr.categories[static_cast<std::size_t>(c)], delimiter);
      }
      out.push_back(delimiter);
    }
    const ClassIndex l = dataset.labels()[r];
    out += l == kMissingLabel ? "?" : quote_field(schema.class_labels()[static_cast<std::size_t>(l)], delimiter);
    out.push_back('\n');
  }
  return out;
}

void write_csv(const Dataset& dataset, const std::string& path, char delimiter) {
  write_file_atomic(path, format_csv(dataset, delimiter));
}

Dataset parse_csv_with_schema(const std::string& text, const Schema& schema,
                              const CsvOptions& options) {
  auto records = detail::tokenize_csv(text, options.delimiter);
  std::vector<std::string> names;
  if (options.header) {
    if (records.empty()) throw DataError("zero data rows");
    names = std::move(records.front().fields);
    records.erase(records.begin());
  } else {
    for (const auto& a : schema.attributes()) names.push_back(a.name);
    if (!records.empty() && records.front().fields.size() > names.size())
      names.push_back(schema.class_attribute());
  }
  if (records.empty()) throw DataError("zero data rows");
  for (std::size_t r = 0; r < records.size(); ++r)
    if (records[r].fields.size() != names.size())
      throw DataError("ragged row " + std::to_string(r) + " (line " + std::to_string(records[r].line) + ")");

  auto column_of = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  };

  const std::unordered_set<std::string> missing(options.missing_tokens.begin(),
                                                options.missing_tokens.end());
  std::vector<std::vector<double>> cont(schema.attribute_count());
  std::vector<std::vector<CategoryCode>> cat(schema.attribute_count());
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    const auto& attr = schema.attribute(a);
    auto col = column_of(attr.name);
    if (!col) throw DataError("schema mismatch: input has no column for attribute '" + attr.name + "'");
    if (attr.kind == AttributeKind::Continuous) {
      for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& tok = records[r].fields[*col];
        if (missing.count(tok)) {
          cont[a].push_back(kMissingValue);
          continue;
        }
        auto v = parse_number(tok);
        if (!v)
          throw DataError("schema mismatch: non-numeric token '" + tok + "' for continuous attribute '" +
                          attr.name + "' at row " + std::to_string(r));
        cont[a].push_back(*v);
      }
    } else {
      std::unordered_map<std::string, CategoryCode> codes;
      for (std::size_t i = 0; i < attr.categories.size(); ++i)
        codes.emplace(attr.categories[i], static_cast<CategoryCode>(i));
      for (const auto& rec : records) {
        auto it = codes.find(rec.fields[*col]);
        cat[a].push_back(it == codes.end() ? kMissingCode : it->second);
      }
    }
  }
  std::vector<ClassIndex> labels(records.size(), kMissingLabel);
  if (auto col = column_of(schema.class_attribute())) {
    std::unordered_map<std::string, ClassIndex> codes;
    for (std::size_t i = 0; i < schema.class_labels().size(); ++i)
      codes.emplace(schema.class_labels()[i], static_cast<ClassIndex>(i));
    for (std::size_t r = 0; r < records.size(); ++r) {
      auto it = codes.find(records[r].fields[*col]);
      if (it != codes.end()) labels[r] = it->second;
    }
  }
  return Dataset(schema, std::move(cont), std::move(cat), std::move(labels));
}

Dataset load_csv_with_schema(const std::string& path, const Schema& schema, const CsvOptions& options) {
  return parse_csv_with_schema(read_file(path), schema, options);
}

}  // namespace amsd
