#include <algorithm>
#include <cctype>
#include <sstream>

#include "amsd/data.hpp"
#include "amsd/io_util.hpp"
#include "csv_detail.hpp"

namespace amsd {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

// Splits `@attribute <name> <type>` where name may be quoted.
std::pair<std::string, std::string> split_attribute(const std::string& rest, std::size_t line) {
  std::string r = strip(rest);
  if (r.empty()) throw DataError("ARFF: empty @attribute at line " + std::to_string(line));
  std::size_t end;
  if (r.front() == '\'' || r.front() == '"') {
    end = r.find(r.front(), 1);
    if (end == std::string::npos) throw DataError("ARFF: unterminated name at line " + std::to_string(line));
    ++end;
  } else {
    end = r.find_first_of(" \t");
    if (end == std::string::npos) throw DataError("ARFF: missing type at line " + std::to_string(line));
  }
  return {unquote(r.substr(0, end)), strip(r.substr(end))};
}

}  // namespace

Dataset parse_arff(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::vector<std::string> names;
  std::vector<detail::ColumnSpec> specs;
  bool in_data = false;
  std::string body;
  std::size_t body_first_line = 0;

  while (std::getline(in, raw)) {
    ++line;
    if (in_data) {
      body += raw;
      body.push_back('\n');
      continue;
    }
    const std::string s = strip(raw);
    if (s.empty() || s.front() == '%') continue;
    const std::string key = lower(s.substr(0, s.find_first_of(" \t")));
    if (key == "@relation") continue;
    if (key == "@attribute") {
      auto [name, type] = split_attribute(s.substr(key.size()), line);
      detail::ColumnSpec spec;
      const std::string t = lower(type);
      if (t == "numeric" || t == "real" || t == "integer") {
        spec.kind = AttributeKind::Continuous;
      } else if (!type.empty() && type.front() == '{') {
        const auto close = type.rfind('}');
        if (close == std::string::npos)
          throw DataError("ARFF: unterminated nominal list at line " + std::to_string(line));
        std::vector<std::string> cats;
        auto recs = detail::tokenize_csv(type.substr(1, close - 1), ',');
        if (!recs.empty())
          for (auto& f : recs.front().fields) cats.push_back(unquote(f));
        spec.kind = AttributeKind::Categorical;
        spec.categories = std::move(cats);
      } else {
        throw DataError("ARFF: unsupported attribute type '" + type + "' at line " + std::to_string(line));
      }
      names.push_back(std::move(name));
      specs.push_back(std::move(spec));
      continue;
    }
    if (key == "@data") {
      in_data = true;
      body_first_line = line + 1;
      continue;
    }
    throw DataError("ARFF: unexpected line " + std::to_string(line) + ": '" + s + "'");
  }
  if (!in_data) throw DataError("ARFF: no @data section");

  auto records = detail::tokenize_csv(body, ',');
  std::vector<detail::Record> rows;
  rows.reserve(records.size());
  for (auto& rec : records) {
    if (!rec.fields.empty() && !rec.fields.front().empty() && rec.fields.front().front() == '%') continue;
    for (auto& f : rec.fields) f = unquote(f);
    rec.line += body_first_line - 1;
    rows.push_back(std::move(rec));
  }
  CsvOptions opts = options;
  if (std::find(opts.missing_tokens.begin(), opts.missing_tokens.end(), "?") == opts.missing_tokens.end())
    opts.missing_tokens.push_back("?");
  return detail::build_dataset(names, rows, opts, specs);
}

Dataset load_arff(const std::string& path, const CsvOptions& options) {
  return parse_arff(read_file(path), options);
}

}  // namespace amsd
