#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amsd/data.hpp"

namespace amsd::detail {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC-4180 tokenizer: quoted fields may contain delimiters, newlines and doubled
/// quotes. Unquoted fields are trimmed of surrounding blanks. Blank lines are skipped.
std::vector<Record> tokenize_csv(std::string_view text, char delimiter);

struct ColumnSpec {
  std::optional<AttributeKind> kind;
  std::optional<std::vector<std::string>> categories;
};

/// Turns raw string records into a typed Dataset. `declared`, when non-empty, holds
/// one entry per column with kinds/categories fixed by the file format.
Dataset build_dataset(const std::vector<std::string>& names, const std::vector<Record>& rows,
                      const CsvOptions& options, const std::vector<ColumnSpec>& declared = {});

}  // namespace amsd::detail
