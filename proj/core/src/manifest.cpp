#include <filesystem>

#include <json.hpp>

#include "amsd/data.hpp"
#include "amsd/io_util.hpp"

namespace amsd {

namespace fs = std::filesystem;

DatasetManifest parse_manifest(const std::string& text, const std::string& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("manifest: top level must be an object");

  DatasetManifest m;
  try {
    m.source = doc.at("source").get<std::string>();
    m.name = doc.value("name", fs::path(m.source).stem().string());
    m.format = doc.value("format", std::string{});
    m.max_rows = doc.value("max_rows", std::size_t{0});
    auto& o = m.options;
    o.class_column = doc.value("class_column", std::string{});
    const auto delim = doc.value("delimiter", std::string{","});
    if (delim.size() != 1) throw DataError("manifest: delimiter must be one character");
    o.delimiter = delim.front();
    o.header = doc.value("header", true);
    if (doc.contains("missing_tokens")) o.missing_tokens = doc["missing_tokens"].get<std::vector<std::string>>();
    o.categorical_threshold = doc.value("categorical_threshold", o.categorical_threshold);
    if (doc.contains("kinds"))
      for (auto& [name, kind] : doc["kinds"].items())
        o.kind_overrides[name] = attribute_kind_from_string(kind.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }

  fs::path src(m.source);
  if (src.is_relative() && !base_dir.empty()) m.source = (fs::path(base_dir) / src).string();
  if (m.format.empty()) m.format = src.extension() == ".arff" ? "arff" : "csv";
  if (m.format != "csv" && m.format != "arff")
    throw DataError("manifest: unknown format '" + m.format + "'");
  return m;
}

DatasetManifest load_manifest(const std::string& path) {
  return parse_manifest(read_file(path), fs::path(path).parent_path().string());
}

Dataset load_dataset(const DatasetManifest& manifest) {
  if (!fs::exists(manifest.source))
    throw DataError("dataset '" + manifest.name + "': file not found: " + manifest.source);
  Dataset ds = manifest.format == "arff" ? load_arff(manifest.source, manifest.options)
                                         : load_csv(manifest.source, manifest.options);
  if (manifest.max_rows > 0 && manifest.max_rows < ds.row_count()) {
    std::vector<std::size_t> rows(manifest.max_rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    ds = ds.subset(rows);
  }
  return ds;
}

}  // namespace amsd
