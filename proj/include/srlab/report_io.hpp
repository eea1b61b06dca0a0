#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace srlab {

using ordered_json = nlohmann::ordered_json;

// 17 significant digits, enough for exact double round-trips
std::string format_double(double x);

// Stable serialization: keys in insertion order, doubles via format_double,
// non-finite values rendered as null. Output depends only on the tree, so
// identical trees give byte-identical text.
std::string render_json(const ordered_json& doc, int indent = 2);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-style quoting: cells containing comma, quote, or newline are wrapped,
// inner quotes doubled
std::string render_csv(const CsvTable& table);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace srlab
