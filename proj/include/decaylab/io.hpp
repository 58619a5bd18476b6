#pragma once

// Tables, run manifests and their CSV / JSON serialization.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace decaylab {

using Json = nlohmann::ordered_json;

/// Reals, integers, text and flags. Integers are written as decimal strings
/// in JSON so that exact values survive any reader.
using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  bool empty() const noexcept { return rows.empty(); }
};

/// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_real(double x);
std::string format_cell(const Cell& c);

/// Header row plus one line per row. Throws DomainError on an empty table.
std::string to_csv(const Table& table);
/// {"columns": [...], "rows": [[...], ...]}.
Json to_json(const Table& table);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Metadata attached to every run. Wall time is kept out of the serialized
/// form so that repeated runs stay byte-identical.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::string anchor;
  Json config = Json::object();
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;

  bool all_passed() const;
  std::vector<std::string> failed() const;
  Json to_json() const;
};

/// {"manifest": ..., "table": ..., "summary": ...}; absent parts are omitted.
std::string to_json_document(const RunManifest& manifest, const Table* table, const Json& summary);

/// Writes text to a file, or to standard output for "" and "-". Throws Error
/// when the file cannot be written.
void write_text(const std::string& path, const std::string& text);

}  // namespace decaylab
