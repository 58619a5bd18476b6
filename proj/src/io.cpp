#include "decaylab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "decaylab/errors.hpp"

namespace decaylab {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw DomainError("row has " + std::to_string(row.size()) + " cells, table has " +
                      std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

Json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return format_real(v);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

std::string to_csv(const Table& table) {
  if (table.empty()) throw DomainError("refusing to emit an empty table");
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(format_cell(row[i]));
    }
    out += '\n';
  }
  return out;
}

Json to_json(const Table& table) {
  if (table.empty()) throw DomainError("refusing to emit an empty table");
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  return Json{{"columns", table.columns}, {"rows", std::move(rows)}};
}

bool RunManifest::all_passed() const { return failed().empty(); }

std::vector<std::string> RunManifest::failed() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

Json RunManifest::to_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return Json{{"tool_version", tool_version},
              {"subcommand", subcommand},
              {"anchor", anchor},
              {"seed", std::to_string(seed)},
              {"config", config},
              {"checks", std::move(checks_json)},
              {"all_passed", all_passed()}};
}

std::string to_json_document(const RunManifest& manifest, const Table* table, const Json& summary) {
  Json doc{{"manifest", manifest.to_json()}};
  if (table != nullptr) doc["table"] = to_json(*table);
  if (!summary.is_null()) doc["summary"] = summary;
  return doc.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write to " + path + " failed");
}

}  // namespace decaylab
