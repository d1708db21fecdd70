#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rough1d::cli {

enum class Format { csv, json, text };

Format parse_format(const std::string& name);
std::string to_string(Format format);

/// Numeric table with optional trailing key/value lines.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> footer;
};

struct Report {
  std::string command;
  std::map<std::string, std::string> config;  // fully resolved, echoed into the output
  nlohmann::ordered_json result = nlohmann::ordered_json::object();
  std::optional<Table> table;
  std::vector<std::string> text_lines;  // used by Format::text only
};

/// JSON with every floating-point number at 17 significant digits and keys
/// in insertion order; non-finite numbers become null.
std::string dump_json(const nlohmann::ordered_json& value, int indent = 2);

/// CSV: `# rough1d <version>` and `# config k=v ...` header lines, then the
/// table (or, without a table, the scalar result fields as a one-row table),
/// then `# key=value` footer lines. JSON: {tool, version, command, config,
/// result[, table]}.
void emit_report(const Report& report, Format format, std::ostream& out);

}  // namespace rough1d::cli
