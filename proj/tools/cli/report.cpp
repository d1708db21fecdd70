#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"
#include "rough1d/version.hpp"

namespace rough1d::cli {

namespace {

using nlohmann::ordered_json;

void dump_into(std::ostringstream& out, const ordered_json& value, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* newline = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";

  switch (value.type()) {
    case ordered_json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << '{' << newline;
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ',' << newline;
        first = false;
        out << pad << ordered_json(key).dump() << colon;
        dump_into(out, item, indent, depth + 1);
      }
      out << newline << close_pad << '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(value.begin(), value.end(),
                                     [](const ordered_json& v) { return v.is_structured(); });
      out << '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << (flat ? ", " : ",");
        if (!flat) out << newline << pad;
        first = false;
        dump_into(out, item, indent, depth + 1);
      }
      if (!flat) out << newline << close_pad;
      out << ']';
      return;
    }
    case ordered_json::value_t::number_float: {
      const double number = value.get<double>();
      out << (std::isfinite(number) ? format_g17(number) : "null");
      return;
    }
    default:
      out << value.dump();
  }
}

std::string config_line(const std::map<std::string, std::string>& config) {
  std::string line = "# config";
  for (const auto& [key, value] : config) line += " " + key + "=" + value;
  return line;
}

std::string csv_scalar(const ordered_json& value) {
  if (value.is_number_float()) return format_g17(value.get<double>());
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "text") return Format::text;
  throw InvalidArgument("unknown format '" + name + "' (expected csv, json or text)");
}

std::string to_string(Format format) {
  switch (format) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::text: return "text";
  }
  return "unknown";
}

std::string dump_json(const ordered_json& value, int indent) {
  std::ostringstream out;
  dump_into(out, value, indent, 0);
  return out.str();
}

void emit_report(const Report& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::text:
      for (const auto& line : report.text_lines) out << line << '\n';
      break;

    case Format::json: {
      ordered_json root;
      root["tool"] = kToolName;
      root["version"] = kVersion;
      root["command"] = report.command;
      root["config"] = ordered_json::object();
      for (const auto& [key, value] : report.config) root["config"][key] = value;
      root["result"] = report.result;
      if (report.table) {
        ordered_json table;
        table["columns"] = report.table->columns;
        table["rows"] = ordered_json::array();
        for (const auto& row : report.table->rows) table["rows"].push_back(row);
        for (const auto& [key, value] : report.table->footer) table[key] = value;
        root["table"] = std::move(table);
      }
      out << dump_json(root) << '\n';
      break;
    }

    case Format::csv: {
      out << "# " << kToolName << ' ' << kVersion << '\n';
      out << config_line(report.config) << '\n';
      if (report.table) {
        const auto& table = *report.table;
        for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
        out << '\n';
        for (const auto& row : table.rows) {
          for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_g17(row[i]);
          out << '\n';
        }
        for (const auto& [key, value] : table.footer) out << "# " << key << '=' << format_g17(value) << '\n';
      } else {
        std::string header;
        std::string row;
        for (const auto& [key, value] : report.result.items()) {
          if (value.is_structured()) continue;
          header += (header.empty() ? "" : ",") + key;
          row += (row.empty() ? "" : ",") + csv_scalar(value);
        }
        out << header << '\n';
        if (!header.empty()) out << row << '\n';
      }
      break;
    }
  }
}

}  // namespace rough1d::cli
