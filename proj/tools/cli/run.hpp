#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace rough1d::cli {

enum ExitStatus : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

struct OptionSpec {
  std::string key;
  std::string fallback;  // empty: unset unless given
  std::string help;
  int arity = 1;
};

/// Commands in display order.
const std::vector<std::string>& command_names();
const std::string& command_help(const std::string& command);
/// Accepted keys of a command; throws InvalidArgument for unknown commands.
const std::vector<OptionSpec>& command_options(const std::string& command);
Format default_format(const std::string& command);

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string output_path;  // empty: standard output
  std::optional<Format> format;
};

/// key=value lines; '#' starts a comment line. Keys `output` and `format`
/// fill the corresponding RunConfig fields.
std::map<std::string, std::string> read_config_file(const std::string& file);

/// Flags override config-file entries, which override defaults. Unknown keys
/// throw InvalidArgument.
RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& flags,
                         const std::map<std::string, std::string>& file_entries);

/// Executes the command and writes its report. Returns an ExitStatus;
/// human-readable failures go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rough1d::cli
