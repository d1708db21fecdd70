#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/run.hpp"
#include "rough1d/errors.hpp"
#include "rough1d/parallel.hpp"
#include "rough1d/version.hpp"

namespace {

void apply_thread_limit() {
  if (const char* env = std::getenv("ROUGH1D_THREADS")) {
    try {
      rough1d::set_thread_limit(std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "rough1d: ignoring ROUGH1D_THREADS='" << env << "'\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rough1d::cli;
  apply_thread_limit();

  CLI::App app{"Rough integration with Levy-area corrected Newton-Cotes functionals", "rough1d"};
  app.set_version_flag("--version", std::string(rough1d::kVersion));
  app.require_subcommand(1);

  struct Bound {
    CLI::App* sub = nullptr;
    std::map<std::string, std::vector<std::string>> values;
    std::string config_file;
    std::string output;
    std::string format;
  };
  std::map<std::string, Bound> bound;

  for (const auto& name : command_names()) {
    auto& b = bound[name];
    b.sub = app.add_subcommand(name, command_help(name));
    b.sub->set_help_flag("--help", "print this help and exit");  // frees --h for the curve map
    for (const auto& option : command_options(name)) {
      std::string help = option.help;
      if (!option.fallback.empty()) help += " [" + option.fallback + "]";
      b.sub->add_option("--" + option.key, b.values[option.key], help)->expected(option.arity);
    }
    b.sub->add_option("--config", b.config_file, "key=value file; flags take precedence");
    b.sub->add_option("--output,-o", b.output, "output file (default: standard output)");
    b.sub->add_option("--format", b.format, "csv, json or text");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  for (auto& [name, b] : bound) {
    if (!b.sub->parsed()) continue;
    try {
      std::map<std::string, std::string> flags;
      for (const auto& [key, values] : b.values) {
        if (b.sub->get_option("--" + key)->count() == 0) continue;
        std::string joined;
        for (const auto& v : values) joined += (joined.empty() ? "" : " ") + v;
        flags[key] = joined;
      }
      if (!b.output.empty()) flags["output"] = b.output;
      if (!b.format.empty()) flags["format"] = b.format;
      const auto file_entries = b.config_file.empty() ? std::map<std::string, std::string>{}
                                                      : read_config_file(b.config_file);
      return run(resolve_config(name, flags, file_entries), std::cout, std::cerr);
    } catch (const rough1d::InvalidArgument& e) {
      std::cerr << "rough1d: " << name << ": " << e.what() << '\n';
      return kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "rough1d: " << name << ": " << e.what() << '\n';
      return kExitNumerical;
    }
  }
  return kExitValidation;
}
