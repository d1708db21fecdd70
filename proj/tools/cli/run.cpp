#include "run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rough1d/corrected_integral.hpp"
#include "rough1d/doss_sussmann.hpp"
#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"
#include "rough1d/levy_area.hpp"
#include "rough1d/newton_cotes.hpp"
#include "rough1d/paths.hpp"
#include "rough1d/rde_solver.hpp"

namespace rough1d::cli {

namespace {

using nlohmann::ordered_json;
using Parameters = std::map<std::string, std::string>;

// ---------------------------------------------------------------------------
// Option tables

std::vector<OptionSpec> curve_options() {
  return {
      {"path-x", "sine", "driver x: CSV file, formula name, or fbm:H,N,SEED"},
      {"path-y", "", "second component y: CSV file, formula name, or fbm:H,N,SEED (default y = x)"},
      {"h", "", "take y = h(x) for a named map (id, square, cube, sin, cos, exp, constant:c)"},
      {"n", "1024", "grid cells for formula and fbm paths"},
  };
}

std::vector<OptionSpec> problem_options() {
  return {
      {"sigma", "1", "diffusion coefficient sigma(y), e.g. 2+sin"},
      {"b", "0", "drift coefficient b(y), e.g. cos"},
      {"y0", "0", "initial value"},
      {"beta", "0.4", "Hoelder exponent of the solution, in (1/3, 1)"},
      {"driver", "", "driver CSV file"},
      {"fbm", "", "fBm driver H,N,SEED"},
      {"path", "sine", "driver formula when neither --driver nor --fbm is given"},
      {"n", "1024", "grid cells for formula drivers"},
  };
}

std::vector<OptionSpec> solver_options() {
  return {
      {"tol", "1e-5", "Picard stopping tolerance on successive-difference norms"},
      {"max-iter", "200", "Picard iterations per segment before the segment is halved"},
      {"init", "constant", "initial iterate: constant or linear"},
  };
}

std::vector<OptionSpec> concat(std::vector<std::vector<OptionSpec>> parts) {
  std::vector<OptionSpec> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

struct CommandSpec {
  std::string help;
  Format format;
  std::vector<OptionSpec> options;
};

const std::map<std::string, CommandSpec>& command_table() {
  static const std::map<std::string, CommandSpec> table = [] {
    std::map<std::string, CommandSpec> t;
    t["gen-path"] = {"sample a formula or fBm path on the grid",
                     Format::csv,
                     {{"path", "", "formula name or fbm:H,N,SEED"}, {"n", "1024", "grid cells"}}};
    t["weights"] = {"print the interpolation measure of order m", Format::text, {{"m", "1", "order m, 1..8"}}};
    t["area-check"] = {"audit a Levy area against its curve",
                       Format::json,
                       concat({curve_options(),
                               {{"area", "pl", "primitive, pl, zero, or an area CSV file"},
                                {"order", "0", "area order (pl and zero)"},
                                {"beta", "0.4", "Hoelder exponent for the bound constants"},
                                {"triples", "1000", "random grid triples"},
                                {"seed", "1", "triple sampling seed"}}})};
    t["integrate"] = {"evaluate one approximant",
                      Format::json,
                      concat({curve_options(),
                              {{"f", "identity", "integrand f(y)"},
                               {"area", "pl", "primitive, pl, zero, or an area CSV file"},
                               {"m", "1", "Newton-Cotes order"},
                               {"scheme", "corrected", "rv, nc, corrected or germ"},
                               {"eps", "1/8", "step width 1/q (or decimal) on the grid"},
                               {"window", "0 1", "integration window s t", 2},
                               {"level", "", "germ scheme: dyadic level (default: unit cells)"},
                               {"beta", "0.4", "audit exponent for external areas"}}})};
    t["converge"] = {"corrected approximants along an epsilon ladder",
                     Format::csv,
                     concat({curve_options(),
                             {{"f", "identity", "integrand f(y)"},
                              {"area", "pl", "primitive, pl, zero, or an area CSV file"},
                              {"m", "1", "Newton-Cotes order"},
                              {"alpha", "", "Hoelder exponent for the predicted rate (default: H - 0.02 for fBm, 1 for formulas)"},
                              {"ladder", "", "comma-separated q values for eps = 1/q (default 8, 16, ...)"},
                              {"beta", "0.4", "audit exponent for external areas"}}})};
    t["solve"] = {"solve dy = b(y) dt + sigma(y) dx by Picard iteration",
                  Format::json,
                  concat({problem_options(), solver_options()})};
    t["oracle"] = {"Doss-Sussmann reference solution",
                   Format::csv,
                   concat({problem_options(), {{"step", "1e-3", "flow integration step"}}})};
    t["compare"] = {"solver against the Doss-Sussmann reference",
                    Format::json,
                    concat({problem_options(), solver_options(), {{"step", "1e-3", "flow integration step"}}})};
    return t;
  }();
  return table;
}

const CommandSpec& command_spec(const std::string& command) {
  const auto& table = command_table();
  const auto it = table.find(command);
  if (it == table.end()) throw InvalidArgument("unknown command '" + command + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Parameter parsing

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

const std::string& get(const Parameters& p, const std::string& key) {
  static const std::string empty;
  const auto it = p.find(key);
  return it == p.end() ? empty : it->second;
}

double to_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(value)) {
    throw InvalidArgument("--" + key + ": '" + text + "' is not a finite number");
  }
  return value;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("--" + key + ": '" + text + "' is not an integer");
  }
  return value;
}

double real(const Parameters& p, const std::string& key) { return to_real(key, get(p, key)); }

int integer(const Parameters& p, const std::string& key) {
  const auto value = to_integer(key, get(p, key));
  if (value < -(1LL << 30) || value > (1LL << 30)) throw InvalidArgument("--" + key + " is out of range");
  return static_cast<int>(value);
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, separator)) parts.push_back(trim(part));
  return parts;
}

// "1/q" or a decimal width.
double parse_width(const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return to_real(key, text);
  const double numerator = to_real(key, trim(text.substr(0, slash)));
  const double denominator = to_real(key, trim(text.substr(slash + 1)));
  if (denominator == 0.0) throw InvalidArgument("--" + key + ": zero denominator");
  return numerator / denominator;
}

// ---------------------------------------------------------------------------
// Domain objects from parameters

struct FbmSpec {
  double hurst;
  int n;
  std::uint64_t seed;
};

FbmSpec parse_fbm(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InvalidArgument("--" + key + ": expected H,N,SEED, got '" + text + "'");
  const auto n = to_integer(key, parts[1]);
  const auto seed = to_integer(key, parts[2]);
  if (n < 1 || n > kMaxFbmCells) throw InvalidArgument("--" + key + ": N out of range");
  if (seed < 0) throw InvalidArgument("--" + key + ": SEED must be non-negative");
  return {to_real(key, parts[0]), static_cast<int>(n), static_cast<std::uint64_t>(seed)};
}

PathGrid resolve_path(const std::string& key, const std::string& text, int n) {
  if (text.empty()) throw InvalidArgument("--" + key + " is required");
  if (std::filesystem::is_regular_file(text)) return read_path_csv_file(text);
  if (text.rfind("fbm:", 0) == 0) {
    const auto spec = parse_fbm(key, text.substr(4));
    return gen_fbm(spec.hurst, spec.n, spec.seed);
  }
  return sample_smooth(text, n);
}

struct CurveSetup {
  PathGrid x;
  Curve curve;
  std::optional<PrimitivePair> map;
};

CurveSetup build_curve(const Parameters& p) {
  const int n = integer(p, "n");
  auto x = resolve_path("path-x", get(p, "path-x"), n);
  const auto& h = get(p, "h");
  const auto& path_y = get(p, "path-y");
  if (!h.empty() && !path_y.empty()) throw InvalidArgument("give either --h or --path-y, not both");
  if (!h.empty()) {
    auto pair = primitive_pair(h);
    auto curve = curve_from_map(x, pair.h);
    return {x, std::move(curve), std::move(pair)};
  }
  if (!path_y.empty()) {
    auto y = resolve_path("path-y", path_y, x.n_cells());
    if (y.n_cells() != x.n_cells()) throw InvalidArgument("--path-y and --path-x live on different grids");
    return {x, Curve(x, std::move(y)), std::nullopt};
  }
  return {x, Curve(x, x), std::nullopt};
}

LevyArea build_area(const Parameters& p, const CurveSetup& setup, int order, double audit_beta) {
  const auto& kind = get(p, "area");
  const int n = setup.curve.n_cells();
  if (kind == "primitive") {
    if (!setup.map) throw InvalidArgument("--area primitive needs --h");
    if (order > 0) throw InvalidArgument("--area primitive only provides order 0");
    return area_from_primitive(setup.x, setup.map->h, setup.map->primitive);
  }
  if (kind == "pl") return pl_area(setup.curve, order);
  if (kind == "zero") return zero_area(n, order);
  if (!std::filesystem::is_regular_file(kind)) {
    throw InvalidArgument("--area: expected primitive, pl, zero or an existing file, got '" + kind + "'");
  }
  auto area = read_area_csv_file(kind, n);
  if (area.order_k_max() < order) {
    throw InvalidArgument("area file provides order " + std::to_string(area.order_k_max()) + ", need " +
                          std::to_string(order));
  }
  const auto audit = validate_area(area, setup.curve, audit_beta, 200, 1);
  if (!audit.passes()) {
    throw NumericalFailure("external area fails its audit: Chasles defect " + format_g17(audit.max_chasles_defect) +
                           ", antisymmetry defect " + format_g17(audit.max_antisymmetry_defect));
  }
  return area;
}

RdeProblem build_problem(const Parameters& p) {
  const auto& driver = get(p, "driver");
  const auto& fbm = get(p, "fbm");
  if (!driver.empty() && !fbm.empty()) throw InvalidArgument("give either --driver or --fbm, not both");
  PathGrid x = [&] {
    if (!driver.empty()) return read_path_csv_file(driver);
    if (!fbm.empty()) {
      const auto spec = parse_fbm("fbm", fbm);
      return gen_fbm(spec.hurst, spec.n, spec.seed);
    }
    return sample_smooth(get(p, "path"), integer(p, "n"));
  }();
  RdeProblem problem{std::move(x), parse_smooth_function(get(p, "sigma")), parse_smooth_function(get(p, "b")),
                     real(p, "y0"), real(p, "beta")};
  validate_problem(problem);
  return problem;
}

SolveOptions build_solve_options(const Parameters& p) {
  SolveOptions options;
  options.tol = real(p, "tol");
  options.max_iter = integer(p, "max-iter");
  const auto& init = get(p, "init");
  if (init == "constant") {
    options.initial_guess = InitialGuess::constant;
  } else if (init == "linear") {
    options.initial_guess = InitialGuess::linear;
  } else {
    throw InvalidArgument("--init: expected constant or linear, got '" + init + "'");
  }
  return options;
}

Table path_table(const std::string& column, const PathGrid& path) {
  Table table{{"t", column}, {}, {}};
  for (int i = 0; i <= path.n_cells(); ++i) table.rows.push_back({path.time(i), path[i]});
  return table;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_gen_path(const Parameters& p, Report& report) {
  const auto path = resolve_path("path", get(p, "path"), integer(p, "n"));
  report.result["label"] = path.label();
  report.result["n_cells"] = path.n_cells();
  report.table = path_table("value", path);
}

void cmd_weights(const Parameters& p, Report& report) {
  const auto& measure = nc_measure_cached(integer(p, "m"));
  std::string summary;
  auto& atoms = report.result["atoms"] = ordered_json::array();
  for (std::size_t j = 0; j < measure.size(); ++j) {
    const auto fraction = measure.weights()[j].str();
    summary += (j ? ", " : "") + std::to_string(j) + ": " + fraction;
    atoms.push_back({{"index", static_cast<int>(j)},
                     {"atom", measure.atoms()[j].str()},
                     {"weight", fraction},
                     {"atom_decimal", measure.atoms_double()[j]},
                     {"weight_decimal", measure.weights_double()[j]}});
  }
  report.result["order_m"] = measure.order_m();
  report.text_lines.push_back(summary);
  for (std::size_t j = 0; j < measure.size(); ++j) {
    report.text_lines.push_back("  theta_" + std::to_string(j) + " = " + measure.atoms()[j].str() + " (" +
                                format_g17(measure.atoms_double()[j]) + "), w_" + std::to_string(j) + " = " +
                                measure.weights()[j].str() + " (" + format_g17(measure.weights_double()[j]) + ")");
  }
  Table table{{"index", "atom", "weight"}, {}, {}};
  for (std::size_t j = 0; j < measure.size(); ++j) {
    table.rows.push_back({static_cast<double>(j), measure.atoms_double()[j], measure.weights_double()[j]});
  }
  report.table = std::move(table);
}

bool cmd_area_check(const Parameters& p, Report& report) {
  const auto setup = build_curve(p);
  const double beta = real(p, "beta");
  const auto area = build_area(p, setup, integer(p, "order"), beta);
  const int triples = integer(p, "triples");
  if (triples < 1) throw InvalidArgument("--triples must be positive");
  const auto audit = validate_area(area, setup.curve, beta, triples,
                                   static_cast<std::uint64_t>(to_integer("seed", get(p, "seed"))));
  const bool passed = audit.passes();
  report.result["provenance"] = to_string(area.provenance());
  report.result["order_k_max"] = area.order_k_max();
  report.result["max_chasles_defect"] = audit.max_chasles_defect;
  report.result["max_antisymmetry_defect"] = audit.max_antisymmetry_defect;
  report.result["holder_constant_2beta"] = audit.holder_constant_2beta;
  report.result["shifted_bound_constant"] = audit.shifted_bound_constant;
  report.result["max_triangle_moment"] = audit.max_triangle_moment;
  report.result["triples_checked"] = audit.triples_checked;
  report.result["passed"] = passed;
  return passed;
}

void cmd_integrate(const Parameters& p, Report& report) {
  const auto setup = build_curve(p);
  const auto& curve = setup.curve;
  const int n = curve.n_cells();
  const int m = integer(p, "m");
  const auto scheme = parse_scheme(get(p, "scheme"));
  const auto f = parse_smooth_function(get(p, "f"));
  const int step = width_to_cells(parse_width("eps", get(p, "eps")), n);

  const auto bounds = split(get(p, "window"), ' ');
  if (bounds.size() != 2) throw InvalidArgument("--window expects two values s t");
  const auto window = to_index_window(to_real("window", bounds[0]), to_real("window", bounds[1]), n);

  double value = 0.0;
  switch (scheme) {
    case Scheme::rv_symmetric:
      value = rv_symmetric_approx(f, curve, step, window);
      break;
    case Scheme::nc_functional:
      value = nc_functional_approx(f, curve, m, step, window);
      break;
    case Scheme::corrected_averaged: {
      const auto area = build_area(p, setup, 2 * m - 2, real(p, "beta"));
      value = corrected_approx(f, curve, area, m, step, window).value;
      break;
    }
    case Scheme::corrected_germ_sum: {
      const auto area = build_area(p, setup, 2 * m - 2, real(p, "beta"));
      const auto& level = get(p, "level");
      value = level.empty() ? germ_sum_cells(f, curve, area, m, 1, window)
                            : germ_sum(f, curve, area, m, integer(p, "level"), window);
      break;
    }
  }
  report.result["value"] = value;
  report.result["scheme"] = to_string(scheme);
  report.result["epsilon"] = static_cast<double>(step) / n;
  report.result["order_m"] = m;
}

void cmd_converge(const Parameters& p, Report& report) {
  const auto setup = build_curve(p);
  const auto& curve = setup.curve;
  const int n = curve.n_cells();
  const int m = integer(p, "m");
  const auto f = parse_smooth_function(get(p, "f"));
  const auto area = build_area(p, setup, 2 * m - 2, real(p, "beta"));

  std::vector<int> steps;
  if (get(p, "ladder").empty()) {
    steps = default_ladder(n);
  } else {
    for (const auto& q : split(get(p, "ladder"), ',')) {
      steps.push_back(width_to_cells(1.0 / to_real("ladder", q), n));
    }
  }

  double alpha = 1.0;
  const auto& label = setup.x.label();
  if (!get(p, "alpha").empty()) {
    alpha = real(p, "alpha");
  } else if (label.rfind("fbm:", 0) == 0) {
    alpha = parse_fbm("path-x", label.substr(4)).hurst - 0.02;
  } else if (std::filesystem::is_regular_file(get(p, "path-x"))) {
    throw InvalidArgument("--alpha is required for file paths");
  }

  const auto result = converge(f, curve, area, m, steps, alpha);
  Table table{{"eps", "value", "residual"}, {}, {}};
  for (const auto& point : result.ladder) table.rows.push_back({point.epsilon, point.value, point.residual});
  table.footer = {{"extrapolated_limit", result.extrapolated_limit},
                  {"rate_empirical", result.exact ? 0.0 : result.empirical_rate},
                  {"rate_predicted", result.predicted_rate}};
  report.result["extrapolated_limit"] = result.extrapolated_limit;
  report.result["rate_empirical"] = result.empirical_rate;
  report.result["rate_predicted"] = result.predicted_rate;
  report.result["exact"] = result.exact;
  report.result["alpha"] = alpha;
  report.table = std::move(table);
}

void cmd_solve(const Parameters& p, Report& report) {
  const auto problem = build_problem(p);
  const auto solution = solve(problem, build_solve_options(p));
  report.result["delta_used"] = solution.delta_used;
  report.result["segments"] = solution.segments;
  report.result["iterations"] = solution.iterations;
  report.result["halvings"] = solution.halvings;
  report.result["residual"] = residual_check(problem, solution);
  report.result["n_norm_history"] = solution.n_norm_history;
  report.result["warnings"] = solution.warnings;
  report.table = path_table("y", solution.y);
}

void cmd_oracle(const Parameters& p, Report& report) {
  const auto problem = build_problem(p);
  const auto y = ds_solution(problem, real(p, "step"));
  const auto area = pl_area(Curve(problem.x, y), 0);
  report.result["residual"] = residual_check(problem, y, area);
  report.table = path_table("y", y);
}

void cmd_compare(const Parameters& p, Report& report) {
  const auto problem = build_problem(p);
  const auto solution = solve(problem, build_solve_options(p));
  const auto oracle = ds_solution(problem, real(p, "step"));
  double sup = 0.0;
  double l2 = 0.0;
  const int n = problem.x.n_cells();
  for (int i = 0; i <= n; ++i) {
    const double diff = solution.y[i] - oracle[i];
    sup = std::max(sup, std::abs(diff));
    if (i < n) l2 += diff * diff / n;
  }
  report.result["sup_diff"] = sup;
  report.result["l2_diff"] = std::sqrt(l2);
  report.result["residual_solver"] = residual_check(problem, solution);
  report.result["residual_oracle"] = residual_check(problem, oracle, pl_area(Curve(problem.x, oracle), 0));
  report.result["delta_used"] = solution.delta_used;
  report.result["segments"] = solution.segments;
  report.result["iterations"] = solution.iterations;
  report.result["n_cells"] = n;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"gen-path", "weights", "area-check", "integrate",
                                                 "converge", "solve",   "oracle",     "compare"};
  return names;
}

const std::string& command_help(const std::string& command) { return command_spec(command).help; }

const std::vector<OptionSpec>& command_options(const std::string& command) { return command_spec(command).options; }

Format default_format(const std::string& command) { return command_spec(command).format; }

std::map<std::string, std::string> read_config_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open config file '" + file + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(file + ":" + std::to_string(number) + ": expected key=value");
    }
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& flags,
                         const std::map<std::string, std::string>& file_entries) {
  const auto& spec = command_spec(command);
  RunConfig config;
  config.command = command;
  for (const auto& option : spec.options) {
    if (!option.fallback.empty()) config.parameters[option.key] = option.fallback;
  }
  auto apply = [&](const std::map<std::string, std::string>& entries, const std::string& origin) {
    for (const auto& [key, value] : entries) {
      if (key == "output") {
        config.output_path = value;
      } else if (key == "format") {
        config.format = parse_format(value);
      } else if (std::any_of(spec.options.begin(), spec.options.end(),
                             [&](const OptionSpec& o) { return o.key == key; })) {
        config.parameters[key] = value;
      } else {
        throw InvalidArgument(origin + ": unknown key '" + key + "' for command " + command);
      }
    }
  };
  apply(file_entries, "config file");
  apply(flags, "command line");
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto format = config.format.value_or(default_format(config.command));
    Report report;
    report.command = config.command;
    report.config = config.parameters;
    report.config["format"] = to_string(format);
    if (format == Format::text && config.command != "weights") {
      throw InvalidArgument("text output is only available for weights");
    }

    bool ok = true;
    const auto& p = config.parameters;
    if (config.command == "gen-path") {
      cmd_gen_path(p, report);
    } else if (config.command == "weights") {
      cmd_weights(p, report);
    } else if (config.command == "area-check") {
      ok = cmd_area_check(p, report);
    } else if (config.command == "integrate") {
      cmd_integrate(p, report);
    } else if (config.command == "converge") {
      cmd_converge(p, report);
    } else if (config.command == "solve") {
      cmd_solve(p, report);
    } else if (config.command == "oracle") {
      cmd_oracle(p, report);
    } else if (config.command == "compare") {
      cmd_compare(p, report);
    } else {
      throw InvalidArgument("unknown command '" + config.command + "'");
    }

    if (config.output_path.empty()) {
      emit_report(report, format, out);
    } else {
      std::ofstream file(config.output_path, std::ios::binary);
      if (!file) throw InvalidArgument("cannot write '" + config.output_path + "'");
      emit_report(report, format, file);
      if (!file) throw InvalidArgument("write to '" + config.output_path + "' failed");
    }
    if (!ok) {
      err << "rough1d: " << config.command << ": audit failed: Chasles defect "
          << format_g17(report.result["max_chasles_defect"].get<double>()) << ", antisymmetry defect "
          << format_g17(report.result["max_antisymmetry_defect"].get<double>()) << '\n';
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "rough1d: " << config.command << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalFailure& e) {
    err << "rough1d: " << config.command << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace rough1d::cli
