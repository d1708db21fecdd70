#include "rough1d/paths.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"
#include "rough1d/rng.hpp"

namespace rough1d {

namespace {

constexpr double kGridTolerance = 1e-9;

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char separator) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(separator, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

}  // namespace

PathGrid::PathGrid(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() < 2) {
    throw InvalidArgument("PathGrid needs at least one cell (two samples)");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("PathGrid values must be finite");
  }
}

double PathGrid::at(double t) const {
  if (t <= 0.0) return values_.front();
  if (t >= 1.0) return values_.back();
  const double scaled = t * n_cells();
  const int i = std::min(static_cast<int>(scaled), n_cells() - 1);
  const double lambda = scaled - i;
  const double left = values_[static_cast<std::size_t>(i)];
  const double right = values_[static_cast<std::size_t>(i) + 1];
  return left + lambda * (right - left);
}

double PathGrid::sup_norm() const {
  double sup = 0.0;
  for (double v : values_) sup = std::max(sup, std::abs(v));
  return sup;
}

double PathGrid::oscillation() const {
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return *hi - *lo;
}

IndexWindow to_index_window(double s, double t, int n_cells) {
  if (!(s <= t)) throw InvalidArgument("window start must not exceed its end");
  const double begin = s * n_cells;
  const double end = t * n_cells;
  if (std::abs(begin - std::round(begin)) > kGridTolerance ||
      std::abs(end - std::round(end)) > kGridTolerance) {
    throw InvalidArgument("window endpoints must lie on the grid");
  }
  IndexWindow window{static_cast<int>(std::lround(begin)), static_cast<int>(std::lround(end))};
  if (window.begin < 0 || window.end > n_cells) {
    throw InvalidArgument("window must lie inside [0, 1]");
  }
  return window;
}

int width_to_cells(double width, int n_cells) {
  const double scaled = width * n_cells;
  const double rounded = std::round(scaled);
  if (!(width > 0.0) || rounded < 1.0 || std::abs(scaled - rounded) > kGridTolerance * std::max(1.0, scaled)) {
    throw InvalidArgument("width " + format_g17(width) + " is not a positive multiple of 1/" +
                          std::to_string(n_cells));
  }
  return static_cast<int>(rounded);
}

// ---------------------------------------------------------------------------
// Formula catalogue

PathFormula::PathFormula(Kind kind, std::vector<double> params, std::string name)
    : kind_(kind), params_(std::move(params)), name_(std::move(name)) {}

PathFormula PathFormula::constant(double c) {
  return PathFormula(Kind::constant, {c}, "constant:" + format_g17(c));
}

PathFormula PathFormula::linear(double a, double b) {
  return PathFormula(Kind::linear, {a, b}, "linear:" + format_g17(a) + "," + format_g17(b));
}

PathFormula PathFormula::sine(double amplitude, double frequency, double phase) {
  return PathFormula(Kind::sine, {amplitude, frequency, phase},
                     "sine:" + format_g17(amplitude) + "," + format_g17(frequency) + "," +
                         format_g17(phase));
}

PathFormula PathFormula::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw InvalidArgument("polynomial needs at least one coefficient");
  std::string name = "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i) name += ',';
    name += format_g17(coefficients[i]);
  }
  return PathFormula(Kind::polynomial, std::move(coefficients), std::move(name));
}

PathFormula PathFormula::piecewise_linear(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.size() < 2) throw InvalidArgument("piecewise-linear path needs two breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i].first > breakpoints[i - 1].first)) {
      throw InvalidArgument("piecewise-linear breakpoints must have increasing times");
    }
  }
  std::string name = "pl:";
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (i) name += ',';
    name += format_g17(breakpoints[i].first) + ":" + format_g17(breakpoints[i].second);
  }
  PathFormula formula(Kind::piecewise_linear, {}, std::move(name));
  formula.breakpoints_ = std::move(breakpoints);
  return formula;
}

PathFormula PathFormula::parse(std::string_view name) {
  const auto colon = name.find(':');
  const auto head = name.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);

  if (head == "constant") {
    return constant(args.empty() ? 0.0 : parse_double(args));
  }
  if (head == "linear") {
    if (args.empty()) return linear(0.0, 1.0);
    const auto p = parse_list(args);
    if (p.size() != 2) throw InvalidArgument("linear expects 'linear:a,b'");
    return linear(p[0], p[1]);
  }
  if (head == "sine") {
    if (args.empty()) return sine(1.0, 1.0, 0.0);
    const auto p = parse_list(args);
    if (p.empty() || p.size() > 3) throw InvalidArgument("sine expects 'sine:amp[,freq[,phase]]'");
    return sine(p[0], p.size() > 1 ? p[1] : 1.0, p.size() > 2 ? p[2] : 0.0);
  }
  if (head == "sine-shifted" && args.empty()) {
    return sine(1.0, 1.0, std::numbers::pi / 2.0);
  }
  if (head == "poly" && !args.empty()) {
    return polynomial(parse_list(args));
  }
  if (head == "pl" && !args.empty()) {
    std::vector<std::pair<double, double>> points;
    for (auto item : split(args, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw InvalidArgument("pl expects 'pl:t0:v0,t1:v1,...'");
      points.emplace_back(parse_double(parts[0]), parse_double(parts[1]));
    }
    return piecewise_linear(std::move(points));
  }
  throw InvalidArgument("unknown path formula '" + std::string(name) + "'");
}

double PathFormula::operator()(double t) const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::linear:
      return params_[0] + params_[1] * t;
    case Kind::sine:
      return params_[0] * std::sin(2.0 * std::numbers::pi * params_[1] * t + params_[2]);
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
    case Kind::piecewise_linear: {
      if (t <= breakpoints_.front().first) return breakpoints_.front().second;
      if (t >= breakpoints_.back().first) return breakpoints_.back().second;
      const auto upper = std::upper_bound(
          breakpoints_.begin(), breakpoints_.end(), t,
          [](double value, const auto& point) { return value < point.first; });
      const auto& [t1, v1] = *upper;
      const auto& [t0, v0] = *(upper - 1);
      return v0 + (t - t0) / (t1 - t0) * (v1 - v0);
    }
  }
  return 0.0;
}

PathGrid sample_smooth(const PathFormula& formula, int n_cells) {
  if (n_cells < 1) throw InvalidArgument("n_cells must be at least 1");
  std::vector<double> values(static_cast<std::size_t>(n_cells) + 1);
  for (int i = 0; i <= n_cells; ++i) {
    values[static_cast<std::size_t>(i)] = formula(static_cast<double>(i) / n_cells);
  }
  return PathGrid(std::move(values), formula.name());
}

PathGrid sample_smooth(std::string_view formula_name, int n_cells) {
  return sample_smooth(PathFormula::parse(formula_name), n_cells);
}

// ---------------------------------------------------------------------------
// Fractional Brownian motion

namespace {

void fill_fbm_covariance(Eigen::MatrixXd& covariance, double hurst, int n) {
  const double two_h = 2.0 * hurst;
  // |t_i - t_j|^{2H} depends only on |i - j|.
  std::vector<double> power(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    power[static_cast<std::size_t>(k)] = std::pow(static_cast<double>(k) / n, two_h);
  }
  covariance.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      covariance(i, j) = 0.5 * (power[static_cast<std::size_t>(i) + 1] + power[static_cast<std::size_t>(j) + 1] -
                                power[static_cast<std::size_t>(i - j)]);
    }
  }
}

// Lower Cholesky factor of the covariance over t_1..t_n. The factor does not
// depend on the seed, so the most recent one is kept for repeated draws.
std::shared_ptr<const Eigen::MatrixXd> fbm_factor(double hurst, int n) {
  static std::mutex guard;
  static double cached_hurst = -1.0;
  static int cached_n = 0;
  static std::shared_ptr<const Eigen::MatrixXd> cached;
  std::lock_guard lock(guard);
  if (cached && cached_hurst == hurst && cached_n == n) return cached;
  cached.reset();

  auto matrix = std::make_shared<Eigen::MatrixXd>();
  fill_fbm_covariance(*matrix, hurst, n);
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> factor(*matrix);
  if (factor.info() != Eigen::Success) {
    fill_fbm_covariance(*matrix, hurst, n);
    matrix->diagonal().array() += kFbmJitter;
    factor.compute(*matrix);
    if (factor.info() != Eigen::Success) {
      throw NumericalFailure("fBm covariance is not positive definite even after jitter " +
                             format_g17(kFbmJitter));
    }
  }
  cached = std::move(matrix);
  cached_hurst = hurst;
  cached_n = n;
  return cached;
}

}  // namespace

PathGrid gen_fbm(double hurst, int n_cells, std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw InvalidArgument("Hurst index must lie in (0, 1)");
  if (n_cells < 1 || n_cells > kMaxFbmCells) {
    throw InvalidArgument("fBm generation supports 1 <= n_cells <= " + std::to_string(kMaxFbmCells));
  }

  const int n = n_cells;
  const auto factor = fbm_factor(hurst, n);
  const Eigen::MatrixXd& lower = *factor;

  SplitMix64 rng(seed);
  std::vector<double> normals(static_cast<std::size_t>(n));
  for (auto& z : normals) z = rng.normal();

  // Fixed summation order keeps the output bit-reproducible.
  std::vector<double> values(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) acc += lower(i, j) * normals[static_cast<std::size_t>(j)];
    values[static_cast<std::size_t>(i) + 1] = acc;
  }
  return PathGrid(std::move(values),
                  "fbm:" + format_g17(hurst) + "," + std::to_string(n) + "," + std::to_string(seed));
}

// ---------------------------------------------------------------------------
// Hoelder constants

HolderEstimate holder_estimate(const PathGrid& path, double exponent, std::int64_t pair_budget,
                               IndexWindow window, std::uint64_t seed) {
  if (!(exponent > 0.0 && exponent < 1.0)) {
    throw InvalidArgument("Hoelder exponent must lie in (0, 1)");
  }
  if (window.begin < 0 || window.end > path.n_cells() || window.begin > window.end) {
    throw InvalidArgument("Hoelder window outside the grid");
  }
  HolderEstimate estimate{exponent, 0.0, 0};
  const int cells = window.cells();
  if (cells == 0) return estimate;

  const double h = path.cell_width();
  std::vector<double> span_power(static_cast<std::size_t>(cells) + 1);
  for (int d = 1; d <= cells; ++d) span_power[static_cast<std::size_t>(d)] = std::pow(d * h, exponent);

  const auto values = path.values();
  auto visit = [&](int i, int j) {
    const double quotient = std::abs(values[static_cast<std::size_t>(j)] - values[static_cast<std::size_t>(i)]) /
                            span_power[static_cast<std::size_t>(j - i)];
    estimate.constant = std::max(estimate.constant, quotient);
    ++estimate.pairs_checked;
  };

  const auto points = static_cast<std::int64_t>(cells) + 1;
  if (points * points <= pair_budget) {
    for (int i = window.begin; i < window.end; ++i) {
      for (int j = i + 1; j <= window.end; ++j) visit(i, j);
    }
    return estimate;
  }

  for (int span = 1; span <= cells; span *= 2) {
    for (int i = window.begin; i + span <= window.end; ++i) visit(i, i + span);
  }
  SplitMix64 rng(seed);
  for (std::int64_t k = 0; k < pair_budget; ++k) {
    int i = window.begin + static_cast<int>(rng.below(static_cast<std::uint64_t>(points)));
    int j = window.begin + static_cast<int>(rng.below(static_cast<std::uint64_t>(points)));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    visit(i, j);
  }
  return estimate;
}

HolderEstimate holder_estimate(const PathGrid& path, double exponent, std::int64_t pair_budget,
                               std::uint64_t seed) {
  return holder_estimate(path, exponent, pair_budget, IndexWindow::full(path.n_cells()), seed);
}

// ---------------------------------------------------------------------------
// CSV

void write_path_csv(std::ostream& out, const PathGrid& path) {
  out << "t,value\n";
  for (int i = 0; i <= path.n_cells(); ++i) {
    out << format_g17(path.time(i)) << ',' << format_g17(path[i]) << '\n';
  }
}

PathGrid read_path_csv(std::istream& in, std::string label) {
  std::string line;
  bool header_seen = false;
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "t,value") throw InvalidArgument("path CSV must start with header 't,value'");
      header_seen = true;
      continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != 2) throw InvalidArgument("path CSV row must have two columns: " + line);
    times.push_back(parse_double(parts[0]));
    values.push_back(parse_double(parts[1]));
  }
  if (!header_seen) throw InvalidArgument("path CSV is empty");
  if (values.size() < 2) throw InvalidArgument("path CSV needs at least two rows");
  const int n = static_cast<int>(values.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    if (std::abs(times[static_cast<std::size_t>(i)] - static_cast<double>(i) / n) > kGridTolerance) {
      throw InvalidArgument("path CSV times must form the uniform grid i/" + std::to_string(n));
    }
  }
  return PathGrid(std::move(values), std::move(label));
}

PathGrid read_path_csv_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open path file '" + file + "'");
  return read_path_csv(in, file);
}

}  // namespace rough1d
