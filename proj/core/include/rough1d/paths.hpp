#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rough1d {

/// A real path sampled at t_i = i / n_cells, i = 0..n_cells.
///
/// Immutable after construction. Reads beyond the grid use constant
/// extension: indices (and times) past the right end return the last sample,
/// those before the left end return the first.
class PathGrid {
 public:
  PathGrid(std::vector<double> values, std::string label = {});

  int n_cells() const { return static_cast<int>(values_.size()) - 1; }
  double cell_width() const { return 1.0 / n_cells(); }
  double time(int i) const { return static_cast<double>(i) / n_cells(); }

  std::span<const double> values() const { return values_; }
  const std::string& label() const { return label_; }

  /// Sample at grid index i with constant extension outside [0, n_cells].
  double operator[](int i) const {
    if (i <= 0) return values_.front();
    if (i >= n_cells()) return values_.back();
    return values_[static_cast<std::size_t>(i)];
  }

  /// Piecewise-linear interpolation in t, constant outside [0, 1].
  double at(double t) const;

  double sup_norm() const;
  /// max - min over the grid.
  double oscillation() const;

 private:
  std::vector<double> values_;
  std::string label_;
};

/// Closed range of grid indices [begin, end].
struct IndexWindow {
  int begin = 0;
  int end = 0;

  int cells() const { return end - begin; }
  static IndexWindow full(int n_cells) { return {0, n_cells}; }
};

/// Converts a time window [s, t] to grid indices; throws InvalidArgument if
/// either endpoint is off-grid or s > t.
IndexWindow to_index_window(double s, double t, int n_cells);

/// Converts a step width to a whole number of cells; throws InvalidArgument
/// if the width is not a positive multiple of 1 / n_cells.
int width_to_cells(double width, int n_cells);

struct HolderEstimate {
  double exponent = 0.0;
  double constant = 0.0;
  std::int64_t pairs_checked = 0;
};

/// Named analytic paths on [0, 1].
///
/// Accepted names:
///   constant[:c]            c (default 0)
///   linear[:a,b]            a + b t (default t)
///   sine[:amp,freq,phase]   amp sin(2 pi freq t + phase) (default sin(2 pi t))
///   sine-shifted            sin(2 pi t + pi / 2)
///   poly:c0,c1,...          c0 + c1 t + ...
///   pl:t0:v0,t1:v1,...      piecewise linear through breakpoints (t_k increasing)
class PathFormula {
 public:
  enum class Kind { constant, linear, sine, polynomial, piecewise_linear };

  static PathFormula parse(std::string_view name);

  static PathFormula constant(double c);
  static PathFormula linear(double a, double b);
  static PathFormula sine(double amplitude, double frequency, double phase);
  static PathFormula polynomial(std::vector<double> coefficients);
  static PathFormula piecewise_linear(std::vector<std::pair<double, double>> breakpoints);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  PathFormula(Kind kind, std::vector<double> params, std::string name);

  Kind kind_;
  std::vector<double> params_;
  std::vector<std::pair<double, double>> breakpoints_;
  std::string name_;
};

/// values[i] = formula(i / n_cells). Throws InvalidArgument if n_cells < 1.
PathGrid sample_smooth(const PathFormula& formula, int n_cells);
PathGrid sample_smooth(std::string_view formula_name, int n_cells);

inline constexpr int kMaxFbmCells = 8192;
inline constexpr double kFbmJitter = 1e-12;

/// Exact fractional Brownian motion sample on the grid, via the Cholesky
/// factor of R(s,t) = (s^2H + t^2H - |t-s|^2H) / 2 over t_1..t_n and
/// SplitMix64/Box-Muller normals. values[0] = 0. If the plain factorization
/// fails, it is retried once with kFbmJitter added to the diagonal; a second
/// failure throws NumericalFailure.
PathGrid gen_fbm(double hurst, int n_cells, std::uint64_t seed);

/// Hoelder constant sup |z_t - z_s| / |t - s|^exponent over grid pairs in the
/// window. All pairs are scanned when (cells + 1)^2 <= pair_budget; otherwise
/// every pair whose span is a power of two plus pair_budget random pairs
/// (seeded), which yields a lower bound on the true constant.
HolderEstimate holder_estimate(const PathGrid& path, double exponent, std::int64_t pair_budget,
                               IndexWindow window, std::uint64_t seed = 0);
HolderEstimate holder_estimate(const PathGrid& path, double exponent,
                               std::int64_t pair_budget = std::int64_t{1} << 22,
                               std::uint64_t seed = 0);

/// Path files: CSV with header `t,value`, 17 significant digits. Lines
/// starting with '#' are comments (tool/config provenance) and are skipped
/// on read.
void write_path_csv(std::ostream& out, const PathGrid& path);
PathGrid read_path_csv(std::istream& in, std::string label = {});
PathGrid read_path_csv_file(const std::string& file);

}  // namespace rough1d
