#include "rough1d/corrected_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rough1d/errors.hpp"
#include "rough1d/newton_cotes.hpp"
#include "rough1d/parallel.hpp"

namespace rough1d {

namespace {

void check_window(const Curve& curve, IndexWindow window) {
  if (window.begin < 0 || window.end > curve.n_cells() || window.begin > window.end) {
    throw InvalidArgument("window [" + std::to_string(window.begin) + ", " + std::to_string(window.end) +
                          "] is outside the grid");
  }
}

void check_step(int step_cells) {
  if (step_cells < 1) throw InvalidArgument("step must be a positive number of cells");
}

void check_corrected(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m) {
  if (m < 1 || m > kMaxNewtonCotesOrder) {
    throw InvalidArgument("Newton-Cotes order must satisfy 1 <= m <= " + std::to_string(kMaxNewtonCotesOrder));
  }
  if (area.order_k_max() < 2 * m - 2) {
    throw InvalidArgument("order m = " + std::to_string(m) + " needs an area of order " +
                          std::to_string(2 * m - 2) + ", got " + std::to_string(area.order_k_max()));
  }
  if (f.max_order() < 2 * m - 1) {
    throw InvalidArgument("function '" + f.name() + "' lacks derivatives up to order " +
                          std::to_string(2 * m - 1));
  }
  if (area.n_cells() != curve.n_cells()) throw InvalidArgument("area and curve live on different grids");
}

double factorial(int n) {
  double value = 1.0;
  for (int i = 2; i <= n; ++i) value *= i;
  return value;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::rv_symmetric: return "rv_symmetric";
    case Scheme::nc_functional: return "nc_functional";
    case Scheme::corrected_averaged: return "corrected_averaged";
    case Scheme::corrected_germ_sum: return "corrected_germ_sum";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "rv" || name == "rv_symmetric") return Scheme::rv_symmetric;
  if (name == "nc" || name == "nc_functional") return Scheme::nc_functional;
  if (name == "corrected" || name == "corrected_averaged") return Scheme::corrected_averaged;
  if (name == "germ" || name == "corrected_germ_sum") return Scheme::corrected_germ_sum;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

double rv_symmetric_approx(const SmoothFunction& f, const Curve& curve, int step_cells, IndexWindow window) {
  check_step(step_cells);
  check_window(curve, window);
  const auto& x = curve.x();
  const auto& y = curve.y();
  double acc = 0.0;
  for (int u = window.begin; u < window.end; ++u) {
    const double inner = 0.5 * (f(y[u]) + f(y[u + step_cells]));
    acc += (x[u + step_cells] - x[u]) * inner;
  }
  return acc / step_cells;
}

double rv_symmetric_approx(const SmoothFunction& f, const Curve& curve, int step_cells) {
  return rv_symmetric_approx(f, curve, step_cells, IndexWindow::full(curve.n_cells()));
}

double nc_functional_approx(const PlaneFunction& h, const PathGrid& z1, const PathGrid& z2, const PathGrid& x,
                            int m, int step_cells, IndexWindow window) {
  check_step(step_cells);
  if (z1.n_cells() != x.n_cells() || z2.n_cells() != x.n_cells()) {
    throw InvalidArgument("paths live on different grids");
  }
  if (window.begin < 0 || window.end > x.n_cells() || window.begin > window.end) {
    throw InvalidArgument("window is outside the grid");
  }
  const auto& measure = nc_measure_cached(m);
  const auto& atoms = measure.atoms_double();
  const auto& weights = measure.weights_double();
  double acc = 0.0;
  for (int u = window.begin; u < window.end; ++u) {
    const int v = u + step_cells;
    double inner = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double theta = atoms[j];
      inner += weights[j] * h((1.0 - theta) * z1[u] + theta * z1[v], (1.0 - theta) * z2[u] + theta * z2[v]);
    }
    acc += (x[v] - x[u]) * inner;
  }
  return acc / step_cells;
}

double nc_functional_approx(const SmoothFunction& f, const Curve& curve, int m, int step_cells,
                            IndexWindow window) {
  check_step(step_cells);
  check_window(curve, window);
  const auto& measure = nc_measure_cached(m);
  const auto& x = curve.x();
  const auto& y = curve.y();
  double acc = 0.0;
  for (int u = window.begin; u < window.end; ++u) {
    const int v = u + step_cells;
    acc += (x[v] - x[u]) * measure.interpolate(f, y[u], y[v]);
  }
  return acc / step_cells;
}

double cell_germ(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int a, int b) {
  const auto& measure = nc_measure_cached(m);
  const double ya = curve.y()[a];
  double value = (curve.x()[b] - curve.x()[a]) * measure.interpolate(f, ya, curve.y()[b]);
  for (int k = 0; k <= 2 * m - 2; ++k) {
    value += f.derivative(ya, k + 1) / factorial(k + 1) * area(a, b, k, ya);
  }
  return value;
}

ApproximantResult corrected_approx(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m,
                                   int step_cells, IndexWindow window) {
  check_step(step_cells);
  check_window(curve, window);
  check_corrected(f, curve, area, m);
  double acc = 0.0;
  for (int u = window.begin; u < window.end; ++u) acc += cell_germ(f, curve, area, m, u, u + step_cells);
  return {acc / step_cells, static_cast<double>(step_cells) / curve.n_cells(), Scheme::corrected_averaged, m};
}

ApproximantResult corrected_approx(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m,
                                   int step_cells) {
  return corrected_approx(f, curve, area, m, step_cells, IndexWindow::full(curve.n_cells()));
}

double germ_sum_cells(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int cell_cells,
                      IndexWindow window) {
  check_step(cell_cells);
  check_window(curve, window);
  check_corrected(f, curve, area, m);
  if (window.cells() % cell_cells != 0) {
    throw InvalidArgument("cells of width " + std::to_string(cell_cells) + " do not tile a window of " +
                          std::to_string(window.cells()) + " cells");
  }
  double acc = 0.0;
  for (int a = window.begin; a < window.end; a += cell_cells) acc += cell_germ(f, curve, area, m, a, a + cell_cells);
  return acc;
}

double germ_sum(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int level,
                IndexWindow window) {
  if (level < 0 || level > 30) throw InvalidArgument("dyadic level must lie in [0, 30]");
  const int pieces = 1 << level;
  if (window.cells() <= 0 || window.cells() % pieces != 0) {
    throw InvalidArgument("2^" + std::to_string(level) + " does not divide a window of " +
                          std::to_string(window.cells()) + " cells");
  }
  return germ_sum_cells(f, curve, area, m, window.cells() / pieces, window);
}

double dyadic_refine(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int step_cells,
                     int level) {
  if (level < 0 || level > 30) throw InvalidArgument("dyadic level must lie in [0, 30]");
  check_step(step_cells);
  if (step_cells % (1 << level) != 0) {
    throw InvalidArgument("step of " + std::to_string(step_cells) + " cells cannot be halved " +
                          std::to_string(level) + " times on the grid");
  }
  return corrected_approx(f, curve, area, m, step_cells >> level).value;
}

std::vector<int> default_ladder(int n_cells) {
  std::vector<int> steps;
  for (int q = 8; n_cells / q >= 8; q *= 2) {
    if (n_cells % q == 0) steps.push_back(n_cells / q);
  }
  return steps;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("slope fit needs matching samples");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] != 0.0 && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::abs(y[i])));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double count = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

ConvergenceReport converge(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m,
                           const std::vector<int>& ladder_steps, double alpha) {
  if (ladder_steps.size() < 4) throw InvalidArgument("a convergence ladder needs at least 4 steps");
  for (std::size_t i = 0; i < ladder_steps.size(); ++i) {
    check_step(ladder_steps[i]);
    if (i > 0 && ladder_steps[i] >= ladder_steps[i - 1]) {
      throw InvalidArgument("ladder steps must be strictly decreasing");
    }
  }
  check_corrected(f, curve, area, m);

  ConvergenceReport report;
  report.order_m = m;
  report.predicted_rate = std::min((2.0 * m + 1.0) * alpha - 1.0, alpha);
  report.extrapolated_limit = germ_sum_cells(f, curve, area, m, 1, IndexWindow::full(curve.n_cells()));

  std::vector<double> eps;
  std::vector<double> residuals;
  const double scale = std::max(1.0, std::abs(report.extrapolated_limit));
  bool exact = true;
  report.ladder.resize(ladder_steps.size());
  parallel_for(static_cast<int>(ladder_steps.size()), [&](int i) {
    auto& point = report.ladder[static_cast<std::size_t>(i)];
    point.step_cells = ladder_steps[static_cast<std::size_t>(i)];
    point.epsilon = static_cast<double>(point.step_cells) / curve.n_cells();
    point.value = corrected_approx(f, curve, area, m, point.step_cells).value;
    point.residual = std::abs(point.value - report.extrapolated_limit);
  });
  for (const auto& point : report.ladder) {
    exact = exact && point.residual <= 1e-13 * scale;
    eps.push_back(point.epsilon);
    residuals.push_back(point.residual);
  }
  report.exact = exact;
  if (!exact) {
    report.empirical_rate = log_log_slope(eps, residuals);
    report.points_regressed =
        static_cast<int>(std::count_if(residuals.begin(), residuals.end(), [](double r) { return r != 0.0; }));
  }
  return report;
}

double local_germ(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int s, int t) {
  if (s < 0 || t > curve.n_cells() || t <= s) throw InvalidArgument("local germ needs grid indices s < t");
  if (area.n_cells() != curve.n_cells()) throw InvalidArgument("area and curve live on different grids");
  const int p = t - s;
  const auto& x = curve.x();
  double increments = 0.0;
  double areas = 0.0;
  for (int u = s; u < t; ++u) {
    increments += x[u + p] - x[u];
    areas += area(u, u + p);
  }
  const double ys = curve.y()[s];
  return (f(ys) * increments + f.derivative(ys, 1) * areas) / p;
}

double weighted_cell_germ(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int a, int b) {
  const auto& x = curve.x();
  const auto& y = curve.y();
  const double ya = y[a];
  return 0.5 * (x[a] * f(ya) + x[b] * f(y[b])) * (x[b] - x[a]) + x[a] * f.derivative(ya, 1) * area(a, b);
}

double weighted_corrected_approx(const SmoothFunction& f, const Curve& curve, const LevyArea& area,
                                 int step_cells, IndexWindow window) {
  check_step(step_cells);
  check_window(curve, window);
  check_corrected(f, curve, area, 1);
  double acc = 0.0;
  for (int u = window.begin; u < window.end; ++u) acc += weighted_cell_germ(f, curve, area, u, u + step_cells);
  return acc / step_cells;
}

}  // namespace rough1d
