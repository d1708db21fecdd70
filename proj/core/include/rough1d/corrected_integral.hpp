#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rough1d/functions.hpp"
#include "rough1d/levy_area.hpp"
#include "rough1d/paths.hpp"

namespace rough1d {

// Step widths are whole numbers of grid cells: epsilon = step_cells / n_cells.
// Outer u-integrals are left Riemann sums over the grid points u of the
// window [s, t), so the prefactor epsilon^-1 du becomes 1 / step_cells.
// Reads past the grid use constant extension.

enum class Scheme { rv_symmetric, nc_functional, corrected_averaged, corrected_germ_sum };

std::string to_string(Scheme scheme);
/// Accepts rv, nc, corrected, germ and the full names.
Scheme parse_scheme(std::string_view name);

struct ApproximantResult {
  double value = 0.0;
  double epsilon = 0.0;
  Scheme scheme = Scheme::corrected_averaged;
  int order_m = 1;
};

/// h(z1, z2) on the plane.
using PlaneFunction = std::function<double(double, double)>;

/// eps^-1 sum du (f(y_u) + f(y_{u+eps})) / 2 (x_{u+eps} - x_u).
double rv_symmetric_approx(const SmoothFunction& f, const Curve& curve, int step_cells, IndexWindow window);
double rv_symmetric_approx(const SmoothFunction& f, const Curve& curve, int step_cells);

/// eps^-1 sum du (x_{u+eps} - x_u) * sum_j w_j h((1 - theta_j) z_u + theta_j z_{u+eps}),
/// interpolating along the plane vector z = (z1, z2).
double nc_functional_approx(const PlaneFunction& h, const PathGrid& z1, const PathGrid& z2, const PathGrid& x,
                            int m, int step_cells, IndexWindow window);
/// The scalar case h(z) = f(y), interpolated along y. With m = 1 this
/// reproduces rv_symmetric_approx bit for bit.
double nc_functional_approx(const SmoothFunction& f, const Curve& curve, int m, int step_cells,
                            IndexWindow window);

/// Newton-Cotes term plus the area correction
///   eps^-1 sum du sum_{k <= 2m-2} f^{(k+1)}(y_u) / (k+1)! A_{u,u+eps}[(Y - y_u)^k].
/// Requires area.order_k_max() >= 2m - 2 and derivatives of f up to 2m - 1.
ApproximantResult corrected_approx(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m,
                                   int step_cells, IndexWindow window);
ApproximantResult corrected_approx(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m,
                                   int step_cells);

/// Germ of one cell [a, b]:
///   (x_b - x_a) sum_j w_j f(y at theta_j) + sum_k f^{(k+1)}(y_a) / (k+1)! A_ab[(Y - y_a)^k].
double cell_germ(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int a, int b);

/// Sum of cell germs over consecutive cells of `cell_cells` grid cells
/// tiling the window. Exactly additive over adjacent windows.
double germ_sum_cells(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int cell_cells,
                      IndexWindow window);
/// Germ sum over the 2^level dyadic cells of the window; throws
/// InvalidArgument unless 2^level divides the window's cell count.
double germ_sum(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int level,
                IndexWindow window);

/// I_n(eps): the averaged corrected approximant at step eps 2^-n, so that
/// I_0(eps) is corrected_approx(eps) exactly.
double dyadic_refine(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m, int step_cells,
                     int level);

struct LadderPoint {
  int step_cells = 0;
  double epsilon = 0.0;
  double value = 0.0;
  double residual = 0.0;  // |value - extrapolated_limit|
};

struct ConvergenceReport {
  std::vector<LadderPoint> ladder;  // epsilon strictly decreasing
  double extrapolated_limit = 0.0;  // germ sum with unit cells over the full grid
  double empirical_rate = 0.0;      // least-squares slope of log residual against log epsilon
  double predicted_rate = 0.0;      // min((2m + 1) alpha - 1, alpha)
  int points_regressed = 0;
  bool exact = false;               // every residual at rounding level; no slope fitted
  int order_m = 1;
};

/// Steps n/8, n/16, ..., 8 cells, keeping the divisors of n_cells.
std::vector<int> default_ladder(int n_cells);

/// Evaluates corrected_approx along the ladder (>= 4 strictly decreasing
/// steps) and fits the rate against the finest germ sum.
ConvergenceReport converge(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int m,
                           const std::vector<int>& ladder_steps, double alpha);

/// Least-squares slope of log |y| against log x over the points with y != 0.
/// Returns NaN with fewer than two usable points.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// f(y_s) / p sum_{u in [s,t)} (x_{u+p} - x_u) + f'(y_s) / p sum_{u in [s,t)} A_{u,u+p},
/// with p = t - s cells.
double local_germ(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int s, int t);

/// m = 1 approximant of the integral of x f(y) against x:
///   eps^-1 sum du [(x_u f(y_u) + x_{u+eps} f(y_{u+eps})) / 2 (x_{u+eps} - x_u) + x_u f'(y_u) A_{u,u+eps}].
/// The curve (x, x) has no area, so the x factor needs no correction.
double weighted_corrected_approx(const SmoothFunction& f, const Curve& curve, const LevyArea& area,
                                 int step_cells, IndexWindow window);

/// Cell germ of weighted_corrected_approx.
double weighted_cell_germ(const SmoothFunction& f, const Curve& curve, const LevyArea& area, int a, int b);

}  // namespace rough1d
