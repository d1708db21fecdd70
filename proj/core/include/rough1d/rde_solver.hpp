#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rough1d/functions.hpp"
#include "rough1d/levy_area.hpp"
#include "rough1d/paths.hpp"

namespace rough1d {

/// dy = b(y) dt + sigma(y) dx on [0, 1], y(0) = y0, sought in C^beta.
struct RdeProblem {
  PathGrid x;
  SmoothFunction sigma;
  SmoothFunction b;
  double y0 = 0.0;
  double beta = 0.4;
};

/// Throws InvalidArgument unless 1/3 < beta < 1 and sigma has two derivatives.
void validate_problem(const RdeProblem& problem);

/// |y|_beta + |A|_{2 beta} over grid pairs of the window: every pair when
/// (cells + 1)^2 <= pair_budget, otherwise power-of-two spans plus
/// pair_budget seeded random pairs.
double n_norm(const PathGrid& y, const LevyArea& area, double beta, IndexWindow window,
              std::int64_t pair_budget = std::int64_t{1} << 18);

struct PicardIterate {
  PathGrid y;       // full grid, constant outside the window
  LevyArea area;    // order 0, provenance picard, clamped to the window
  std::vector<double> q;  // cumulative x-weighted germs from the window start
};

/// One application of the Picard map on `window`, started from initial_value:
///   y~_t = y_a + P_t + B_t, with P the cumulative unit-cell germs of sigma(y)
///   against x under `area` and B the trapezoid sums of b(y);
///   A~_st = (x_s + x_t) / 2 (y~_t - y~_s) - (Q_t - Q_s),
/// Q being the cumulative germs of x sigma(y) dx and x b(y) dt. A~ is
/// antisymmetric and satisfies the Chasles identity by construction.
PicardIterate picard_map(const RdeProblem& problem, const PathGrid& y, const LevyArea& area, IndexWindow window,
                         double initial_value);

enum class InitialGuess {
  constant,  // y = current initial value, A = 0
  linear,    // y = y_a + sigma(y_a)(x - x_a), A = 0
};

struct SolveOptions {
  double tol = 1e-5;
  int max_iter = 200;
  InitialGuess initial_guess = InitialGuess::constant;
  std::int64_t pair_budget = std::int64_t{1} << 18;
};

inline constexpr int kMinSegmentCells = 4;

struct RdeSolution {
  PathGrid y;
  LevyArea area;
  std::vector<double> n_norm_history;  // successive-difference norms, every segment in order
  double delta_used = 0.0;             // final segment length
  int segments = 0;
  int iterations = 0;
  int halvings = 0;
  std::vector<std::string> warnings;
};

/// Picard iteration on segments of length delta, patched by continuity of y.
/// delta starts at a quarter of the horizon (at least kMinSegmentCells cells)
/// and is halved when a segment fails to contract: successive-difference
/// norms with ratio >= 0.9 on three consecutive iterates, or max_iter spent.
/// Throws NumericalFailure at the minimal segment length, or when an iterate
/// leaves the range on which the coefficients were sampled.
RdeSolution solve(const RdeProblem& problem, const SolveOptions& options = {});

/// sup_t |y_t - y0 - G_t - B_t| where G is the cumulative unit-cell germ sum of
/// sigma(y) against x under `area` and B the trapezoid sum of b(y).
double residual_check(const RdeProblem& problem, const PathGrid& y, const LevyArea& area);
double residual_check(const RdeProblem& problem, const RdeSolution& solution);

}  // namespace rough1d
