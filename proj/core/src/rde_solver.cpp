#include "rough1d/rde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"
#include "rough1d/rng.hpp"

namespace rough1d {

namespace {

// A~_st = (x_s + x_t)/2 (y_t - y_s) - (Q_t - Q_s) on [first, first + y.size() - 1].
class PicardAreaModel final : public AreaModel {
 public:
  PicardAreaModel(int first, std::vector<double> x, std::vector<double> y, std::vector<double> q)
      : first_(first), x_(std::move(x)), y_(std::move(y)), q_(std::move(q)) {}

  double eval(int s, int t, int, double) const override {
    const auto i = local(s);
    const auto j = local(t);
    if (i == j) return 0.0;
    return 0.5 * (x_[i] + x_[j]) * (y_[j] - y_[i]) - (q_[j] - q_[i]);
  }

 private:
  std::size_t local(int index) const {
    const int last = first_ + static_cast<int>(y_.size()) - 1;
    return static_cast<std::size_t>(std::clamp(index, first_, last) - first_);
  }

  int first_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> q_;
};

LevyArea make_picard_area(int n_cells, int first, std::vector<double> x, std::vector<double> y,
                          std::vector<double> q) {
  return LevyArea(std::make_shared<PicardAreaModel>(first, std::move(x), std::move(y), std::move(q)), 0,
                  AreaProvenance::picard, n_cells);
}

// Visits the grid pairs (i < j) used by the Hoelder-type norms.
template <typename Visit>
void for_each_pair(IndexWindow window, std::int64_t budget, Visit&& visit) {
  const std::int64_t points = window.cells() + 1;
  if (points * points <= budget) {
    for (int i = window.begin; i <= window.end; ++i) {
      for (int j = i + 1; j <= window.end; ++j) visit(i, j);
    }
    return;
  }
  for (int span = 1; span <= window.cells(); span *= 2) {
    for (int i = window.begin; i + span <= window.end; ++i) visit(i, i + span);
  }
  SplitMix64 rng(0xC0FFEEULL + static_cast<std::uint64_t>(window.begin));
  for (std::int64_t k = 0; k < budget; ++k) {
    int i = window.begin + static_cast<int>(rng.below(static_cast<std::uint64_t>(points)));
    int j = window.begin + static_cast<int>(rng.below(static_cast<std::uint64_t>(points)));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    visit(i, j);
  }
}

double difference_norm(const PathGrid& y1, const LevyArea& a1, const PathGrid& y0, const LevyArea& a0,
                       double beta, IndexWindow window, std::int64_t budget) {
  const double n = y1.n_cells();
  double holder_y = 0.0;
  double holder_a = 0.0;
  for_each_pair(window, budget, [&](int i, int j) {
    const double span = (j - i) / n;
    const double dy = (y1[j] - y1[i]) - (y0[j] - y0[i]);
    const double da = a1(i, j) - a0(i, j);
    holder_y = std::max(holder_y, std::abs(dy) / std::pow(span, beta));
    holder_a = std::max(holder_a, std::abs(da) / std::pow(span, 2.0 * beta));
  });
  return holder_y + holder_a;
}

struct CoefficientRange {
  double lo = 0.0;
  double hi = 0.0;
};

CoefficientRange sample_coefficients(const RdeProblem& problem, std::vector<std::string>& warnings) {
  const double radius = 50.0 * (1.0 + std::abs(problem.y0)) * (1.0 + problem.x.oscillation());
  CoefficientRange range{problem.y0 - radius, problem.y0 + radius};
  constexpr int kSamples = 4001;
  double largest = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double v = range.lo + (range.hi - range.lo) * i / (kSamples - 1);
    const double values[] = {problem.sigma(v), problem.sigma.derivative(v, 1), problem.sigma.derivative(v, 2),
                             problem.b(v)};
    for (double value : values) {
      if (!std::isfinite(value)) {
        throw NumericalFailure("coefficient not finite at y = " + format_g17(v));
      }
      largest = std::max(largest, std::abs(value));
    }
  }
  if (largest > 1e6) {
    warnings.push_back("coefficients reach " + format_g17(largest) + " on [" + format_g17(range.lo) + ", " +
                       format_g17(range.hi) + "]");
  }
  return range;
}

std::vector<double> initial_values(const RdeProblem& problem, IndexWindow window, double start,
                                   InitialGuess guess) {
  const int n = problem.x.n_cells();
  std::vector<double> y(static_cast<std::size_t>(n) + 1, start);
  if (guess == InitialGuess::linear) {
    const double slope = problem.sigma(start);
    const double xa = problem.x[window.begin];
    for (int i = 0; i <= n; ++i) {
      const int k = std::clamp(i, window.begin, window.end);
      y[static_cast<std::size_t>(i)] = start + slope * (problem.x[k] - xa);
    }
  }
  return y;
}

}  // namespace

void validate_problem(const RdeProblem& problem) {
  if (!(problem.beta > 1.0 / 3.0 && problem.beta < 1.0)) {
    throw InvalidArgument("beta must lie in (1/3, 1), got " + format_g17(problem.beta));
  }
  if (problem.sigma.max_order() < 2) throw InvalidArgument("sigma needs two derivatives");
  if (!std::isfinite(problem.y0)) throw InvalidArgument("y0 must be finite");
}

double n_norm(const PathGrid& y, const LevyArea& area, double beta, IndexWindow window, std::int64_t pair_budget) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  if (window.begin < 0 || window.end > y.n_cells() || window.begin > window.end) {
    throw InvalidArgument("window is outside the grid");
  }
  const double n = y.n_cells();
  double holder_y = 0.0;
  double holder_a = 0.0;
  for_each_pair(window, pair_budget, [&](int i, int j) {
    const double span = (j - i) / n;
    holder_y = std::max(holder_y, std::abs(y[j] - y[i]) / std::pow(span, beta));
    holder_a = std::max(holder_a, std::abs(area(i, j)) / std::pow(span, 2.0 * beta));
  });
  return holder_y + holder_a;
}

PicardIterate picard_map(const RdeProblem& problem, const PathGrid& y, const LevyArea& area, IndexWindow window,
                         double initial_value) {
  const int n = problem.x.n_cells();
  if (y.n_cells() != n || area.n_cells() != n) throw InvalidArgument("iterate and driver grids differ");
  if (window.begin < 0 || window.end > n || window.begin >= window.end) {
    throw InvalidArgument("Picard window must hold at least one cell inside the grid");
  }
  if (area.order_k_max() != 0) throw InvalidArgument("the Picard map takes an order-0 area");

  const auto& x = problem.x;
  const double h = 1.0 / n;
  const auto size = static_cast<std::size_t>(window.cells()) + 1;
  std::vector<double> xs(size);
  std::vector<double> ys(size);
  std::vector<double> q(size, 0.0);
  double p_plus_b = 0.0;
  ys[0] = initial_value;
  xs[0] = x[window.begin];

  double sigma_i = problem.sigma(y[window.begin]);
  double b_i = problem.b(y[window.begin]);
  for (int i = window.begin; i < window.end; ++i) {
    const auto k = static_cast<std::size_t>(i - window.begin);
    const double sigma_next = problem.sigma(y[i + 1]);
    const double b_next = problem.b(y[i + 1]);
    const double sigma_prime = problem.sigma.derivative(y[i], 1);
    const double dx = x[i + 1] - x[i];
    const double cell_area = area(i, i + 1);

    const double dp = 0.5 * (sigma_i + sigma_next) * dx + sigma_prime * cell_area;
    const double db = 0.5 * (b_i + b_next) * h;
    const double dq = 0.5 * (x[i] * sigma_i + x[i + 1] * sigma_next) * dx + x[i] * sigma_prime * cell_area +
                      0.5 * (x[i] * b_i + x[i + 1] * b_next) * h;
    p_plus_b += dp + db;
    ys[k + 1] = initial_value + p_plus_b;
    q[k + 1] = q[k] + dq;
    xs[k + 1] = x[i + 1];
    sigma_i = sigma_next;
    b_i = b_next;
  }

  std::vector<double> full(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    full[static_cast<std::size_t>(i)] = ys[static_cast<std::size_t>(std::clamp(i, window.begin, window.end) - window.begin)];
  }
  auto area_out = make_picard_area(n, window.begin, std::move(xs), ys, q);
  return {PathGrid(std::move(full), "picard"), std::move(area_out), std::move(q)};
}

RdeSolution solve(const RdeProblem& problem, const SolveOptions& options) {
  validate_problem(problem);
  if (!(options.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (options.max_iter < 1) throw InvalidArgument("max_iter must be positive");

  const int n = problem.x.n_cells();
  RdeSolution solution{PathGrid({problem.y0, problem.y0}), zero_area(1), {}, 0.0, 0, 0, 0, {}};
  const auto range = sample_coefficients(problem, solution.warnings);

  const int min_cells = std::min(kMinSegmentCells, n);
  int delta = std::max(min_cells, n / 4);
  std::vector<double> y_global(static_cast<std::size_t>(n) + 1, problem.y0);
  std::vector<double> q_global(static_cast<std::size_t>(n) + 1, 0.0);

  int a = 0;
  while (a < n) {
    const IndexWindow window{a, std::min(a + delta, n)};
    const double start = y_global[static_cast<std::size_t>(a)];
    PathGrid y(initial_values(problem, window, start, options.initial_guess), "initial");
    LevyArea area = zero_area(n);
    std::vector<double> segment_q;
    std::vector<double> history;
    bool converged = false;
    int slow = 0;

    for (int iter = 0; iter < options.max_iter; ++iter) {
      auto next = picard_map(problem, y, area, window, start);
      for (int i = window.begin; i <= window.end; ++i) {
        const double v = next.y[i];
        if (!std::isfinite(v) || v < range.lo || v > range.hi) {
          throw NumericalFailure("iterate left the sampled coefficient range [" + format_g17(range.lo) + ", " +
                                 format_g17(range.hi) + "] at t = " + format_g17(problem.x.time(i)));
        }
      }
      const double diff = difference_norm(next.y, next.area, y, area, problem.beta, window, options.pair_budget);
      if (!history.empty() && history.back() > 0.0 && diff / history.back() >= 0.9) {
        ++slow;
      } else {
        slow = 0;
      }
      history.push_back(diff);
      y = std::move(next.y);
      area = std::move(next.area);
      segment_q = std::move(next.q);
      if (diff < options.tol) {
        converged = true;
        break;
      }
      if (slow >= 3) break;
    }

    solution.iterations += static_cast<int>(history.size());
    solution.n_norm_history.insert(solution.n_norm_history.end(), history.begin(), history.end());
    if (!converged) {
      if (delta <= min_cells) {
        std::string trail;
        const auto tail = history.size() > 4 ? history.end() - 4 : history.begin();
        for (auto it = tail; it != history.end(); ++it) trail += (trail.empty() ? "" : ", ") + format_g17(*it);
        throw NumericalFailure("no contraction on [" + format_g17(problem.x.time(window.begin)) + ", " +
                               format_g17(problem.x.time(window.end)) + "] at the minimal segment of " +
                               std::to_string(min_cells) + " cells; last difference norms: " + trail);
      }
      delta = std::max(min_cells, delta / 2);
      ++solution.halvings;
      continue;
    }

    const double q_offset = q_global[static_cast<std::size_t>(a)];
    for (int i = window.begin + 1; i <= window.end; ++i) {
      const auto k = static_cast<std::size_t>(i);
      y_global[k] = y[i];
      q_global[k] = q_offset + segment_q[static_cast<std::size_t>(i - window.begin)];
    }
    ++solution.segments;
    a = window.end;
  }

  std::vector<double> xs(problem.x.values().begin(), problem.x.values().end());
  solution.area = make_picard_area(n, 0, std::move(xs), y_global, std::move(q_global));
  solution.y = PathGrid(std::move(y_global), "solution");
  solution.delta_used = static_cast<double>(delta) / n;
  return solution;
}

double residual_check(const RdeProblem& problem, const PathGrid& y, const LevyArea& area) {
  const int n = problem.x.n_cells();
  if (y.n_cells() != n || area.n_cells() != n) throw InvalidArgument("solution and driver grids differ");
  const auto& x = problem.x;
  const double h = 1.0 / n;
  double germs = 0.0;
  double drift = 0.0;
  double worst = std::abs(y[0] - problem.y0);
  for (int i = 0; i < n; ++i) {
    const double si = problem.sigma(y[i]);
    germs += 0.5 * (si + problem.sigma(y[i + 1])) * (x[i + 1] - x[i]) +
             problem.sigma.derivative(y[i], 1) * area(i, i + 1);
    drift += 0.5 * (problem.b(y[i]) + problem.b(y[i + 1])) * h;
    worst = std::max(worst, std::abs(y[i + 1] - problem.y0 - germs - drift));
  }
  return worst;
}

double residual_check(const RdeProblem& problem, const RdeSolution& solution) {
  return residual_check(problem, solution.y, solution.area);
}

}  // namespace rough1d
