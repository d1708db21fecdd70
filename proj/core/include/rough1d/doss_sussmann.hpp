#pragma once

#include "rough1d/functions.hpp"
#include "rough1d/paths.hpp"
#include "rough1d/rde_solver.hpp"

namespace rough1d {

// Solution of dy = b(y) dt + sigma(y) dx written as y_t = u(x_t - x_0, a_t),
// where u is the flow of sigma in the driver variable,
//   du/dx = sigma(u),  u(0, v) = v,
// and a absorbs the drift:
//   da/dt = b(u(x_t - x_0, a_t)) / (du/da)(x_t - x_0, a_t),  a_0 = y0.

/// Flows are integrated until |u| exceeds this bound, then reported as blow-up.
inline constexpr double kFlowBlowUp = 1e8;
/// Smallest du/da accepted by solve_a.
inline constexpr double kMinFlowDerivative = 1e-10;

struct FlowValue {
  double u = 0.0;
  double du_da = 1.0;
};

/// Integrates (u, du/da) from 0 to x_value with classical RK4 on steps of at
/// most `step` (backwards for negative x_value); du/da solves the variational
/// equation d(du/da)/dx = sigma'(u) du/da. x_value = 0 returns (v, 1) exactly.
FlowValue flow_u(const SmoothFunction& sigma, double x_value, double v, double step);

/// Evaluator bundle for one sigma and one step size.
class FlowTable {
 public:
  FlowTable(SmoothFunction sigma, double step);

  FlowValue operator()(double x_value, double v) const { return flow_u(sigma_, x_value, v, step_); }
  double u(double x_value, double v) const { return (*this)(x_value, v).u; }
  double du_da(double x_value, double v) const { return (*this)(x_value, v).du_da; }
  double step() const { return step_; }

 private:
  SmoothFunction sigma_;
  double step_;
};

/// a_t on the driver grid: RK4 with one step per cell, the driver read
/// piecewise linearly in t. Throws NumericalFailure when du/da falls below
/// kMinFlowDerivative.
PathGrid solve_a(const RdeProblem& problem, double step);

/// y_t = u(x_t - x_0, a_t) on the driver grid.
PathGrid ds_solution(const RdeProblem& problem, double step);

}  // namespace rough1d
