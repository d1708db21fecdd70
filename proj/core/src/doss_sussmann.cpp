#include "rough1d/doss_sussmann.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"

namespace rough1d {

FlowValue flow_u(const SmoothFunction& sigma, double x_value, double v, double step) {
  if (!(step > 0.0)) throw InvalidArgument("flow step must be positive");
  if (x_value == 0.0) return {v, 1.0};
  const int steps = static_cast<int>(std::ceil(std::abs(x_value) / step));
  const double h = x_value / steps;

  double u = v;
  double j = 1.0;
  auto field = [&](double uu, double jj, double& du, double& dj) {
    du = sigma(uu);
    dj = sigma.derivative(uu, 1) * jj;
  };
  for (int i = 0; i < steps; ++i) {
    double k1u, k1j, k2u, k2j, k3u, k3j, k4u, k4j;
    field(u, j, k1u, k1j);
    field(u + 0.5 * h * k1u, j + 0.5 * h * k1j, k2u, k2j);
    field(u + 0.5 * h * k2u, j + 0.5 * h * k2j, k3u, k3j);
    field(u + h * k3u, j + h * k3j, k4u, k4j);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    j += h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
    if (!std::isfinite(u) || std::abs(u) > kFlowBlowUp) {
      throw NumericalFailure("flow of '" + sigma.name() + "' from v = " + format_g17(v) + " blows up before x = " +
                             format_g17(x_value));
    }
  }
  return {u, j};
}

FlowTable::FlowTable(SmoothFunction sigma, double step) : sigma_(std::move(sigma)), step_(step) {
  if (!(step_ > 0.0)) throw InvalidArgument("flow step must be positive");
}

PathGrid solve_a(const RdeProblem& problem, double step) {
  if (problem.sigma.max_order() < 1) throw InvalidArgument("sigma needs a derivative");
  const FlowTable flow(problem.sigma, step);
  const auto& x = problem.x;
  const int n = x.n_cells();
  const double h = 1.0 / n;
  const double x0 = x[0];

  auto rate = [&](double driver, double a) {
    const auto value = flow(driver - x0, a);
    if (!(value.du_da >= kMinFlowDerivative)) {
      throw NumericalFailure("flow derivative " + format_g17(value.du_da) + " below " +
                             format_g17(kMinFlowDerivative) + " at a = " + format_g17(a));
    }
    return problem.b(value.u) / value.du_da;
  };

  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  a[0] = problem.y0;
  for (int i = 0; i < n; ++i) {
    const double left = x[i];
    const double right = x[i + 1];
    const double mid = 0.5 * (left + right);
    const double ai = a[static_cast<std::size_t>(i)];
    const double k1 = rate(left, ai);
    const double k2 = rate(mid, ai + 0.5 * h * k1);
    const double k3 = rate(mid, ai + 0.5 * h * k2);
    const double k4 = rate(right, ai + h * k3);
    a[static_cast<std::size_t>(i) + 1] = ai + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return PathGrid(std::move(a), "a");
}

PathGrid ds_solution(const RdeProblem& problem, double step) {
  const auto a = solve_a(problem, step);
  const FlowTable flow(problem.sigma, step);
  const auto& x = problem.x;
  std::vector<double> y(static_cast<std::size_t>(x.n_cells()) + 1);
  for (int i = 0; i <= x.n_cells(); ++i) y[static_cast<std::size_t>(i)] = flow.u(x[i] - x[0], a[i]);
  return PathGrid(std::move(y), "doss-sussmann");
}

}  // namespace rough1d
