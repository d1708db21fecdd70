// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rough1d/corrected_integral.hpp"
#include "rough1d/doss_sussmann.hpp"
#include "rough1d/levy_area.hpp"
#include "rough1d/newton_cotes.hpp"
#include "rough1d/paths.hpp"
#include "rough1d/rde_solver.hpp"
#include "rough1d/rng.hpp"

#ifdef ROUGH1D_HAVE_CLI
#include "cli/run.hpp"
#endif

using namespace rough1d;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double sup_diff(const PathGrid& a, const PathGrid& b) {
  double out = 0.0;
  for (int i = 0; i <= a.n_cells(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

int failures = 0;

void criterion(const char* id, const char* title, double runtime_limit, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict verdict;
  try {
    verdict = body();
  } catch (const std::exception& e) {
    verdict.pass = false;
    verdict.detail = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < runtime_limit;
  const bool pass = verdict.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %s %s: %s; runtime %.2f s < %g s%s\n", id, pass ? "PASS" : "FAIL", title, verdict.detail.c_str(),
              seconds, runtime_limit, in_time ? "" : " [FAIL]");
  std::fflush(stdout);
}

// Smooth case shared by AC3, AC4 and AC6: x = sin(2 pi t), y = x^2.
struct SmoothCase {
  PathGrid x = sample_smooth("sine", 4096);
  PrimitivePair pair = primitive_pair("square");
  Curve curve = curve_from_map(x, pair.h);
  LevyArea area = area_from_primitive(x, pair.h, pair.primitive);
};

Verdict ac1() {
  Verdict v;
  bool sums = true, symmetric = true, moments = true;
  for (int m = 1; m <= kMaxNewtonCotesOrder; ++m) {
    const auto nu = nc_measure(m);
    Rational total(0);
    for (std::size_t j = 0; j < nu.size(); ++j) {
      total += nu.weights()[j];
      symmetric = symmetric && nu.weights()[j] == nu.weights()[nu.size() - 1 - j] &&
                  nu.atoms()[j] == 1 - nu.atoms()[nu.size() - 1 - j];
    }
    sums = sums && total == 1;
    for (int k = 0; k <= 2 * m - 2; ++k) {
      Rational acc(0);
      for (std::size_t j = 0; j < nu.size(); ++j) {
        Rational power(1);
        for (int r = 0; r < k; ++r) power *= nu.atoms()[j];
        acc += nu.weights()[j] * power;
      }
      moments = moments && acc == Rational(1, k + 1);
    }
  }
  v.require(sums, "sum w_j = 1 exactly for m = 1..8");
  v.require(symmetric, "symmetric atoms and weights");
  v.require(moments, "sum w_j theta_j^k = 1/(k+1) exactly for k <= 2m-2");
  return v;
}

Verdict ac2() {
  Verdict v;
  const std::vector<std::pair<const char*, PathGrid>> drivers = {{"sine", sample_smooth("sine", 1024)},
                                                                 {"fbm(0.6)", gen_fbm(0.6, 1024, 1)}};
  double worst_chasles = 0.0;
  double worst_antisymmetry = 0.0;
  for (const auto& [label, x] : drivers) {
    for (const char* h : {"id", "square", "sin"}) {
      const auto pair = primitive_pair(h);
      const auto report = validate_area(area_from_primitive(x, pair.h, pair.primitive), curve_from_map(x, pair.h),
                                        0.4, 1000, 11);
      worst_chasles = std::max(worst_chasles, report.max_chasles_defect);
      worst_antisymmetry = std::max(worst_antisymmetry, report.max_antisymmetry_defect);
    }
  }
  const Curve sine_curve(sample_smooth("sine", 1024), sample_smooth("sine-shifted", 1024));
  const Curve fbm_curve(gen_fbm(0.6, 1024, 1), gen_fbm(0.6, 1024, 2));
  for (const Curve* curve : {&sine_curve, &fbm_curve}) {
    for (int order : {0, 2}) {
      const auto report = validate_area(pl_area(*curve, order), *curve, 0.4, 1000, 12);
      worst_chasles = std::max(worst_chasles, report.max_chasles_defect);
      worst_antisymmetry = std::max(worst_antisymmetry, report.max_antisymmetry_defect);
    }
  }
  v.require(worst_chasles < 1e-10, "max Chasles defect " + num(worst_chasles) + " < 1e-10");
  v.require(worst_antisymmetry < 1e-10, "max antisymmetry defect " + num(worst_antisymmetry) + " < 1e-10");

  // Zero area on the sine curve: the defect is the largest triangle area,
  // recomputed here by the shoelace formula over the same seeded triples.
  const std::uint64_t seed = 13;
  const auto zero = validate_area(zero_area(1024), sine_curve, 0.4, 1000, seed);
  SplitMix64 rng(seed);
  double largest = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int r = static_cast<int>(rng.below(1025));
    const int s = static_cast<int>(rng.below(1025));
    const int t = static_cast<int>(rng.below(1025));
    const auto p = [&](int i) { return oracle::P2{sine_curve.point(i).x, sine_curve.point(i).y}; };
    largest = std::max(largest, std::abs(oracle::shoelace({p(r), p(s), p(t)})));
  }
  v.require(!zero.passes(), "zero area rejected");
  v.require(std::abs(zero.max_chasles_defect - largest) <= 1e-12 * largest,
            "zero-area defect " + num(zero.max_chasles_defect) + " equals max shoelace area " + num(largest));
  return v;
}

Verdict ac3(const SmoothCase& c) {
  Verdict v;
  const auto f = SmoothFunction::identity();
  const double exact = (std::pow(c.x[4096], 3) - std::pow(c.x[0], 3)) / 3.0;
  const auto report = converge(f, c.curve, c.area, 1, default_ladder(4096), 1.0);
  const double limit_error = std::abs(report.extrapolated_limit - exact);
  v.require(limit_error < 1e-4, "|limit - 0| = " + num(limit_error) + " < 1e-4");
  bool monotone = true;
  double previous = INFINITY;
  for (const auto& point : report.ladder) {
    const double error = std::abs(point.value - exact);
    monotone = monotone && error < previous;
    previous = error;
  }
  v.require(monotone, "error decreases along the ladder (" + num(std::abs(report.ladder.front().value - exact)) +
                          " -> " + num(previous) + ")");
  return v;
}

Verdict ac4(const SmoothCase& c) {
  Verdict v;
  const auto f = SmoothFunction::identity();
  std::vector<double> eps;
  std::vector<double> gaps;
  bool decreasing = true;
  for (int p : default_ladder(4096)) {
    const double gap = std::abs(corrected_approx(f, c.curve, c.area, 1, p).value - rv_symmetric_approx(f, c.curve, p));
    decreasing = decreasing && (gaps.empty() || gap < gaps.back());
    eps.push_back(p / 4096.0);
    gaps.push_back(gap);
  }
  const double slope = log_log_slope(eps, gaps);
  v.require(decreasing, "gap to the symmetric integral decreases");
  v.require(slope >= 1.5, "log-log slope " + num(slope) + " >= 1.5");
  return v;
}

Verdict ac5() {
  // Diagonal curve (x, x) with its polyline area; eps = 1, twelve halvings,
  // differences pooled over seeds 1..10 before the fit.
  Verdict v;
  const double hurst = 0.45;
  const double alpha = hurst - 0.02;
  const double target = std::min(alpha, 3.0 * alpha - 1.0);
  const auto f = SmoothFunction::cosine();
  std::vector<double> widths;
  std::vector<double> diffs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = gen_fbm(hurst, 4096, seed);
    const Curve curve(x, x);
    const auto area = pl_area(curve, 0);
    double previous = dyadic_refine(f, curve, area, 1, 4096, 0);
    for (int level = 0; level < 12; ++level) {
      const double current = dyadic_refine(f, curve, area, 1, 4096, level + 1);
      widths.push_back(std::ldexp(1.0, -level));
      diffs.push_back(current - previous);
      previous = current;
    }
  }
  const double slope = log_log_slope(widths, diffs);
  v.require(std::abs(slope - target) <= 0.25,
            "slope " + num(slope) + " within 0.25 of min(a, 3a-1) = " + num(target) + " (a = " + num(alpha) + ")");
  return v;
}

Verdict ac6(const SmoothCase& c) {
  Verdict v;
  const auto f = SmoothFunction::sine();
  const auto area = pl_area(c.curve, 2);
  const auto two = converge(f, c.curve, area, 2, default_ladder(4096), 1.0);
  const auto one = converge(f, c.curve, area.truncated(0), 1, default_ladder(4096), 1.0);
  const double gap = std::abs(two.extrapolated_limit - one.extrapolated_limit);
  v.require(gap < 1e-3, "|limit(m=2) - limit(m=1)| = " + num(gap) + " < 1e-3");
  return v;
}

Verdict ac7() {
  Verdict v;
  const auto sigma = parse_smooth_function("2+sin");
  const auto b = parse_smooth_function("cos");
  SolveOptions options;
  options.tol = 1e-5;
  auto check = [&](const std::string& label, const PathGrid& x) {
    const RdeProblem problem{x, sigma, b, 0.5, 0.34};
    const auto solution = solve(problem, options);
    const double error = sup_diff(solution.y, ds_solution(problem, 1e-3));
    const double residual = residual_check(problem, solution);
    v.require(error < 5e-2, label + " sup error " + num(error) + " < 5e-2");
    v.require(residual < 10 * options.tol, label + " residual " + num(residual) + " < 1e-4");
    return error;
  };
  const double coarse = check("sine n=512", sample_smooth("sine", 512));
  const double fine = check("sine n=1024", sample_smooth("sine", 1024));
  check("fbm(0.45)", gen_fbm(0.45, 1024, 7));
  check("fbm(0.75)", gen_fbm(0.75, 1024, 7));
  const double ratio = fine / coarse;
  v.require(std::abs(ratio - 0.5) <= 0.3 * 0.5, "error ratio on doubling " + num(ratio) + " in [0.35, 0.65]");
  return v;
}

Verdict ac8() {
  Verdict v;
  const auto x = gen_fbm(0.45, 1024, 3);
  const auto unit = solve(RdeProblem{x, SmoothFunction::constant(1.0), SmoothFunction::constant(0.0), 0.25, 0.4});
  double error = 0.0;
  for (int i = 0; i <= 1024; ++i) error = std::max(error, std::abs(unit.y[i] - (0.25 + x[i] - x[0])));
  v.require(error < 1e-12, "sigma = 1 error " + num(error) + " < 1e-12");

  const auto b = SmoothFunction::cosine();
  const auto drift = solve(RdeProblem{sample_smooth("sine", 1024), SmoothFunction::constant(0.0), b, 0.5, 0.4});
  const auto reference = oracle::rk4_autonomous([&](double y) { return b(y); }, 0.5, 1024, 4096);
  const double ode_error = sup_diff(drift.y, PathGrid(reference));
  v.require(ode_error < 1e-6, "sigma = 0 error vs RK4 " + num(ode_error) + " < 1e-6");
  return v;
}

Verdict ac9() {
  Verdict v;
  const Curve curve(gen_fbm(0.45, 1024, 5), gen_fbm(0.45, 1024, 6));
  const auto area = pl_area(curve, 0);
  const auto f = parse_smooth_function("2+sin");
  const double whole = germ_sum(f, curve, area, 1, 10, IndexWindow{0, 1024});
  const double halves =
      germ_sum(f, curve, area, 1, 9, IndexWindow{0, 512}) + germ_sum(f, curve, area, 1, 9, IndexWindow{512, 1024});
  const double relative = std::abs(whole - halves) / std::abs(whole);
  v.require(relative < 1e-14, "relative additivity defect " + num(relative) + " < 1e-14");
  return v;
}

Verdict ac10() {
  Verdict v;
#ifdef ROUGH1D_HAVE_CLI
  const auto config = cli::resolve_config(
      "compare", {{"sigma", "2+sin"}, {"b", "cos"}, {"y0", "0.5"}, {"beta", "0.34"}, {"fbm", "0.45,512,7"}}, {});
  std::string outputs[2];
  for (auto& output : outputs) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::run(config, out, err);
    v.require(status == cli::kExitOk, "compare exit status " + std::to_string(status));
    output = out.str();
  }
  v.require(!outputs[0].empty() && outputs[0] == outputs[1],
            "two compare runs byte-identical (" + std::to_string(outputs[0].size()) + " bytes)");
#else
  v.require(false, "built without the command-line tool");
#endif
  return v;
}

}  // namespace

int main() {
  const SmoothCase smooth;
  criterion("AC1", "interpolation measure exactness", 1, ac1);
  criterion("AC2", "area axioms", 10, ac2);
  criterion("AC3", "change of variables", 5, [&] { return ac3(smooth); });
  criterion("AC4", "identification with the symmetric integral", 5, [&] { return ac4(smooth); });
  criterion("AC5", "dyadic decay", 30, ac5);
  criterion("AC6", "order compatibility", 10, [&] { return ac6(smooth); });
  criterion("AC7", "solver vs flow oracle", 60, ac7);
  criterion("AC8", "trivial exactness", 5, ac8);
  criterion("AC9", "interval additivity", 1, ac9);
  criterion("AC10", "determinism", 10, ac10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
