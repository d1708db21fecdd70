#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rough1d/corrected_integral.hpp"
#include "rough1d/errors.hpp"
#include "rough1d/functions.hpp"
#include "rough1d/levy_area.hpp"
#include "rough1d/paths.hpp"

namespace rough1d {
namespace {

Curve sine_curve(int n) { return Curve(sample_smooth("sine", n), sample_smooth("sine-shifted", n)); }

Curve diagonal(const PathGrid& x) { return Curve(x, x); }

double head_mean(const PathGrid& x, int p, double (*g)(double)) {
  double acc = 0.0;
  for (int u = 0; u < p; ++u) acc += g(x[u]);
  return acc / p;
}

double ident(double v) { return v; }
double half_square(double v) { return 0.5 * v * v; }
double third_cube(double v) { return v * v * v / 3.0; }

TEST(Scheme, NamesRoundTrip) {
  for (auto s : {Scheme::rv_symmetric, Scheme::nc_functional, Scheme::corrected_averaged,
                 Scheme::corrected_germ_sum}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  EXPECT_EQ(parse_scheme("rv"), Scheme::rv_symmetric);
  EXPECT_EQ(parse_scheme("germ"), Scheme::corrected_germ_sum);
  EXPECT_THROW(parse_scheme("midpoint"), InvalidArgument);
}

TEST(RvSymmetric, UnitIntegrandTelescopesUpToTheLeftBoundary) {
  // With constant extension the sum leaves x_1 minus the mean of x over the
  // first step.
  const auto x = sample_smooth("sine:1,1,0.4", 256);
  const auto curve = Curve(x, sample_smooth("sine", 256));
  for (int p : {1, 4, 32}) {
    const double value = rv_symmetric_approx(SmoothFunction::constant(1.0), curve, p);
    EXPECT_NEAR(value, x[256] - head_mean(x, p, ident), 1e-14);
  }
  EXPECT_NEAR(rv_symmetric_approx(SmoothFunction::constant(1.0), curve, 1), x[256] - x[0], 1e-14);
}

TEST(RvSymmetric, UnitIntegrandOnAPathFlatNearZero) {
  const auto x = sample_smooth("pl:0:0,0.2:0,1:1", 320);
  const auto curve = diagonal(x);
  for (int p : {1, 8, 64}) EXPECT_NEAR(rv_symmetric_approx(SmoothFunction::constant(1.0), curve, p), 1.0, 1e-14);
}

TEST(RvSymmetric, IdentityOnTheDiagonalSinePath) {
  const auto x = sample_smooth("sine", 512);
  const auto curve = diagonal(x);
  for (int p : {1, 8, 64}) {
    const double value = rv_symmetric_approx(SmoothFunction::identity(), curve, p);
    EXPECT_NEAR(value, half_square(x[512]) - head_mean(x, p, half_square), 1e-14);
  }
  EXPECT_NEAR(rv_symmetric_approx(SmoothFunction::identity(), curve, 1), 0.0, 1e-14);
}

TEST(RvSymmetric, ConstantDriverGivesZero) {
  const auto curve = Curve(sample_smooth("constant:0.7", 64), sample_smooth("sine", 64));
  EXPECT_EQ(rv_symmetric_approx(SmoothFunction::cosine(), curve, 8), 0.0);
}

TEST(RvSymmetric, RejectsBadStepsAndWindows) {
  const auto curve = sine_curve(16);
  EXPECT_THROW(rv_symmetric_approx(SmoothFunction::identity(), curve, 0), InvalidArgument);
  EXPECT_THROW(rv_symmetric_approx(SmoothFunction::identity(), curve, 2, IndexWindow{4, 20}), InvalidArgument);
  EXPECT_THROW(rv_symmetric_approx(SmoothFunction::identity(), curve, 2, IndexWindow{8, 4}), InvalidArgument);
}

TEST(NcFunctional, OrderOneIsBitwiseTheSymmetricIntegral) {
  const auto curve = Curve(gen_fbm(0.4, 256, 3), gen_fbm(0.4, 256, 4));
  const auto f = parse_smooth_function("2+sin");
  for (int p : {1, 3, 16}) {
    const auto window = IndexWindow::full(256);
    EXPECT_EQ(nc_functional_approx(f, curve, 1, p, window), rv_symmetric_approx(f, curve, p, window));
    const PlaneFunction h = [&](double, double z2) { return f(z2); };
    EXPECT_EQ(nc_functional_approx(h, curve.x(), curve.y(), curve.x(), 1, p, window),
              rv_symmetric_approx(f, curve, p, window));
  }
}

TEST(NcFunctional, UnitIntegrandTelescopes) {
  const auto x = sample_smooth("sine:1,1,0.4", 128);
  const PlaneFunction one = [](double, double) { return 1.0; };
  const double value = nc_functional_approx(one, x, x, x, 3, 4, IndexWindow::full(128));
  EXPECT_NEAR(value, x[128] - head_mean(x, 4, ident), 1e-14);
}

TEST(NcFunctional, SimpsonOnTheSquare) {
  const auto x = sample_smooth("sine:1,1,0.4", 256);
  const PlaneFunction square = [](double z1, double) { return z1 * z1; };
  for (int p : {1, 16}) {
    const double value = nc_functional_approx(square, x, x, x, 2, p, IndexWindow::full(256));
    EXPECT_NEAR(value, third_cube(x[256]) - head_mean(x, p, third_cube), 1e-14);
  }
  const double limit = nc_functional_approx(square, x, x, x, 2, 1, IndexWindow::full(256));
  EXPECT_NEAR(limit, (std::pow(x[256], 3) - std::pow(x[0], 3)) / 3.0, 1e-14);
}

TEST(NcFunctional, RejectsMismatchedGrids) {
  const auto a = sample_smooth("sine", 16);
  const auto b = sample_smooth("sine", 32);
  const PlaneFunction h = [](double u, double) { return u; };
  EXPECT_THROW(nc_functional_approx(h, a, b, a, 1, 1, IndexWindow::full(16)), InvalidArgument);
}

TEST(CorrectedApprox, UnitIntegrandEqualsTheNewtonCotesTerm) {
  const auto curve = Curve(gen_fbm(0.45, 256, 1), gen_fbm(0.45, 256, 2));
  const auto area = pl_area(curve, 2);
  for (int m : {1, 2}) {
    const auto result = corrected_approx(SmoothFunction::constant(1.0), curve, area, m, 8);
    EXPECT_EQ(result.value, nc_functional_approx(SmoothFunction::constant(1.0), curve, m, 8, IndexWindow::full(256)));
    EXPECT_EQ(result.scheme, Scheme::corrected_averaged);
    EXPECT_EQ(result.order_m, m);
    EXPECT_DOUBLE_EQ(result.epsilon, 8.0 / 256);
  }
}

TEST(CorrectedApprox, PrimitiveAreaRecoversTheChangeOfVariables) {
  // h = square on x = sine: every cell germ is H(x_b) - H(x_a) with H = x^3 / 3.
  const auto x = sample_smooth("sine", 512);
  const auto pair = primitive_pair("square");
  const auto curve = curve_from_map(x, pair.h);
  const auto area = area_from_primitive(x, pair.h, pair.primitive);
  for (int p : {1, 8, 64}) {
    const double value = corrected_approx(SmoothFunction::identity(), curve, area, 1, p).value;
    EXPECT_NEAR(value, third_cube(x[512]) - head_mean(x, p, third_cube), 1e-14);
  }
  const double limit = germ_sum_cells(SmoothFunction::identity(), curve, area, 1, 1, IndexWindow::full(512));
  EXPECT_NEAR(limit, 0.0, 1e-14);
}

TEST(CorrectedApprox, ZeroAreaOnTheDiagonalIsBitwiseTheSymmetricIntegral) {
  const auto x = gen_fbm(0.35, 512, 5);
  const auto curve = diagonal(x);
  for (int p : {1, 2, 32}) {
    EXPECT_EQ(corrected_approx(SmoothFunction::identity(), curve, zero_area(512), 1, p).value,
              rv_symmetric_approx(SmoothFunction::identity(), curve, p));
    EXPECT_EQ(corrected_approx(SmoothFunction::cosine(), curve, pl_area(curve, 0), 1, p).value,
              rv_symmetric_approx(SmoothFunction::cosine(), curve, p));
  }
}

TEST(CorrectedApprox, RejectsOrderMismatchAndMissingDerivatives) {
  const auto curve = sine_curve(32);
  EXPECT_THROW(corrected_approx(SmoothFunction::sine(), curve, pl_area(curve, 0), 2, 4), InvalidArgument);
  const SmoothFunction shallow([](double v, int order) { return order == 0 ? v * v : 2.0 * v; }, 1, "shallow");
  EXPECT_THROW(corrected_approx(shallow, curve, pl_area(curve, 2), 2, 4), InvalidArgument);
  EXPECT_THROW(corrected_approx(SmoothFunction::sine(), curve, zero_area(16), 1, 4), InvalidArgument);
  EXPECT_THROW(corrected_approx(SmoothFunction::sine(), curve, pl_area(curve, 0), 0, 4), InvalidArgument);
}

TEST(GermSum, UnitIntegrandIsTheIncrement) {
  const auto curve = Curve(gen_fbm(0.3, 256, 7), gen_fbm(0.3, 256, 8));
  const auto area = pl_area(curve, 2);
  for (int level : {0, 3, 7}) {
    const double value = germ_sum(SmoothFunction::constant(1.0), curve, area, 2, level, IndexWindow{64, 192});
    EXPECT_NEAR(value, curve.x()[192] - curve.x()[64], 1e-13);
  }
}

TEST(GermSum, SingleCellIsTheCellGerm) {
  const auto curve = sine_curve(64);
  const auto area = pl_area(curve, 2);
  const auto f = SmoothFunction::exponential();
  EXPECT_EQ(germ_sum(f, curve, area, 2, 0, IndexWindow{16, 48}), cell_germ(f, curve, area, 2, 16, 48));
}

TEST(GermSum, AdditiveOverAdjacentWindows) {
  const auto curve = Curve(gen_fbm(0.45, 512, 9), gen_fbm(0.45, 512, 10));
  const auto area = pl_area(curve, 0);
  const auto f = parse_smooth_function("2+sin");
  for (int cells : {1, 4, 16}) {
    const double whole = germ_sum_cells(f, curve, area, 1, cells, IndexWindow{0, 512});
    const double left = germ_sum_cells(f, curve, area, 1, cells, IndexWindow{0, 192});
    const double right = germ_sum_cells(f, curve, area, 1, cells, IndexWindow{192, 512});
    EXPECT_NEAR(whole, left + right, 1e-13);
  }
}

TEST(GermSum, RejectsIndivisibleWindows) {
  const auto curve = sine_curve(48);
  const auto area = pl_area(curve, 0);
  EXPECT_THROW(germ_sum(SmoothFunction::sine(), curve, area, 1, 5, IndexWindow::full(48)), InvalidArgument);
  EXPECT_THROW(germ_sum_cells(SmoothFunction::sine(), curve, area, 1, 5, IndexWindow::full(48)), InvalidArgument);
}

TEST(GermSum, DyadicDifferencesDecayAtTheSmoothRate) {
  const auto curve = sine_curve(4096);
  const auto area = pl_area(curve, 0);
  std::vector<double> widths;
  std::vector<double> diffs;
  double previous = germ_sum(SmoothFunction::cosine(), curve, area, 1, 0, IndexWindow::full(4096));
  for (int level = 1; level <= 10; ++level) {
    const double current = germ_sum(SmoothFunction::cosine(), curve, area, 1, level, IndexWindow::full(4096));
    widths.push_back(std::ldexp(1.0, -level));
    diffs.push_back(current - previous);
    previous = current;
  }
  EXPECT_GE(log_log_slope(widths, diffs), 0.75);
}

TEST(DyadicRefine, LevelZeroIsBitwiseTheApproximant) {
  const auto curve = Curve(gen_fbm(0.45, 256, 3), gen_fbm(0.45, 256, 5));
  const auto area = pl_area(curve, 2);
  for (int m : {1, 2}) {
    EXPECT_EQ(dyadic_refine(SmoothFunction::sine(), curve, area, m, 32, 0),
              corrected_approx(SmoothFunction::sine(), curve, area, m, 32).value);
  }
  EXPECT_EQ(dyadic_refine(SmoothFunction::sine(), curve, area, 1, 32, 2),
            corrected_approx(SmoothFunction::sine(), curve, area, 1, 8).value);
}

TEST(DyadicRefine, UnitIntegrandOnAPathFlatNearZero) {
  const auto x = sample_smooth("pl:0:0,0.2:0,1:1", 1024);
  const auto curve = Curve(x, sample_smooth("sine", 1024));
  const auto area = pl_area(curve, 0);
  for (int level = 0; level <= 7; ++level) {
    EXPECT_NEAR(dyadic_refine(SmoothFunction::constant(1.0), curve, area, 1, 128, level), 1.0, 1e-14);
  }
}

TEST(DyadicRefine, RejectsIndivisibleSteps) {
  const auto curve = sine_curve(64);
  EXPECT_THROW(dyadic_refine(SmoothFunction::sine(), curve, pl_area(curve, 0), 1, 12, 3), InvalidArgument);
}

TEST(DefaultLadder, DyadicDivisorsBetweenOneEighthAndEightCells) {
  EXPECT_EQ(default_ladder(1024), (std::vector<int>{128, 64, 32, 16, 8}));
  EXPECT_EQ(default_ladder(64), (std::vector<int>{8}));
  EXPECT_EQ(default_ladder(96), (std::vector<int>{12}));
}

TEST(LogLogSlope, RecoversAPowerLaw) {
  const std::vector<double> x{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
  EXPECT_NEAR(log_log_slope(x, y), 1.7, 1e-12);
  EXPECT_TRUE(std::isnan(log_log_slope({1.0, 2.0}, {0.0, 1.0})));
}

TEST(Converge, UnitIntegrandIsFlaggedExact) {
  const auto x = sample_smooth("pl:0:0,0.2:0,1:1", 1024);
  const auto curve = diagonal(x);
  const auto report = converge(SmoothFunction::constant(1.0), curve, pl_area(curve, 0), 1, default_ladder(1024), 1.0);
  EXPECT_TRUE(report.exact);
  EXPECT_NEAR(report.extrapolated_limit, 1.0, 1e-14);
  for (const auto& point : report.ladder) EXPECT_LT(point.residual, 1e-13);
}

TEST(Converge, SmoothSineRate) {
  const auto curve = sine_curve(4096);
  const auto report = converge(SmoothFunction::cosine(), curve, pl_area(curve, 0), 1, default_ladder(4096), 1.0);
  EXPECT_FALSE(report.exact);
  EXPECT_GE(report.empirical_rate, 0.75);
  EXPECT_DOUBLE_EQ(report.predicted_rate, 1.0);
  ASSERT_EQ(report.ladder.size(), 7u);
  for (std::size_t i = 1; i < report.ladder.size(); ++i) {
    EXPECT_LT(report.ladder[i].epsilon, report.ladder[i - 1].epsilon);
  }
}

TEST(Converge, PredictedRate) {
  const auto curve = sine_curve(1024);
  const auto area = pl_area(curve, 2);
  EXPECT_NEAR(converge(SmoothFunction::sine(), curve, area, 1, default_ladder(1024), 0.4).predicted_rate, 0.2, 1e-15);
  EXPECT_NEAR(converge(SmoothFunction::sine(), curve, area, 2, default_ladder(1024), 0.4).predicted_rate, 0.4, 1e-15);
}

TEST(Converge, LadderIsOrderedAndDeterministic) {
  const auto curve = Curve(gen_fbm(0.45, 1024, 1), gen_fbm(0.45, 1024, 2));
  const auto area = pl_area(curve, 0);
  const auto a = converge(SmoothFunction::sine(), curve, area, 1, default_ladder(1024), 0.43);
  const auto b = converge(SmoothFunction::sine(), curve, area, 1, default_ladder(1024), 0.43);
  for (std::size_t i = 0; i < a.ladder.size(); ++i) EXPECT_EQ(a.ladder[i].value, b.ladder[i].value);
  EXPECT_EQ(a.empirical_rate, b.empirical_rate);
  EXPECT_THROW(converge(SmoothFunction::sine(), curve, area, 1, {64, 32, 16}, 0.4), InvalidArgument);
  EXPECT_THROW(converge(SmoothFunction::sine(), curve, area, 1, {64, 32, 32, 16}, 0.4), InvalidArgument);
}

TEST(Converge, OrdersOneAndTwoAreCompatible) {
  const auto curve = Curve(gen_fbm(0.6, 1024, 31), gen_fbm(0.6, 1024, 32));
  const auto area = pl_area(curve, 2);
  const auto f = SmoothFunction::sine();
  const double limit2 = germ_sum_cells(f, curve, area, 2, 1, IndexWindow::full(1024));
  const double limit1 = germ_sum_cells(f, curve, area.truncated(0), 1, 1, IndexWindow::full(1024));
  EXPECT_NEAR(limit1, limit2, 1e-3);
}

TEST(Identification, CorrectionVanishesForMapCurves) {
  // y = h(x) with the primitive area: the gap to the symmetric integral
  // shrinks along the ladder.
  const auto x = gen_fbm(0.45, 4096, 12);
  const auto pair = primitive_pair("sin");
  const auto curve = curve_from_map(x, pair.h);
  const auto area = area_from_primitive(x, pair.h, pair.primitive);
  const auto f = SmoothFunction::cosine();
  std::vector<double> eps;
  std::vector<double> gaps;
  for (int p : default_ladder(4096)) {
    eps.push_back(p / 4096.0);
    gaps.push_back(std::abs(corrected_approx(f, curve, area, 1, p).value - rv_symmetric_approx(f, curve, p)));
  }
  // The gap is of order eps^{3 alpha - 1} with alpha = 0.45.
  EXPECT_GT(log_log_slope(eps, gaps), 0.1);
  EXPECT_LT(gaps.back(), 0.1 * gaps.front());
}

TEST(Identification, SmoothPathMatchesRiemannStieltjes) {
  const auto formula = PathFormula::parse("sine:1,0.75,0.3");
  const auto x = sample_smooth(formula, 4096);
  const auto pair = primitive_pair("sin");
  const auto curve = curve_from_map(x, pair.h);
  const auto area = area_from_primitive(x, pair.h, pair.primitive);
  const double limit = germ_sum_cells(SmoothFunction::cosine(), curve, area, 1, 1, IndexWindow::full(4096));
  const double two_pi = 2.0 * M_PI;
  const double expected = oracle::integrate([&](double t) {
    return std::cos(std::sin(formula(t))) * 0.75 * two_pi * std::cos(0.75 * two_pi * t + 0.3);
  });
  EXPECT_LT(std::abs(limit - expected), 1e-3 * std::abs(expected));
}

TEST(LocalGerm, UnitIntegrand) {
  const auto x = gen_fbm(0.4, 128, 2);
  const auto curve = Curve(x, gen_fbm(0.4, 128, 3));
  const auto area = pl_area(curve, 0);
  double expected = 0.0;
  for (int u = 32; u < 48; ++u) expected += x[u + 16] - x[u];
  EXPECT_NEAR(local_germ(SmoothFunction::constant(1.0), curve, area, 32, 48), expected / 16, 1e-15);
}

TEST(LocalGerm, ConstantDriver) {
  const auto curve = Curve(sample_smooth("constant:1", 64), sample_smooth("constant:2", 64));
  EXPECT_EQ(local_germ(SmoothFunction::sine(), curve, zero_area(64), 8, 24), 0.0);
}

TEST(LocalGerm, ResidualScalesWithTheWindow) {
  const auto curve = sine_curve(4096);
  const auto area = pl_area(curve, 0);
  const auto f = SmoothFunction::cosine();
  std::vector<double> ratios;
  for (int width = 1024; width >= 16; width /= 2) {
    const int s = 1000;
    const double integral = germ_sum_cells(f, curve, area, 1, 1, IndexWindow{s, s + width});
    const double span = static_cast<double>(width) / 4096;
    ratios.push_back(std::abs(integral - local_germ(f, curve, area, s, s + width)) / std::pow(span, 2.0));
  }
  for (double r : ratios) EXPECT_LT(r, 5.0 * ratios.front() + 1.0);
  EXPECT_THROW(local_germ(f, curve, area, 10, 10), InvalidArgument);
}

TEST(Weighted, UnitIntegrandGivesHalfTheSquaredIncrement) {
  const auto x = sample_smooth("sine:1,1,0.4", 512);
  const auto curve = diagonal(x);
  const double value =
      weighted_corrected_approx(SmoothFunction::constant(1.0), curve, zero_area(512), 1, IndexWindow::full(512));
  EXPECT_NEAR(value, 0.5 * (x[512] * x[512] - x[0] * x[0]), 1e-14);
  const double windowed =
      weighted_corrected_approx(SmoothFunction::constant(1.0), curve, zero_area(512), 1, IndexWindow{100, 300});
  EXPECT_NEAR(windowed, 0.5 * (x[300] * x[300] - x[100] * x[100]), 1e-14);
}

TEST(Weighted, ConstantDriver) {
  const auto curve = Curve(sample_smooth("constant:0.5", 64), sample_smooth("sine", 64));
  EXPECT_EQ(weighted_corrected_approx(SmoothFunction::sine(), curve, pl_area(curve, 0), 4, IndexWindow::full(64)),
            0.0);
}

TEST(Weighted, IdentityOnTheDiagonalGivesTheCube) {
  const auto x = sample_smooth("sine:1,1,0.4", 4096);
  const auto curve = diagonal(x);
  const double value =
      weighted_corrected_approx(SmoothFunction::identity(), curve, pl_area(curve, 0), 1, IndexWindow::full(4096));
  EXPECT_NEAR(value, (std::pow(x[4096], 3) - std::pow(x[0], 3)) / 3.0, 1e-5);
  EXPECT_EQ(weighted_cell_germ(SmoothFunction::identity(), curve, zero_area(4096), 0, 1),
            0.5 * (x[0] * x[0] + x[1] * x[1]) * (x[1] - x[0]));
}

}  // namespace
}  // namespace rough1d
