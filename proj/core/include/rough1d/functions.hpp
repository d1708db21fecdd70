#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rough1d {

/// A scalar C^k function together with its derivatives.
///
/// The evaluator receives (x, order) and returns the order-th derivative at x.
/// Integrators ask for as many derivatives as their Newton-Cotes order needs,
/// so max_order() is checked up front rather than at each call.
class SmoothFunction {
 public:
  using Evaluator = std::function<double(double, int)>;

  static constexpr int kAnyOrder = 64;

  SmoothFunction(Evaluator evaluator, int max_order, std::string name);

  double operator()(double x) const { return evaluator_(x, 0); }
  double derivative(double x, int order) const;

  int max_order() const { return max_order_; }
  const std::string& name() const { return name_; }

  static SmoothFunction constant(double c);
  static SmoothFunction identity();
  /// c0 + c1 x + c2 x^2 + ...
  static SmoothFunction polynomial(std::vector<double> coefficients);
  static SmoothFunction sine();
  static SmoothFunction cosine();
  static SmoothFunction exponential();

  friend SmoothFunction operator+(const SmoothFunction& lhs, const SmoothFunction& rhs);
  friend SmoothFunction operator*(double scale, const SmoothFunction& f);

 private:
  Evaluator evaluator_;
  int max_order_;
  std::string name_;
};

/// Parses sums of optionally scaled atoms, e.g. "2+sin", "cos", "0.5*exp+1",
/// "-1*sin". Atoms: sin, cos, exp, id (also x, y, identity), square, cube,
/// numeric constants. Throws InvalidArgument for anything else.
SmoothFunction parse_smooth_function(std::string_view text);

/// h together with an antiderivative H (H' = h), for y = h(x) curves.
struct PrimitivePair {
  SmoothFunction h;
  SmoothFunction primitive;
};

/// Named pairs: id/identity/x (x, x^2/2), square (x^2, x^3/3), cube
/// (x^3, x^4/4), sin (sin, -cos), cos (cos, sin), exp (exp, exp),
/// constant:c (c, c x).
PrimitivePair primitive_pair(std::string_view name);

}  // namespace rough1d
