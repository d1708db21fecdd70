#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

namespace rough1d {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxNewtonCotesOrder = 8;

/// The interpolation measure nu_m on [0, 1]: a signed discrete measure on
/// the closed Newton-Cotes nodes that integrates every polynomial of degree
/// at most 2m - 2 exactly.
///
/// Weights are held as exact rationals; double copies are made once at
/// construction for the evaluation loops.
class InterpolationMeasure {
 public:
  InterpolationMeasure(int order_m, std::vector<Rational> atoms, std::vector<Rational> weights);

  int order_m() const { return order_m_; }
  std::size_t size() const { return atoms_.size(); }

  const std::vector<Rational>& atoms() const { return atoms_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const std::vector<double>& atoms_double() const { return atoms_d_; }
  const std::vector<double>& weights_double() const { return weights_d_; }

  /// sum_j w_j f((1 - theta_j) a + theta_j b).
  template <typename F>
  double interpolate(F&& f, double a, double b) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < atoms_d_.size(); ++j) {
      const double theta = atoms_d_[j];
      acc += weights_d_[j] * f((1.0 - theta) * a + theta * b);
    }
    return acc;
  }

 private:
  int order_m_;
  std::vector<Rational> atoms_;
  std::vector<Rational> weights_;
  std::vector<double> atoms_d_;
  std::vector<double> weights_d_;
};

/// nu_1 = (delta_0 + delta_1) / 2; for m >= 2 the 2m - 1 atoms j / (2m - 2)
/// weighted by the exact integral over [0, 1] of the Lagrange basis polynomial.
/// Throws InvalidArgument unless 1 <= m <= kMaxNewtonCotesOrder.
InterpolationMeasure nc_measure(int m);

/// Cached per-order instance (measures are immutable).
const InterpolationMeasure& nc_measure_cached(int m);

template <typename F>
double nc_interpolate(const InterpolationMeasure& measure, F&& f, double a, double b) {
  return measure.interpolate(std::forward<F>(f), a, b);
}

/// Convert an exact rational to the nearest double.
double to_double(const Rational& value);

}  // namespace rough1d
