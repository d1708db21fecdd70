#include "rough1d/newton_cotes.hpp"

#include <array>
#include <mutex>
#include <optional>
#include <string>

#include "rough1d/errors.hpp"

namespace rough1d {

namespace {

using Polynomial = std::vector<Rational>;  // coefficients, lowest degree first

// p(u) * (slope u - root)
Polynomial multiply_linear(const Polynomial& p, const Rational& slope, const Rational& root) {
  Polynomial result(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    result[i] -= root * p[i];
    result[i + 1] += slope * p[i];
  }
  return result;
}

Rational integrate_unit_interval(const Polynomial& p) {
  Rational acc(0);
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] / Rational(static_cast<long long>(i) + 1);
  return acc;
}

}  // namespace

double to_double(const Rational& value) { return value.convert_to<double>(); }

InterpolationMeasure::InterpolationMeasure(int order_m, std::vector<Rational> atoms,
                                           std::vector<Rational> weights)
    : order_m_(order_m), atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.size() != weights_.size() || atoms_.empty()) {
    throw InvalidArgument("interpolation measure needs matching, non-empty atoms and weights");
  }
  atoms_d_.reserve(atoms_.size());
  weights_d_.reserve(weights_.size());
  for (const auto& a : atoms_) atoms_d_.push_back(to_double(a));
  for (const auto& w : weights_) weights_d_.push_back(to_double(w));
}

InterpolationMeasure nc_measure(int m) {
  if (m < 1 || m > kMaxNewtonCotesOrder) {
    throw InvalidArgument("Newton-Cotes order must satisfy 1 <= m <= " +
                          std::to_string(kMaxNewtonCotesOrder));
  }
  if (m == 1) {
    return InterpolationMeasure(1, {Rational(0), Rational(1)}, {Rational(1, 2), Rational(1, 2)});
  }

  const int last = 2 * m - 2;
  std::vector<Rational> atoms;
  std::vector<Rational> weights;
  for (int j = 0; j <= last; ++j) {
    atoms.emplace_back(j, last);
    // Lagrange basis prod_{k != j} (last * u - k) / (j - k), expanded in u.
    Polynomial basis{Rational(1)};
    Rational denominator(1);
    for (int k = 0; k <= last; ++k) {
      if (k == j) continue;
      basis = multiply_linear(basis, Rational(last), Rational(k));
      denominator *= Rational(j - k);
    }
    weights.push_back(integrate_unit_interval(basis) / denominator);
  }
  return InterpolationMeasure(m, std::move(atoms), std::move(weights));
}

const InterpolationMeasure& nc_measure_cached(int m) {
  if (m < 1 || m > kMaxNewtonCotesOrder) {
    throw InvalidArgument("Newton-Cotes order must satisfy 1 <= m <= " +
                          std::to_string(kMaxNewtonCotesOrder));
  }
  static std::array<std::optional<InterpolationMeasure>, kMaxNewtonCotesOrder + 1> cache;
  static std::mutex guard;
  std::lock_guard lock(guard);
  auto& slot = cache[static_cast<std::size_t>(m)];
  if (!slot) slot.emplace(nc_measure(m));
  return *slot;
}

}  // namespace rough1d
