#include "rough1d/functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"

namespace rough1d {

namespace {

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && text[begin] == ' ') ++begin;
  while (end > begin && text[end - 1] == ' ') --end;
  return std::string(text.substr(begin, end - begin));
}

bool try_parse_double(const std::string& text, double& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc{} && ptr == last && first != last;
}

SmoothFunction parse_atom(const std::string& atom) {
  double value = 0.0;
  if (try_parse_double(atom, value)) return SmoothFunction::constant(value);
  if (atom == "sin") return SmoothFunction::sine();
  if (atom == "cos") return SmoothFunction::cosine();
  if (atom == "exp") return SmoothFunction::exponential();
  if (atom == "id" || atom == "x" || atom == "y" || atom == "identity") return SmoothFunction::identity();
  if (atom == "square") return SmoothFunction::polynomial({0.0, 0.0, 1.0});
  if (atom == "cube") return SmoothFunction::polynomial({0.0, 0.0, 0.0, 1.0});
  throw InvalidArgument("unknown function '" + atom + "'");
}

SmoothFunction parse_term(const std::string& term) {
  const auto star = term.find('*');
  if (star == std::string::npos) {
    if (!term.empty() && term.front() == '-') return -1.0 * parse_atom(trim(term.substr(1)));
    return parse_atom(term);
  }
  double scale = 0.0;
  const auto coefficient = trim(term.substr(0, star));
  if (!try_parse_double(coefficient, scale)) {
    throw InvalidArgument("bad coefficient '" + coefficient + "'");
  }
  return scale * parse_atom(trim(term.substr(star + 1)));
}

}  // namespace

SmoothFunction::SmoothFunction(Evaluator evaluator, int max_order, std::string name)
    : evaluator_(std::move(evaluator)), max_order_(max_order), name_(std::move(name)) {}

double SmoothFunction::derivative(double x, int order) const {
  if (order < 0 || order > max_order_) {
    throw InvalidArgument("function '" + name_ + "' has no derivative of order " + std::to_string(order));
  }
  return evaluator_(x, order);
}

SmoothFunction SmoothFunction::constant(double c) {
  return SmoothFunction([c](double, int order) { return order == 0 ? c : 0.0; }, kAnyOrder,
                        format_g17(c));
}

SmoothFunction SmoothFunction::identity() { return polynomial({0.0, 1.0}); }

SmoothFunction SmoothFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  std::string name = "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i) name += ',';
    name += format_g17(coefficients[i]);
  }
  auto evaluator = [c = std::move(coefficients)](double x, int order) {
    // Horner on the order-th derivative: sum_{i >= order} c_i i!/(i-order)! x^{i-order}.
    double acc = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= order; --i) {
      double falling = 1.0;
      for (int r = 0; r < order; ++r) falling *= static_cast<double>(i - r);
      acc = acc * x + c[static_cast<std::size_t>(i)] * falling;
    }
    return acc;
  };
  return SmoothFunction(std::move(evaluator), kAnyOrder, std::move(name));
}

SmoothFunction SmoothFunction::sine() {
  return SmoothFunction(
      [](double x, int order) {
        switch (order % 4) {
          case 0: return std::sin(x);
          case 1: return std::cos(x);
          case 2: return -std::sin(x);
          default: return -std::cos(x);
        }
      },
      kAnyOrder, "sin");
}

SmoothFunction SmoothFunction::cosine() {
  return SmoothFunction(
      [](double x, int order) {
        switch (order % 4) {
          case 0: return std::cos(x);
          case 1: return -std::sin(x);
          case 2: return -std::cos(x);
          default: return std::sin(x);
        }
      },
      kAnyOrder, "cos");
}

SmoothFunction SmoothFunction::exponential() {
  return SmoothFunction([](double x, int) { return std::exp(x); }, kAnyOrder, "exp");
}

SmoothFunction operator+(const SmoothFunction& lhs, const SmoothFunction& rhs) {
  return SmoothFunction(
      [a = lhs.evaluator_, b = rhs.evaluator_](double x, int order) { return a(x, order) + b(x, order); },
      std::min(lhs.max_order_, rhs.max_order_), lhs.name_ + "+" + rhs.name_);
}

SmoothFunction operator*(double scale, const SmoothFunction& f) {
  return SmoothFunction([scale, g = f.evaluator_](double x, int order) { return scale * g(x, order); },
                        f.max_order_, format_g17(scale) + "*" + f.name_);
}

SmoothFunction parse_smooth_function(std::string_view text) {
  const auto source = trim(text);
  if (source.empty()) throw InvalidArgument("empty function name");
  // Split on '+' that are not exponent signs or leading signs.
  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < source.size(); ++i) {
    if (source[i] == '+' && source[i - 1] != 'e' && source[i - 1] != 'E' && source[i - 1] != '*') {
      terms.push_back(trim(source.substr(start, i - start)));
      start = i + 1;
    }
  }
  terms.push_back(trim(source.substr(start)));

  std::optional<SmoothFunction> result;
  for (const auto& term : terms) {
    if (term.empty()) throw InvalidArgument("malformed function '" + source + "'");
    auto parsed = parse_term(term);
    result = result ? *result + parsed : parsed;
  }
  return SmoothFunction(
      [f = *result](double x, int order) { return f.derivative(x, order); }, result->max_order(), source);
}

PrimitivePair primitive_pair(std::string_view name) {
  const std::string key(name);
  if (key == "id" || key == "x" || key == "identity") {
    return {SmoothFunction::identity(), SmoothFunction::polynomial({0.0, 0.0, 0.5})};
  }
  if (key == "square") {
    return {SmoothFunction::polynomial({0.0, 0.0, 1.0}), SmoothFunction::polynomial({0.0, 0.0, 0.0, 1.0 / 3.0})};
  }
  if (key == "cube") {
    return {SmoothFunction::polynomial({0.0, 0.0, 0.0, 1.0}),
            SmoothFunction::polynomial({0.0, 0.0, 0.0, 0.0, 0.25})};
  }
  if (key == "sin") return {SmoothFunction::sine(), -1.0 * SmoothFunction::cosine()};
  if (key == "cos") return {SmoothFunction::cosine(), SmoothFunction::sine()};
  if (key == "exp") return {SmoothFunction::exponential(), SmoothFunction::exponential()};
  if (key.rfind("constant:", 0) == 0) {
    double c = 0.0;
    if (!try_parse_double(key.substr(9), c)) throw InvalidArgument("bad constant in '" + key + "'");
    return {SmoothFunction::constant(c), SmoothFunction::polynomial({0.0, c})};
  }
  throw InvalidArgument("no primitive known for '" + key + "'");
}

}  // namespace rough1d
