#include "rough1d/levy_area.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rough1d/errors.hpp"
#include "rough1d/format.hpp"
#include "rough1d/rng.hpp"

namespace rough1d {

namespace {

// sum_{i=0}^{n} a^i b^{n-i}
double complete_homogeneous2(double a, double b, int n) {
  double acc = 0.0;
  double power_a = 1.0;
  for (int i = 0; i <= n; ++i) {
    acc = acc * b + power_a;
    power_a *= a;
  }
  return acc;
}

// Line integral of (eta - zeta)^{k+1} / (k+1) d xi along the straight
// segment (x0, y0) -> (x1, y1).
double segment_integral(double x0, double y0, double x1, double y1, int k, double zeta) {
  const double a = y0 - zeta;
  const double b = y1 - zeta;
  return (x1 - x0) * complete_homogeneous2(a, b, k + 1) / ((k + 1.0) * (k + 2.0));
}

double binomial(int n, int r) {
  double value = 1.0;
  for (int i = 1; i <= r; ++i) value = value * (n - r + i) / i;
  return value;
}

class ZeroModel final : public AreaModel {
 public:
  double eval(int, int, int, double) const override { return 0.0; }
};

class PrimitiveModel final : public AreaModel {
 public:
  PrimitiveModel(const PathGrid& x, const SmoothFunction& h, const SmoothFunction& primitive) {
    const auto n = static_cast<std::size_t>(x.n_cells()) + 1;
    x_.resize(n);
    h_.resize(n);
    primitive_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = x.values()[i];
      h_[i] = h(x_[i]);
      primitive_[i] = primitive(x_[i]);
    }
  }

  double eval(int s, int t, int, double) const override {
    const auto i = static_cast<std::size_t>(s);
    const auto j = static_cast<std::size_t>(t);
    return primitive_[j] - primitive_[i] - 0.5 * (h_[i] + h_[j]) * (x_[j] - x_[i]);
  }

 private:
  std::vector<double> x_;
  std::vector<double> h_;
  std::vector<double> primitive_;
};

class PolylineModel final : public AreaModel {
 public:
  explicit PolylineModel(const Curve& curve)
      : x_(curve.x().values().begin(), curve.x().values().end()),
        y_(curve.y().values().begin(), curve.y().values().end()) {}

  double eval(int s, int t, int k, double zeta) const override {
    if (s > t) return -eval(t, s, k, zeta);
    double along = 0.0;
    for (int i = s; i < t; ++i) {
      const auto a = static_cast<std::size_t>(i);
      along += segment_integral(x_[a], y_[a], x_[a + 1], y_[a + 1], k, zeta);
    }
    const auto a = static_cast<std::size_t>(s);
    const auto b = static_cast<std::size_t>(t);
    return along - segment_integral(x_[a], y_[a], x_[b], y_[b], k, zeta);
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

class ExternalModel final : public AreaModel {
 public:
  explicit ExternalModel(std::map<AreaKey, double> values) : values_(std::move(values)) {}

  double eval(int s, int t, int k, double zeta) const override {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
      acc += binomial(k, j) * std::pow(-zeta, k - j) * moment(s, t, j);
    }
    return acc;
  }

 private:
  double moment(int s, int t, int k) const {
    if (auto it = values_.find({s, t, k}); it != values_.end()) return it->second;
    if (auto it = values_.find({t, s, k}); it != values_.end()) return -it->second;
    throw InvalidArgument("external area undeclared at (s, t, k) = (" + std::to_string(s) + ", " +
                          std::to_string(t) + ", " + std::to_string(k) + ")");
  }

  std::map<AreaKey, double> values_;
};

class CombinationModel final : public AreaModel {
 public:
  CombinationModel(double ca, LevyArea a, double cb, LevyArea b)
      : ca_(ca), cb_(cb), a_(std::move(a)), b_(std::move(b)) {}

  double eval(int s, int t, int k, double zeta) const override {
    return ca_ * a_(s, t, k, zeta) + cb_ * b_(s, t, k, zeta);
  }

 private:
  double ca_;
  double cb_;
  LevyArea a_;
  LevyArea b_;
};

}  // namespace

double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * ((c.y - b.y) * (a.x - b.x) - (a.y - b.y) * (c.x - b.x));
}

double triangle_moment(Point2 a, Point2 b, Point2 c, int k) {
  if (k < 0) throw InvalidArgument("moment order must be non-negative");
  // Over a triangle, the integral of a linear form L^k is
  // 2 |T| k! / (k+2)! * sum_{i+j+l=k} L_a^i L_b^j L_c^l.
  double sum = 0.0;
  std::vector<double> pa(static_cast<std::size_t>(k) + 1, 1.0);
  std::vector<double> pb(pa);
  std::vector<double> pc(pa);
  for (int i = 1; i <= k; ++i) {
    const auto u = static_cast<std::size_t>(i);
    pa[u] = pa[u - 1] * a.y;
    pb[u] = pb[u - 1] * b.y;
    pc[u] = pc[u - 1] * c.y;
  }
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; i + j <= k; ++j) {
      sum += pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(j)] *
             pc[static_cast<std::size_t>(k - i - j)];
    }
  }
  return triangle_area(a, b, c) * 2.0 * sum / ((k + 1.0) * (k + 2.0));
}

Curve::Curve(PathGrid x, PathGrid y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.n_cells() != y_.n_cells()) throw InvalidArgument("curve components must share one grid");
}

Curve curve_from_map(const PathGrid& x, const SmoothFunction& h) {
  std::vector<double> y(x.values().size());
  std::transform(x.values().begin(), x.values().end(), y.begin(), [&](double v) { return h(v); });
  return Curve(x, PathGrid(std::move(y), h.name() + "(" + x.label() + ")"));
}

std::string to_string(AreaProvenance provenance) {
  switch (provenance) {
    case AreaProvenance::from_primitive: return "from_primitive";
    case AreaProvenance::piecewise_linear: return "piecewise_linear";
    case AreaProvenance::zero: return "zero";
    case AreaProvenance::external: return "external";
    case AreaProvenance::picard: return "picard";
    case AreaProvenance::derived: return "derived";
  }
  return "unknown";
}

LevyArea::LevyArea(std::shared_ptr<const AreaModel> model, int order_k_max, AreaProvenance provenance,
                   int n_cells)
    : model_(std::move(model)), order_k_max_(order_k_max), provenance_(provenance), n_cells_(n_cells) {
  if (!model_) throw InvalidArgument("LevyArea needs a model");
  if (order_k_max_ < 0) throw InvalidArgument("area order must be non-negative");
  if (n_cells_ < 1) throw InvalidArgument("area grid needs at least one cell");
}

double LevyArea::operator()(int s, int t, int k, double zeta) const {
  if (k < 0 || k > order_k_max_) {
    throw InvalidArgument("area of order " + std::to_string(order_k_max_) + " queried at k = " +
                          std::to_string(k));
  }
  s = std::clamp(s, 0, n_cells_);
  t = std::clamp(t, 0, n_cells_);
  if (s == t) return 0.0;
  return model_->eval(s, t, k, zeta);
}

LevyArea LevyArea::truncated(int order_k_max) const {
  if (order_k_max < 0 || order_k_max > order_k_max_) {
    throw InvalidArgument("cannot truncate an area to a higher order");
  }
  LevyArea copy(*this);
  copy.order_k_max_ = order_k_max;
  return copy;
}

LevyArea linear_combination(double ca, const LevyArea& a, double cb, const LevyArea& b) {
  if (a.n_cells() != b.n_cells()) throw InvalidArgument("areas live on different grids");
  return LevyArea(std::make_shared<CombinationModel>(ca, a, cb, b), std::min(a.order_k_max(), b.order_k_max()),
                  AreaProvenance::derived, a.n_cells());
}

LevyArea zero_area(int n_cells, int order_k_max) {
  return LevyArea(std::make_shared<ZeroModel>(), order_k_max, AreaProvenance::zero, n_cells);
}

LevyArea area_from_primitive(const PathGrid& x, const SmoothFunction& h, const SmoothFunction& primitive) {
  const auto [lo_it, hi_it] = std::minmax_element(x.values().begin(), x.values().end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  SplitMix64 rng(0x5EED5EEDULL);
  for (int check = 0; check < 10; ++check) {
    const double u = lo + (hi - lo) * rng.uniform();
    const double step = 1e-4 * std::max(1.0, std::abs(u));
    const double slope = (primitive(u + step) - primitive(u - step)) / (2.0 * step);
    const double expected = h(u);
    if (std::abs(slope - expected) > 1e-6 * std::max(1.0, std::abs(expected))) {
      throw InvalidArgument("'" + primitive.name() + "' is not a primitive of '" + h.name() + "' near " +
                            format_g17(u));
    }
  }
  return LevyArea(std::make_shared<PrimitiveModel>(x, h, primitive), 0, AreaProvenance::from_primitive,
                  x.n_cells());
}

LevyArea pl_area(const Curve& curve, int order_k_max) {
  if (order_k_max < 0 || order_k_max > 14) {
    throw InvalidArgument("piecewise-linear area order must lie in [0, 14]");
  }
  return LevyArea(std::make_shared<PolylineModel>(curve), order_k_max, AreaProvenance::piecewise_linear,
                  curve.n_cells());
}

LevyArea external_area(int n_cells, int order_k_max, std::map<AreaKey, double> values) {
  for (const auto& [key, value] : values) {
    if (key.s < 0 || key.t < 0 || key.s > n_cells || key.t > n_cells || key.k < 0 || key.k > order_k_max) {
      throw InvalidArgument("external area entry outside the declared grid/order");
    }
    if (!std::isfinite(value)) throw InvalidArgument("external area values must be finite");
  }
  return LevyArea(std::make_shared<ExternalModel>(std::move(values)), order_k_max, AreaProvenance::external,
                  n_cells);
}

LevyArea read_area_csv(std::istream& in, int n_cells) {
  std::map<AreaKey, double> values;
  std::string line;
  bool header_seen = false;
  int order = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "s,t,k,value") throw InvalidArgument("area CSV must start with header 's,t,k,value'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string field[4];
    for (auto& f : field) {
      if (!std::getline(row, f, ',')) throw InvalidArgument("area CSV row needs four columns: " + line);
    }
    double s = 0.0, t = 0.0, k = 0.0, value = 0.0;
    try {
      s = std::stod(field[0]);
      t = std::stod(field[1]);
      k = std::stod(field[2]);
      value = std::stod(field[3]);
    } catch (const std::exception&) {
      throw InvalidArgument("area CSV row is not numeric: " + line);
    }
    const auto window = to_index_window(std::min(s, t), std::max(s, t), n_cells);
    const int si = s <= t ? window.begin : window.end;
    const int ti = s <= t ? window.end : window.begin;
    if (k < 0 || k != std::floor(k)) throw InvalidArgument("area CSV order must be a non-negative integer");
    order = std::max(order, static_cast<int>(k));
    values[{si, ti, static_cast<int>(k)}] = value;
  }
  if (!header_seen) throw InvalidArgument("area CSV is empty");
  return external_area(n_cells, order, std::move(values));
}

LevyArea read_area_csv_file(const std::string& file, int n_cells) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open area file '" + file + "'");
  return read_area_csv(in, n_cells);
}

void write_area_csv(std::ostream& out, const LevyArea& area, int stride) {
  if (stride < 1) throw InvalidArgument("stride must be positive");
  const int n = area.n_cells();
  out << "s,t,k,value\n";
  for (int s = 0; s <= n; s += stride) {
    for (int t = s + stride; t <= n; t += stride) {
      for (int k = 0; k <= area.order_k_max(); ++k) {
        out << format_g17(static_cast<double>(s) / n) << ',' << format_g17(static_cast<double>(t) / n) << ','
            << k << ',' << format_g17(area(s, t, k)) << '\n';
      }
    }
  }
}

AreaAuditReport validate_area(const LevyArea& area, const Curve& curve, double beta, int triples,
                              std::uint64_t seed) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("audit exponent beta must lie in (0, 1)");
  if (area.n_cells() != curve.n_cells()) throw InvalidArgument("area and curve live on different grids");

  AreaAuditReport report;
  const int n = curve.n_cells();
  const int order = area.order_k_max();
  const int m = order / 2 + 1;
  SplitMix64 rng(seed);

  auto audit_pair = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k <= order; ++k) {
      report.max_antisymmetry_defect =
          std::max(report.max_antisymmetry_defect, std::abs(area(i, j, k) + area(j, i, k)));
    }
    const double span = std::abs(j - i) / static_cast<double>(n);
    report.holder_constant_2beta =
        std::max(report.holder_constant_2beta, std::abs(area(i, j, 0)) / std::pow(span, 2.0 * beta));
    const double scale = std::pow(span, 2.0 * m * beta);
    const double yi = curve.y()[i];
    const double yj = curve.y()[j];
    for (int k = 0; k <= order; ++k) {
      for (int q = 0; q < 5; ++q) {
        const double zeta = yi + (yj - yi) * q / 4.0;
        report.shifted_bound_constant =
            std::max(report.shifted_bound_constant, std::abs(area(i, j, k, zeta)) / scale);
      }
    }
  };

  for (int trial = 0; trial < triples; ++trial) {
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const int s = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    for (int k = 0; k <= order; ++k) {
      const double moment = triangle_moment(curve.point(r), curve.point(s), curve.point(t), k);
      const double defect = area(r, s, k) + area(s, t, k) + area(t, r, k) + moment;
      report.max_chasles_defect = std::max(report.max_chasles_defect, std::abs(defect));
      report.max_triangle_moment = std::max(report.max_triangle_moment, std::abs(moment));
    }
    audit_pair(r, s);
    audit_pair(s, t);
    audit_pair(t, r);
    ++report.triples_checked;
  }
  return report;
}

}  // namespace rough1d
