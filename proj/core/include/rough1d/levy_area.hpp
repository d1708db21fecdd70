#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "rough1d/functions.hpp"
#include "rough1d/paths.hpp"

namespace rough1d {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Oriented triangle area (1/2)[(y_c - y_b)(x_a - x_b) - (y_a - y_b)(x_c - x_b)].
/// This is minus the usual counter-clockwise shoelace area, and it fixes the
/// sign convention of every area in this library.
double triangle_area(Point2 a, Point2 b, Point2 c);

/// Oriented moment of eta^k over the triangle, with the orientation of
/// triangle_area: triangle_moment(a, b, c, 0) == triangle_area(a, b, c).
double triangle_moment(Point2 a, Point2 b, Point2 c, int k);

/// The curve gamma = (x, y); both paths share one grid.
class Curve {
 public:
  Curve(PathGrid x, PathGrid y);

  const PathGrid& x() const { return x_; }
  const PathGrid& y() const { return y_; }
  int n_cells() const { return x_.n_cells(); }
  Point2 point(int i) const { return {x_[i], y_[i]}; }

 private:
  PathGrid x_;
  PathGrid y_;
};

/// Curve (x, h(x)).
Curve curve_from_map(const PathGrid& x, const SmoothFunction& h);

enum class AreaProvenance { from_primitive, piecewise_linear, zero, external, picard, derived };

std::string to_string(AreaProvenance provenance);

/// Back end of a LevyArea. eval() receives grid indices already clamped to
/// [0, n_cells] with s != t, and 0 <= k <= order_k_max.
class AreaModel {
 public:
  virtual ~AreaModel() = default;
  /// A_st[(Y - zeta)^k].
  virtual double eval(int s, int t, int k, double zeta) const = 0;
};

/// A Levy area of order order_k_max associated with a curve on a fixed grid:
/// (s, t, k, zeta) -> A_st[(Y - zeta)^k] for grid indices s, t.
///
/// Cheap to copy (shared immutable model). Indices beyond the grid are
/// clamped, matching the constant extension of the underlying paths, and
/// A_ss = 0 is returned without consulting the model.
class LevyArea {
 public:
  LevyArea(std::shared_ptr<const AreaModel> model, int order_k_max, AreaProvenance provenance,
           int n_cells);

  double operator()(int s, int t, int k = 0, double zeta = 0.0) const;

  int order_k_max() const { return order_k_max_; }
  AreaProvenance provenance() const { return provenance_; }
  int n_cells() const { return n_cells_; }

  /// The same area viewed as one of lower order (drops the high moments).
  LevyArea truncated(int order_k_max) const;

 private:
  std::shared_ptr<const AreaModel> model_;
  int order_k_max_;
  AreaProvenance provenance_;
  int n_cells_;
};

/// ca * a + cb * b on the same grid; used for norms of differences.
LevyArea linear_combination(double ca, const LevyArea& a, double cb, const LevyArea& b);

LevyArea zero_area(int n_cells, int order_k_max = 0);

/// Order-0 area of the curve (x, h(x)):
///   A_rs = H(x_s) - H(x_r) - (h(x_r) + h(x_s)) / 2 * (x_s - x_r).
/// The primitive is spot-checked by central differences at 10 seeded points
/// of the sampled x range (relative tolerance 1e-6); failure throws
/// InvalidArgument.
LevyArea area_from_primitive(const PathGrid& x, const SmoothFunction& h, const SmoothFunction& primitive);

/// Geometric area of the piecewise-linear interpolant of the curve:
/// A_st(Y^k) is the line integral of eta^{k+1} / (k+1) d xi around the closed
/// polygon "polyline from s to t, chord back to s", evaluated exactly
/// segment by segment. Shifted moments are computed in shifted coordinates.
/// Each evaluation costs O(|t - s|).
LevyArea pl_area(const Curve& curve, int order_k_max);

/// Externally supplied values A_st(Y^k) on a declared support of grid pairs.
/// Shifted moments are expanded binomially; antisymmetry supplies (t, s)
/// from (s, t). Undeclared pairs throw InvalidArgument when evaluated.
struct AreaKey {
  int s;
  int t;
  int k;
  auto operator<=>(const AreaKey&) const = default;
};
LevyArea external_area(int n_cells, int order_k_max, std::map<AreaKey, double> values);

/// Area files: CSV `s,t,k,value`, s and t as grid times.
LevyArea read_area_csv(std::istream& in, int n_cells);
LevyArea read_area_csv_file(const std::string& file, int n_cells);
/// Writes A_st(Y^k) for every pair s < t of stride-spaced grid points and k <= order.
void write_area_csv(std::ostream& out, const LevyArea& area, int stride = 1);

struct AreaAuditReport {
  double max_chasles_defect = 0.0;
  double max_antisymmetry_defect = 0.0;
  /// sup |A_st(1)| / |t - s|^{2 beta}
  double holder_constant_2beta = 0.0;
  /// sup |A_st[(Y - zeta)^k]| / |t - s|^{2 m beta}, zeta in [y_s, y_t], m = order/2 + 1
  double shifted_bound_constant = 0.0;
  /// max |triangle moment| over the checked triples, for scale.
  double max_triangle_moment = 0.0;
  std::int64_t triples_checked = 0;

  bool passes(double chasles_tolerance = 1e-8, double antisymmetry_tolerance = 1e-12) const {
    return max_chasles_defect < chasles_tolerance && max_antisymmetry_defect < antisymmetry_tolerance;
  }
};

/// Audits the Chasles identity A_rs + A_st + A_tr = -(oriented moment of
/// eta^k over T_rst), antisymmetry, and the Hoelder bounds, on `triples`
/// seeded random grid triples and every k <= order_k_max.
AreaAuditReport validate_area(const LevyArea& area, const Curve& curve, double beta, int triples,
                              std::uint64_t seed);

}  // namespace rough1d
