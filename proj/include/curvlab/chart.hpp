#ifndef CURVLAB_CHART_HPP
#define CURVLAB_CHART_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "curvlab/expr.hpp"
#include "curvlab/linalg.hpp"

namespace curvlab {

/// A coordinate-chart pseudo-Riemannian metric: a symmetric matrix of scalar
/// expressions g_ij(x), late-bound parameters, and an optional domain
/// predicate (expressions required to be nonzero at admitted points).
class MetricChart {
 public:
  MetricChart() = default;
  explicit MetricChart(int dim);

  int dim() const { return dim_; }

  const ScalarExpr& metric(int i, int j) const;
  void set_metric(int i, int j, const ScalarExpr& e);

  Bindings params;
  std::vector<ScalarExpr> domain_predicates;
  std::vector<std::string> coord_names;

  /// Per-coordinate sampling box, default [-1, 1] in every coordinate.
  std::vector<std::array<double, 2>> sample_box;

  /// Metric values at a point.
  SquareMatrix metric_at(const Point& p) const;

  /// True when every domain predicate has magnitude > margin at p.
  bool admissible(const Point& p, double margin = 0.0) const;

  /// Throws DomainError unless p is strictly inside the predicate domain.
  void require_admissible(const Point& p) const;

 private:
  int dim_ = 0;
  std::vector<ScalarExpr> g_;  // packed upper triangle, row major
  int pack(int i, int j) const;
};

/// Deterministic admissible sample points: a Halton sequence mapped into the
/// chart's sampling box, with rejection of points that violate the domain
/// predicate by less than `margin` or make the metric degenerate.  The seed
/// offsets the start of the sequence, so distinct seeds give distinct but
/// reproducible point sets.
std::vector<Point> sample_points(const MetricChart& chart, int count, std::uint64_t seed,
                                 double margin = 0.05);

}  // namespace curvlab

#endif  // CURVLAB_CHART_HPP
