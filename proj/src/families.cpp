#include "curvlab/families.hpp"

#include <cmath>

namespace curvlab {

namespace {

void require_coordinates_within(const ScalarExpr& e, int lo, int hi, const char* what) {
  std::set<int> used;
  e.collect_coordinates(used);
  for (int c : used)
    if (c < lo || c >= hi)
      throw ConfigError(std::string(what) + " may only reference coordinates x" +
                        std::to_string(lo) + "..x" + std::to_string(hi - 1) + ", got x" +
                        std::to_string(c));
}

}  // namespace

MetricChart build_def11(int k, int l, const SquareMatrix& c_inner,
                        const std::vector<ScalarExpr>& psi) {
  if (k < 1 || l < 1) throw ConfigError("build_def11 requires k >= 1 and l >= 1");
  if (c_inner.dim() != l) throw ConfigError("inner product C must be l x l");
  if (!c_inner.is_symmetric(0.0)) throw ConfigError("inner product C must be symmetric");
  if (static_cast<int>(psi.size()) != k * (k + 1) / 2)
    throw ConfigError("psi must have k(k+1)/2 packed entries");
  try {
    invert(c_inner, 1e-10);
  } catch (const SingularMatrixError&) {
    throw ConfigError("inner product C is degenerate");
  }

  const int m = 2 * k + l;
  MetricChart chart(m);
  const auto psi_at = [&](int i, int j) -> const ScalarExpr& {
    if (i > j) std::swap(i, j);
    return psi[static_cast<std::size_t>(i * k - i * (i - 1) / 2 + (j - i))];
  };
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      require_coordinates_within(psi_at(i, j), k, k + l, "psi");
      chart.set_metric(i, j, ScalarExpr::constant(-2.0) * psi_at(i, j));
    }
  for (int a = 0; a < l; ++a)
    for (int b = a; b < l; ++b) chart.set_metric(k + a, k + b, ScalarExpr::constant(c_inner(a, b)));
  for (int i = 0; i < k; ++i) chart.set_metric(i, k + l + i, ScalarExpr::constant(1.0));

  chart.coord_names.clear();
  for (int i = 1; i <= k; ++i) chart.coord_names.push_back("x" + std::to_string(i));
  for (int a = 1; a <= l; ++a) chart.coord_names.push_back("y" + std::to_string(a));
  for (int i = 1; i <= k; ++i) chart.coord_names.push_back("xbar" + std::to_string(i));
  return chart;
}

MetricChart build_thm13(const ScalarExpr& phi, const Bindings& params) {
  require_coordinates_within(phi, 1, 2, "phi");
  MetricChart chart(4);
  chart.params = params;
  chart.set_metric(0, 3, ScalarExpr::constant(1.0));
  chart.set_metric(1, 1, ScalarExpr::constant(1.0));
  chart.set_metric(2, 2, ScalarExpr::constant(1.0));
  chart.set_metric(0, 2, ScalarExpr::constant(2.0) * phi);
  chart.domain_predicates.push_back(derivative(derivative(phi, 1), 1));
  chart.coord_names = {"x", "y", "z", "xbar"};
  return chart;
}

MetricChart build_walker(const ScalarExpr& g33, const ScalarExpr& g34, const ScalarExpr& g44,
                         const Bindings& params) {
  MetricChart chart(4);
  chart.params = params;
  chart.set_metric(0, 2, ScalarExpr::constant(1.0));
  chart.set_metric(1, 3, ScalarExpr::constant(1.0));
  chart.set_metric(2, 2, g33);
  chart.set_metric(2, 3, g34);
  chart.set_metric(3, 3, g44);
  chart.coord_names = {"x1", "x2", "x3", "x4"};
  return chart;
}

WalkerChart build_thm14(const ScalarExpr& p, const ScalarExpr& q, const ScalarExpr& s,
                        const Bindings& params) {
  require_coordinates_within(p, 2, 4, "P");
  require_coordinates_within(q, 2, 4, "Q");
  require_coordinates_within(s, 2, 4, "S");

  const ScalarExpr g34 =
      ScalarExpr::coordinate(0) * p + ScalarExpr::coordinate(1) * q + s;
  WalkerChart out{build_walker(ScalarExpr::constant(0.0), g34, ScalarExpr::constant(0.0), params),
                  {}};

  // closedness of Q dx3 + P dx4, sampled on a deterministic grid
  const ScalarExpr closed = derivative(p, 2) - derivative(q, 3);
  double residual = 0.0;
  double scale = 0.0;
  bool defined_somewhere = false;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      const Point pt{0.0, 0.0, -1.0 + a / 3.0, -1.0 + b / 3.0};
      if (!out.chart.admissible(pt, 1e-6)) continue;
      try {
        residual = std::max(residual, std::abs(eval_value(closed, pt, params)));
        scale = std::max(scale, std::abs(eval_value(derivative(p, 2), pt, params)));
        scale = std::max(scale, std::abs(eval_value(derivative(q, 3), pt, params)));
        defined_somewhere = true;
      } catch (const EvalError&) {
      }
    }
  if (!defined_somewhere) throw ConfigError("P and Q are nowhere evaluable on the sampling grid");
  out.classification.condition1_residual = residual / (scale + 1.0);
  out.classification.condition1 = out.classification.condition1_residual <= 1e-8;
  return out;
}

WalkerChart make_thm14_case2(double a, double b, double c, const ScalarExpr& s) {
  if (a == 0.0 && b == 0.0 && c == 0.0)
    throw ConfigError("the reciprocal-affine family requires (a,b,c) != (0,0,0)");
  const ScalarExpr den = ScalarExpr::constant(a) +
                         ScalarExpr::constant(b) * ScalarExpr::coordinate(2) +
                         ScalarExpr::constant(c) * ScalarExpr::coordinate(3);
  const ScalarExpr p = ScalarExpr::constant(-2.0 * c) / den;
  const ScalarExpr q = ScalarExpr::constant(-2.0 * b) / den;
  WalkerChart out = build_thm14(p, q, s, {});
  out.chart.domain_predicates.push_back(den);
  out.classification.condition2_by_construction = true;
  return out;
}

MetricChart build_thm19(double s) {
  const ScalarExpr sp = ScalarExpr::parameter("s");
  const ScalarExpr x1 = ScalarExpr::coordinate(0);
  const ScalarExpr x2 = ScalarExpr::coordinate(1);
  MetricChart chart = build_walker(
      sp * x1 * x2,
      sp * (ScalarExpr::power(x2, 2) - ScalarExpr::power(x1, 2)) / ScalarExpr::constant(2.0),
      -(sp * x1 * x2), {{"s", s}});
  return chart;
}

Point AffineMap::operator()(const Point& p) const {
  Point q = linear.apply(p);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += offset[i];
  return q;
}

AffineMap thm13_isometry(double b, const std::array<double, 4>& a) {
  AffineMap map;
  map.linear = SquareMatrix::diagonal({std::exp(-b * a[1]), 1.0, 1.0, std::exp(b * a[1])});
  map.offset = {a[0], a[1], a[2], a[3]};
  return map;
}

double pullback_residual(const MetricChart& chart, const AffineMap& map,
                         const std::vector<Point>& points) {
  invert(map.linear, 1e-12);  // singular maps are rejected
  double worst = 0.0;
  for (const Point& p : points) {
    const Point q = map(p);
    const SquareMatrix pulled = map.linear.transpose() * chart.metric_at(q) * map.linear;
    worst = std::max(worst, (pulled - chart.metric_at(p)).max_abs());
  }
  return worst;
}

}  // namespace curvlab
