#ifndef CURVLAB_FAMILIES_HPP
#define CURVLAB_FAMILIES_HPP

#include <array>
#include <optional>

#include "curvlab/chart.hpp"

namespace curvlab {

/// Generalized plane-wave style family on R^{2k+l} with coordinates
/// (x_1..x_k, y_1..y_l, xbar_1..xbar_k), chart indices in that order:
///   g(dx_i, dx_j) = -2 psi_ij(y),  g(dy_a, dy_b) = C_ab,  g(dx_i, dxbar_i) = 1.
/// `psi` is the symmetric k x k array of expressions, packed row major with
/// i <= j; entries may reference only the y-coordinates (indices k..k+l-1).
MetricChart build_def11(int k, int l, const SquareMatrix& c_inner,
                        const std::vector<ScalarExpr>& psi);

/// Four-dimensional family with coordinates (x, y, z, xbar) = (x0..x3):
///   g(dx, dxbar) = g(dy, dy) = g(dz, dz) = 1,  g(dx, dz) = 2 phi(y).
/// phi may reference only x1.  The predicate phi'' != 0 is attached.
MetricChart build_thm13(const ScalarExpr& phi, const Bindings& params = {});

/// Signature-(2,2) Walker normal form on (x1..x4) = (x0..x3):
///   g(d1, d3) = g(d2, d4) = 1, g(d3,d3) = g33, g(d3,d4) = g34, g(d4,d4) = g44.
MetricChart build_walker(const ScalarExpr& g33, const ScalarExpr& g34, const ScalarExpr& g44,
                         const Bindings& params = {});

struct WalkerClassification {
  /// dP/dx3 == dQ/dx4 sampled on a grid (closedness of Q dx3 + P dx4).
  bool condition1 = false;
  double condition1_residual = 0.0;
  /// Set only by the dedicated reciprocal-affine constructor.
  bool condition2_by_construction = false;
};

struct WalkerChart {
  MetricChart chart;
  WalkerClassification classification;
};

/// Walker metric with g33 = g44 = 0 and g34 = x1 P(x3,x4) + x2 Q(x3,x4) + S.
/// P, Q, S may reference only x2, x3 (the chart names of x3, x4).
WalkerChart build_thm14(const ScalarExpr& p, const ScalarExpr& q, const ScalarExpr& s,
                        const Bindings& params = {});

/// The Einstein subfamily: P = -2c/(a + b x3 + c x4), Q = -2b/(a + b x3 + c x4),
/// with (a,b,c) != (0,0,0); the denominator is attached as a domain predicate.
WalkerChart make_thm14_case2(double a, double b, double c, const ScalarExpr& s);

/// Locally symmetric signature-(2,2) family on (x1..x4):
///   g(d1,d3) = g(d2,d4) = 1, g(d3,d3) = s x1 x2,
///   g(d3,d4) = s (x2^2 - x1^2)/2, g(d4,d4) = -s x1 x2.
MetricChart build_thm19(double s);

/// Affine map p -> linear p + offset.
struct AffineMap {
  SquareMatrix linear;
  std::vector<double> offset;

  Point operator()(const Point& p) const;
};

/// The isometry family of the phi = e^{b y} chart: translate by (a1..a4) and
/// rescale the null pair by e^{-+ b a2}.
AffineMap thm13_isometry(double b, const std::array<double, 4>& a);

/// max over points of | (dT)^T g(T p) dT - g(p) |_max; zero for isometries.
/// Throws SingularMatrixError for singular linear parts.
double pullback_residual(const MetricChart& chart, const AffineMap& map,
                         const std::vector<Point>& points);

}  // namespace curvlab

#endif  // CURVLAB_FAMILIES_HPP
