#ifndef CURVLAB_JET_HPP
#define CURVLAB_JET_HPP

#include <vector>

#include "curvlab/common.hpp"

namespace curvlab {

/// Truncated Taylor expansion of a scalar function at a point, up to third
/// order, in `dim` variables.  Coefficients are the raw partial derivatives
/// (not divided by factorials).  Mixed partials are stored once; the accessors
/// symmetrize index order.  Arithmetic is exact truncation of the Taylor
/// series at order 3.
class Jet3 {
 public:
  explicit Jet3(int dim);

  static Jet3 constant(int dim, double v);
  static Jet3 coordinate(int dim, int index, double value);

  int dim() const { return dim_; }

  double value() const { return c_[0]; }
  double& value() { return c_[0]; }
  double d1(int i) const { return c_[1 + i]; }
  double& d1(int i) { return c_[1 + i]; }
  double d2(int i, int j) const { return c_[off2_ + sym2(i, j)]; }
  double& d2(int i, int j) { return c_[off2_ + sym2(i, j)]; }
  double d3(int i, int j, int k) const { return c_[off3_ + sym3(i, j, k)]; }
  double& d3(int i, int j, int k) { return c_[off3_ + sym3(i, j, k)]; }

  const std::vector<double>& coeffs() const { return c_; }

  friend Jet3 operator+(const Jet3& a, const Jet3& b);
  friend Jet3 operator-(const Jet3& a, const Jet3& b);
  friend Jet3 operator-(const Jet3& a);
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  /// Throws EvalError when the denominator value is zero.
  friend Jet3 operator/(const Jet3& a, const Jet3& b);

  /// Integer power by repeated multiplication; n >= 0.
  static Jet3 ipow(const Jet3& a, int n);

  /// Chain rule with outer derivatives d0..d3 evaluated at value().
  Jet3 compose(double d0, double d1, double d2, double d3) const;

 private:
  int sym2(int i, int j) const;
  int sym3(int i, int j, int k) const;

  int dim_;
  int off2_, off3_;
  std::vector<double> c_;
};

Jet3 exp(const Jet3& a);
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);

}  // namespace curvlab

#endif  // CURVLAB_JET_HPP
