#include "curvlab/jet.hpp"

#include <cmath>

namespace curvlab {

namespace {

int tri(int n) { return n * (n + 1) / 2; }
int tet(int n) { return n * (n + 1) * (n + 2) / 6; }

}  // namespace

Jet3::Jet3(int dim) : dim_(dim) {
  off2_ = 1 + dim_;
  off3_ = off2_ + tri(dim_);
  c_.assign(off3_ + tet(dim_), 0.0);
}

Jet3 Jet3::constant(int dim, double v) {
  Jet3 j(dim);
  j.c_[0] = v;
  return j;
}

Jet3 Jet3::coordinate(int dim, int index, double value) {
  Jet3 j(dim);
  j.c_[0] = value;
  j.c_[1 + index] = 1.0;
  return j;
}

int Jet3::sym2(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

int Jet3::sym3(int i, int j, int k) const {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  // triples (a,b,c), a<=b<=c, lexicographic
  return (tet(dim_) - tet(dim_ - i)) + (tri(dim_ - i) - tri(dim_ - j)) + (k - j);
}

Jet3 operator+(const Jet3& a, const Jet3& b) {
  Jet3 r(a.dim_);
  for (std::size_t t = 0; t < r.c_.size(); ++t) r.c_[t] = a.c_[t] + b.c_[t];
  return r;
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
  Jet3 r(a.dim_);
  for (std::size_t t = 0; t < r.c_.size(); ++t) r.c_[t] = a.c_[t] - b.c_[t];
  return r;
}

Jet3 operator-(const Jet3& a) {
  Jet3 r(a.dim_);
  for (std::size_t t = 0; t < r.c_.size(); ++t) r.c_[t] = -a.c_[t];
  return r;
}

Jet3 operator*(const Jet3& f, const Jet3& g) {
  const int m = f.dim_;
  Jet3 r(m);
  const double f0 = f.value(), g0 = g.value();
  r.value() = f0 * g0;
  for (int i = 0; i < m; ++i) r.d1(i) = f.d1(i) * g0 + f0 * g.d1(i);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      r.d2(i, j) = f.d2(i, j) * g0 + f.d1(i) * g.d1(j) + f.d1(j) * g.d1(i) + f0 * g.d2(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k)
        r.d3(i, j, k) = f.d3(i, j, k) * g0 + f0 * g.d3(i, j, k) +
                        f.d2(i, j) * g.d1(k) + f.d2(i, k) * g.d1(j) + f.d2(j, k) * g.d1(i) +
                        f.d1(i) * g.d2(j, k) + f.d1(j) * g.d2(i, k) + f.d1(k) * g.d2(i, j);
  return r;
}

Jet3 Jet3::compose(double h0, double h1, double h2, double h3) const {
  const int m = dim_;
  Jet3 r(m);
  r.value() = h0;
  for (int i = 0; i < m; ++i) r.d1(i) = h1 * d1(i);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) r.d2(i, j) = h2 * d1(i) * d1(j) + h1 * d2(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k)
        r.d3(i, j, k) = h3 * d1(i) * d1(j) * d1(k) +
                        h2 * (d2(i, j) * d1(k) + d2(i, k) * d1(j) + d2(j, k) * d1(i)) +
                        h1 * d3(i, j, k);
  return r;
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
  const double u = b.value();
  if (u == 0.0) throw EvalError("division by zero in jet evaluation");
  const double iu = 1.0 / u;
  const Jet3 rec = b.compose(iu, -iu * iu, 2.0 * iu * iu * iu, -6.0 * iu * iu * iu * iu);
  return a * rec;
}

Jet3 Jet3::ipow(const Jet3& a, int n) {
  if (n == 0) return Jet3::constant(a.dim(), 1.0);
  Jet3 r = a;
  for (int t = 1; t < n; ++t) r = r * a;
  return r;
}

Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

}  // namespace curvlab
