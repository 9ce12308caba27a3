#include "curvlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

SquareMatrix SquareMatrix::identity(int n) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::diagonal(const std::vector<double>& d) {
  SquareMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[i];
  return m;
}

SquareMatrix SquareMatrix::transpose() const {
  SquareMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

double SquareMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SquareMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

bool SquareMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

std::vector<double> SquareMatrix::apply(const std::vector<double>& v) const {
  std::vector<double> r(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  SquareMatrix r(a.n_);
  for (std::size_t t = 0; t < r.a_.size(); ++t) r.a_[t] = a.a_[t] + b.a_[t];
  return r;
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  SquareMatrix r(a.n_);
  for (std::size_t t = 0; t < r.a_.size(); ++t) r.a_[t] = a.a_[t] - b.a_[t];
  return r;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  const int n = a.n_;
  SquareMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

SquareMatrix operator*(double s, const SquareMatrix& a) {
  SquareMatrix r(a.n_);
  for (std::size_t t = 0; t < r.a_.size(); ++t) r.a_[t] = s * a.a_[t];
  return r;
}

double commutator_norm(const SquareMatrix& a, const SquareMatrix& b) {
  return (a * b - b * a).max_abs();
}

SquareMatrix invert(const SquareMatrix& a, double tol) {
  const int n = a.dim();
  SquareMatrix work = a;
  SquareMatrix inv = SquareMatrix::identity(n);
  const double pivot_floor = tol * std::max(1.0, a.max_abs());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (std::abs(work(pivot, col)) <= pivot_floor)
      throw SingularMatrixError("matrix is singular within tolerance (column " +
                                std::to_string(col) + ")");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const double d = 1.0 / work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) *= d;
      inv(col, j) *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  const double residual = (a * inv - SquareMatrix::identity(n)).max_abs();
  if (residual > 1e-8 * (a.max_abs() + 1.0))
    throw SingularMatrixError("matrix inversion residual too large (ill conditioned)");
  return inv;
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& a) {
  const int n = a.dim();
  SquareMatrix m = a;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(m(i, j)));
    if (off <= 1e-15 * std::max(1.0, m.max_abs())) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) <= 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::pair<int, int> symmetric_signature(const SquareMatrix& a, double tol) {
  const std::vector<double> ev = symmetric_eigenvalues(a);
  double scale = 1.0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  int neg = 0, pos = 0;
  for (double v : ev) {
    if (std::abs(v) <= tol * scale)
      throw SingularMatrixError("inner product is degenerate within tolerance");
    (v < 0 ? neg : pos)++;
  }
  return {neg, pos};
}

std::vector<double> singular_values(const SquareMatrix& a) {
  const SquareMatrix ata = a.transpose() * a;
  std::vector<double> ev = symmetric_eigenvalues(ata);
  std::vector<double> sv;
  sv.reserve(ev.size());
  for (auto it = ev.rbegin(); it != ev.rend(); ++it) sv.push_back(std::sqrt(std::max(0.0, *it)));
  return sv;
}

int numeric_rank(const SquareMatrix& a, double tol) {
  const std::vector<double> sv = singular_values(a);
  if (sv.empty()) return 0;
  const double threshold = tol * std::max(sv.front(), 1e-12);
  int r = 0;
  for (double s : sv)
    if (s > threshold) ++r;
  return r;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

double frobenius(const SquareMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> characteristic_polynomial(const SquareMatrix& a) {
  const int n = a.dim();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  SquareMatrix b = a;
  for (int k = 1; k <= n; ++k) {
    if (k > 1) {
      SquareMatrix shifted = b;
      for (int i = 0; i < n; ++i) shifted(i, i) += c[n - k + 1];
      b = a * shifted;
    }
    c[n - k] = -b.trace() / k;
  }
  // snap rounding residue: |c_{n-k}| is bounded by binom(n,k) * |A|_2^k
  const double nrm = std::max(1.0, frobenius(a));
  double pw = 1.0;
  for (int k = 1; k <= n; ++k) {
    pw *= nrm;
    if (std::abs(c[n - k]) < 1e-12 * binomial(n, k) * pw) c[n - k] = 0.0;
  }
  return c;
}

namespace {

std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
  return r;
}

std::complex<double> poly_deriv_eval(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> r = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k)
    r = r * z + c[static_cast<std::size_t>(k)] * static_cast<double>(k);
  return r;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& monic_in) {
  // factor out exact zero roots first; nilpotent operators then come out exact
  std::vector<double> monic = monic_in;
  std::vector<std::complex<double>> zeros;
  while (monic.size() > 1 && monic.front() == 0.0) {
    zeros.emplace_back(0.0, 0.0);
    monic.erase(monic.begin());
  }
  const int n = static_cast<int>(monic.size()) - 1;
  std::vector<std::complex<double>> z(n);
  if (n == 0) return zeros;
  double radius = 0.0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, std::pow(std::abs(monic[k]), 1.0 / (n - k)));
  radius = 1.0 + radius;
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> g = 1.0;
  for (int i = 0; i < n; ++i) {
    g *= seed;
    z[i] = radius * g;
  }
  for (int iter = 0; iter < 400; ++iter) {
    double step = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      if (std::abs(denom) < 1e-300) denom = 1e-300;
      const std::complex<double> d = poly_eval(monic, z[i]) / denom;
      z[i] -= d;
      step = std::max(step, std::abs(d));
    }
    if (step < 1e-15 * (1.0 + radius)) break;
  }
  // polish simple roots; multiple roots are left to the clustered estimate
  for (auto& root : z) {
    for (int t = 0; t < 3; ++t) {
      const std::complex<double> dp = poly_deriv_eval(monic, root);
      if (std::abs(dp) < 1e-8) break;
      root -= poly_eval(monic, root) / dp;
    }
  }
  z.insert(z.end(), zeros.begin(), zeros.end());
  return z;
}

double SpectralProfile::max_abs_eigenvalue() const {
  double m = 0.0;
  for (const Eigenvalue& e : eigenvalues) m = std::max(m, std::hypot(e.re, e.im));
  return m;
}

SpectralProfile spectral_profile(const SquareMatrix& t, double tol) {
  const int n = t.dim();
  SpectralProfile prof;
  prof.dim = n;

  SquareMatrix power = t;
  const double base_sigma = singular_values(t).front();
  double cap = 1.0;  // base_sigma^k, the natural magnitude of a k-fold product
  for (int k = 1; k <= n; ++k) {
    cap *= base_sigma;
    const std::vector<double> sv = singular_values(power);
    const double threshold =
        std::max(tol * std::max(sv.front(), 1e-12), 1e-11 * std::max(cap, 1e-12));
    int r = 0;
    for (double s : sv)
      if (s > threshold) ++r;
    prof.power_ranks.push_back(r);
    if (r == 0) {
      prof.nilpotency_index = k;
      break;
    }
    if (k < n) power = power * t;
  }

  std::vector<std::complex<double>> roots = polynomial_roots(characteristic_polynomial(t));
  double scale = 1.0;
  for (auto& z : roots) scale = std::max(scale, std::abs(z));

  // snap near-real roots, then enforce exact conjugate pairing
  const double imag_snap = 1e-6 * scale;
  std::vector<std::complex<double>> fixed;
  std::vector<std::complex<double>> complex_part;
  for (auto& z : roots) {
    if (std::abs(z.imag()) <= imag_snap)
      fixed.emplace_back(z.real(), 0.0);
    else
      complex_part.push_back(z);
  }
  std::vector<bool> used(complex_part.size(), false);
  for (std::size_t i = 0; i < complex_part.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::size_t best = i;
    double best_d = 1e300;
    for (std::size_t j = 0; j < complex_part.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(complex_part[j] - std::conj(complex_part[i]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best != i && best_d < 1e-3 * scale) {
      used[best] = true;
      const std::complex<double> avg =
          0.5 * (complex_part[i] + std::conj(complex_part[best]));
      fixed.push_back(avg);
      fixed.push_back(std::conj(avg));
    } else {
      // unpaired leftover: treat as real
      fixed.emplace_back(complex_part[i].real(), 0.0);
    }
  }

  // greedy clustering against every existing center (mult-weighted mean)
  const double cluster_tol = std::max(tol, 1e-6) * (1.0 + scale);
  for (const auto& z : fixed) {
    Eigenvalue* best = nullptr;
    double best_d = cluster_tol;
    for (Eigenvalue& e : prof.eigenvalues) {
      const double d = std::hypot(z.real() - e.re, z.imag() - e.im);
      if (d <= best_d) {
        best_d = d;
        best = &e;
      }
    }
    if (best) {
      const double w = best->multiplicity;
      best->re = (best->re * w + z.real()) / (w + 1);
      best->im = (best->im * w + z.imag()) / (w + 1);
      ++best->multiplicity;
    } else {
      prof.eigenvalues.push_back(Eigenvalue{z.real(), z.imag(), 1});
    }
  }
  std::sort(prof.eigenvalues.begin(), prof.eigenvalues.end(),
            [](const Eigenvalue& a, const Eigenvalue& b) {
              if (a.re != b.re) return a.re < b.re;
              return a.im < b.im;
            });
  return prof;
}

}  // namespace curvlab
