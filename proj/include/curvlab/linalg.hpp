#ifndef CURVLAB_LINALG_HPP
#define CURVLAB_LINALG_HPP

#include <complex>
#include <vector>

#include "curvlab/common.hpp"

namespace curvlab {

/// Small dense real square matrix, row major.  Sizes here never exceed 16.
class SquareMatrix {
 public:
  SquareMatrix() : n_(0) {}
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  static SquareMatrix identity(int n);
  static SquareMatrix diagonal(const std::vector<double>& d);

  int dim() const { return n_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  SquareMatrix transpose() const;
  double max_abs() const;
  double trace() const;
  bool is_symmetric(double tol) const;

  std::vector<double> apply(const std::vector<double>& v) const;

  friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator*(double s, const SquareMatrix& a);

 private:
  int n_;
  std::vector<double> a_;
};

/// Max-norm of A*B - B*A.
double commutator_norm(const SquareMatrix& a, const SquareMatrix& b);

/// Gauss-Jordan inverse with partial pivoting.  A pivot smaller than
/// tol * max(1, |A|_max) is treated as singular.
SquareMatrix invert(const SquareMatrix& a, double tol = 1e-12);

/// Singular values (descending), via the symmetric eigenvalues of A^T A.
std::vector<double> singular_values(const SquareMatrix& a);

/// Count of singular values above tol * max(sigma_max, 1e-12).
int numeric_rank(const SquareMatrix& a, double tol = 1e-8);

/// Eigenvalues of a symmetric matrix (ascending), by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(const SquareMatrix& a);

/// (negative count, positive count) of a symmetric matrix's eigenvalues;
/// eigenvalues within tol * (1 + max|lambda|) of zero raise an error.
std::pair<int, int> symmetric_signature(const SquareMatrix& a, double tol = 1e-10);

/// Monic characteristic polynomial coefficients c[0..n] with c[n] = 1,
/// p(t) = sum c[k] t^k, by the Faddeev-LeVerrier recurrence.  Coefficients
/// that are rounding residue relative to binom(n,k) * |A|^k are snapped to 0.
std::vector<double> characteristic_polynomial(const SquareMatrix& a);

/// All roots of a monic polynomial (Durand-Kerner with Newton polish).
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& monic);

struct Eigenvalue {
  double re = 0.0;
  double im = 0.0;
  int multiplicity = 0;
};

/// Spectral summary of an operator: clustered eigenvalues, ranks of the
/// power sequence T, T^2, ... (stopping once rank 0 is reached or the power
/// equals the dimension), and the nilpotency index (least k with T^k = 0
/// within tolerance, or 0 when no power vanishes).
struct SpectralProfile {
  int dim = 0;
  std::vector<Eigenvalue> eigenvalues;
  std::vector<int> power_ranks;
  int nilpotency_index = 0;

  double max_abs_eigenvalue() const;
};

SpectralProfile spectral_profile(const SquareMatrix& t, double tol = 1e-8);

}  // namespace curvlab

#endif  // CURVLAB_LINALG_HPP
