#ifndef CURVLAB_CURVATURE_HPP
#define CURVLAB_CURVATURE_HPP

#include "curvlab/chart.hpp"
#include "curvlab/linalg.hpp"

namespace curvlab {

/// Pointwise connection and curvature data of a metric chart.
///
/// Conventions, fixed once for the whole library:
///   Gamma_first(i,j,k)  = g(nabla_{d_i} d_j, d_k)
///                       = (d_i g_jk + d_j g_ik - d_k g_ij) / 2
///   Gamma_second(i,j,k) : nabla_{d_i} d_j = Gamma_second(i,j,k) d_k
///   R(x,y)              = nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y]
///   r_op(i,j,k,l)       : R(d_i, d_j) d_k = r_op(i,j,k,l) d_l
///   r_lower(i,j,k,l)    = g(R(d_i, d_j) d_k, d_l)
///   nabla_r(a,i,j,k,l)  = (nabla_{d_a} R)(d_i, d_j, d_k, d_l)
///   ricci_form(i,j)     = trace of the polarized Jacobi operator J(d_i, d_j)
///   ricci_op            = g^{-1} ricci_form
class CurvatureData {
 public:
  int dim = 0;
  Point point;
  SquareMatrix g;
  SquareMatrix g_inv;
  SquareMatrix ricci_form;
  SquareMatrix ricci_op;

  double dg(int a, int i, int j) const { return dg_[(a * dim + i) * dim + j]; }
  double gamma_first(int i, int j, int k) const { return gf_[(i * dim + j) * dim + k]; }
  double gamma_second(int i, int j, int k) const { return gs_[(i * dim + j) * dim + k]; }
  double r_lower(int i, int j, int k, int l) const {
    return rl_[((i * dim + j) * dim + k) * dim + l];
  }
  double r_op(int i, int j, int k, int l) const { return ro_[((i * dim + j) * dim + k) * dim + l]; }
  bool has_nabla_r() const { return !nr_.empty(); }
  double nabla_r(int a, int i, int j, int k, int l) const {
    return nr_[(((a * dim + i) * dim + j) * dim + k) * dim + l];
  }

  /// max |R| + 1; the scale used by residual normalizations.
  double r_scale() const;
  double max_abs_r() const;
  double max_abs_nabla_r() const;

  friend CurvatureData curvature_at(const MetricChart&, const Point&, bool);

 private:
  std::vector<double> dg_, gf_, gs_, rl_, ro_, nr_;
};

/// Evaluates connection and curvature at p.  Throws DomainError when p
/// violates the chart's domain predicate and SingularMatrixError when the
/// metric is degenerate there.  nabla R costs third-order jets and is only
/// assembled when requested.
CurvatureData curvature_at(const MetricChart& chart, const Point& p, bool with_nabla_r = true);

/// Jacobi operator J(x): y -> R(y, x) x, as a matrix in the coordinate basis.
SquareMatrix jacobi_op(const CurvatureData& cd, const std::vector<double>& x);

/// Polarized Jacobi operator J(d_i, d_j): y -> (R(y,d_i)d_j + R(y,d_j)d_i)/2.
SquareMatrix jacobi_polarized(const CurvatureData& cd, int i, int j);
SquareMatrix jacobi_polarized(const CurvatureData& cd, const std::vector<double>& u,
                              const std::vector<double>& v);

/// Curvature operator R(d_i, d_j): z -> R(d_i, d_j) z.
SquareMatrix curvature_operator(const CurvatureData& cd, int i, int j);

/// Scale-normalized residuals of the identities the data must satisfy.
struct CurvatureResiduals {
  double antisym_first_pair = 0.0;   // R_ijkl + R_jikl
  double antisym_last_pair = 0.0;    // R_ijkl + R_ijlk
  double pair_symmetry = 0.0;        // R_ijkl - R_klij
  double bianchi_first = 0.0;        // R_ijkl + R_jkil + R_kijl
  double bianchi_second = -1.0;      // cyclic sum of nabla R (-1 if not computed)
  double metric_compat = 0.0;        // d_a g_ij - Gamma_aij - Gamma_aji
  double ricci_symmetry = 0.0;       // rho_ij - rho_ji
  double ricci_self_adjoint = 0.0;   // g rho - (g rho)^T
  double ricci_raise = 0.0;          // g ricci_op - ricci_form
  double trace_link = 0.0;           // tr J(d_i,d_j) - ricci_form(i,j)
  double r_scale = 1.0;
  double nabla_scale = 1.0;

  double worst() const;
};

CurvatureResiduals curvature_residuals(const CurvatureData& cd);

}  // namespace curvlab

#endif  // CURVLAB_CURVATURE_HPP
