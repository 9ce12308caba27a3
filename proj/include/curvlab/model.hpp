#ifndef CURVLAB_MODEL_HPP
#define CURVLAB_MODEL_HPP

#include <array>
#include <cstdint>

#include "curvlab/curvature.hpp"

#include <json.hpp>

namespace curvlab {

/// Algebraic curvature model: an inner-product space (V, <.,.>) together with
/// a 4-tensor A carrying the curvature symmetries
///   A(v1,v2,v3,v4) = A(v3,v4,v1,v2) = -A(v2,v1,v3,v4),
///   A(v1,v2,v3,v4) + A(v2,v3,v1,v4) + A(v3,v1,v2,v4) = 0.
/// Operators are characterized against the inner product:
///   <Aop(v1,v2) v3, v4>      = A(v1,v2,v3,v4)
///   <J(v1,v2) v3, v4>        = (A(v3,v1,v2,v4) + A(v3,v2,v1,v4)) / 2
///   ricci_form(v1,v2)        = tr J(v1,v2),   ricci_op = metric^{-1} ricci_form.
class Model {
 public:
  /// Builds a model; throws when the inner product is not symmetric and
  /// invertible or the tensor has the wrong size.  The symmetries of A are
  /// NOT enforced here; use validate() to inspect them.
  static Model create(int n, const SquareMatrix& metric, std::vector<double> a);

  int dim() const { return n_; }
  const SquareMatrix& metric() const { return metric_; }
  const SquareMatrix& metric_inv() const { return metric_inv_; }
  const std::vector<double>& tensor() const { return a_; }

  double a(int i, int j, int k, int l) const {
    return a_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }

  /// max |A| + 1, the residual normalization scale.
  double a_scale() const;

  SquareMatrix curvature_op(int i, int j) const;
  SquareMatrix jacobi_polarized(int i, int j) const;
  SquareMatrix jacobi(const std::vector<double>& x) const;
  SquareMatrix ricci_form() const;
  SquareMatrix ricci_op() const;

  /// (negatives, positives) of the inner product.
  std::pair<int, int> signature() const;

 private:
  int n_ = 0;
  SquareMatrix metric_, metric_inv_;
  std::vector<double> a_;
};

/// Worst-case residuals of each model symmetry, scale-normalized by
/// (max|A| + 1), with the witnessing index tuple of the worst violation.
struct ModelSymmetryReport {
  double antisym_first_pair = 0.0;
  double antisym_last_pair = 0.0;
  double pair_symmetry = 0.0;
  double bianchi_first = 0.0;
  std::array<int, 4> worst_index{0, 0, 0, 0};
  double scale = 1.0;

  double worst() const;
  /// Names of the identities violated at `tol` (empty iff the model is valid).
  std::vector<std::string> violations(double tol) const;
};

ModelSymmetryReport validate_model(const Model& m);

/// The pointwise curvature tensor of a chart as an algebraic model.
Model model_at(const CurvatureData& cd);
Model model_at(const MetricChart& chart, const Point& p);

/// Constant-curvature style tensor A(x,y,z,w) = c (phi(x,w)phi(y,z) -
/// phi(x,z)phi(y,w)) over the identity inner product (phi symmetric).
Model canonical_model(const SquareMatrix& phi, double c);

/// Seeded random model over diag(-1 x neg, +1 x pos): a sum of 1..3 canonical
/// terms with symmetric uniform [-1,1] coefficient matrices.  Reproducible.
Model random_model(std::uint64_t seed, int n, int negatives);

/// Einstein constant s with ricci_op = s id; throws NonEinsteinError when the
/// Ricci operator is not a scalar multiple of the identity within 1e-8(|s|+1).
double einstein_constant(const Model& m);

/// Doubling: from a Riemannian model over the identity inner product, build
/// the dimension-2n neutral model on the basis (e_1+..e_n+, e_1-..e_n-) with
/// inner product diag(+1^n, -1^n) and tensor equal to the imaginary part of
/// the complex-multilinear extension of A (components with an odd number of
/// minus factors carry +-A, all others vanish).  Requires an Einstein input.
Model double_model(const Model& m0);

nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

}  // namespace curvlab

#endif  // CURVLAB_MODEL_HPP
