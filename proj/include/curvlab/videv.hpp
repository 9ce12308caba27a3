#ifndef CURVLAB_VIDEV_HPP
#define CURVLAB_VIDEV_HPP

#include <array>

#include "curvlab/model.hpp"

#include <json.hpp>

namespace curvlab {

/// Pass/fail with a guard band: residuals at or below `tol` pass, residuals
/// at or above `fail_floor` fail, anything between is reported as
/// indeterminate instead of being forced into a verdict.
enum class Verdict { Pass, Fail, Indeterminate };

struct ToleranceBand {
  double tol = 1e-8;
  double fail_floor = 1e-4;

  Verdict classify(double residual) const {
    if (residual <= tol) return Verdict::Pass;
    if (residual >= fail_floor) return Verdict::Fail;
    return Verdict::Indeterminate;
  }
};

/// Result of one property check.  `residual` is scale-normalized: commutation
/// checks divide the worst raw deviation by (1 + max|A|), the Tsankov pair
/// (bilinear in A on both sides) by (1 + max|A|)^2, and the Einstein check by
/// (1 + |trace/n|).  `witness` locates the worst deviation (indices of the
/// operator pair followed by the matrix entry, or the tensor tuple).
struct PropertyCheck {
  std::string property;
  Verdict verdict = Verdict::Indeterminate;
  double residual = 0.0;
  std::vector<int> witness;
  double tol = 0.0;
  double fail_floor = 0.0;

  bool passed() const { return verdict == Verdict::Pass; }
  bool failed() const { return verdict == Verdict::Fail; }
  bool indeterminate() const { return verdict == Verdict::Indeterminate; }
};

nlohmann::json property_check_to_json(const PropertyCheck& c);

/// rho = c id within tol (1 + |c|), c = trace/n.
PropertyCheck check_einstein(const SquareMatrix& rho, const ToleranceBand& band = {});

/// The spectrum clusters to one real value or to one conjugate pair a +- ib.
PropertyCheck check_pseudo_einstein(const SpectralProfile& profile,
                                    const ToleranceBand& band = {});

/// J(x) rho = rho J(x) for all x, decided on polarized basis pairs (an exact
/// equivalence by bilinearity).
PropertyCheck check_jacobi_videv(const Model& m, const ToleranceBand& band = {});

/// R(x,y) rho = rho R(x,y) for all x, y.
PropertyCheck check_skew_videv(const Model& m, const ToleranceBand& band = {});

/// All quadratic Jacobi operators commute; decided on polarized pairs.
PropertyCheck check_jacobi_tsankov(const Model& m, const ToleranceBand& band = {});

/// Jacobi operators commute with all curvature operators.
PropertyCheck check_mixed_tsankov(const Model& m, const ToleranceBand& band = {});

/// Worst deviation among the three pairwise equalities of
///   A(T v1, v2, v3, v4) = A(v1, T v2, v3, v4) = A(v1, v2, T v3, v4)
///                       = A(v1, v2, v3, T v4),
/// normalized by (1 + max|A|).  T must be self-adjoint for the inner product.
double condition_a_residual(const Model& m, const SquareMatrix& t);

/// The three equivalent commutation conditions for a self-adjoint map T:
/// slot insertion, commutation with every curvature operator, commutation
/// with every polarized Jacobi operator.  With T = rho, conditions 2 and 3
/// are the skew-Videv and Jacobi-Videv residuals.
struct CommutationConditions {
  double slot_insertion = 0.0;
  double curvature_commute = 0.0;
  double jacobi_commute = 0.0;
};

CommutationConditions commutation_conditions(const Model& m, const SquareMatrix& t);

/// All six property checks of a model, keyed for report serialization.
struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool any_indeterminate() const;
  const PropertyCheck& at(const std::string& property) const;
};

PropertyReport full_property_report(const Model& m, const SpectralProfile& rho_profile,
                                    const ToleranceBand& band = {});

nlohmann::json property_report_to_json(const PropertyReport& r);

/// Normalized frame (X, Y, Z, Xbar) of the phi-family chart at a point:
///   g(X,Xbar) = g(Y,Y) = g(Z,Z) = 1, R(X,Y,Y,Z) = -1,
///   R(X,Y,Y,X) = R(Y,Z,Z,Y) = R(Y,X,X,Z) = R(X,Z,Z,Y) = 0,
/// and alpha = R(X,Z,Z,X) is left free; it equals phi'^2 / phi''^2 and is
/// the local isometry invariant of the family.
struct NormalizedBasis {
  std::array<std::vector<double>, 4> vectors;  // X, Y, Z, Xbar
  double eps1 = 0.0;
  double delta1 = 0.0;
  double alpha = 0.0;
  double worst_relation_residual = 0.0;
};

/// Builds the normalized frame at p for the chart with g(dx,dz) = 2 phi(y).
/// Throws DomainError when phi''(y(p)) = 0.
NormalizedBasis normalized_basis_thm13(const ScalarExpr& phi, const Bindings& params,
                                       const Point& p);

/// Closed form alpha = phi'(y)^2 / phi''(y)^2; throws when phi''(y) = 0.
double alpha_invariant(const ScalarExpr& phi, const Bindings& params, double y);

}  // namespace curvlab

#endif  // CURVLAB_VIDEV_HPP
