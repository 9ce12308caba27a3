#ifndef CURVLAB_EXPR_HPP
#define CURVLAB_EXPR_HPP

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "curvlab/common.hpp"
#include "curvlab/jet.hpp"

namespace curvlab {

/// Immutable scalar expression tree over chart coordinates `x0..x{m-1}` and
/// named real parameters.  Supported primitives: +, -, *, /, integer powers
/// with non-negative exponent, exp, sin, cos.  Values are shared; copies are
/// cheap and thread-safe.
class ScalarExpr {
 public:
  enum class Kind {
    Constant,
    Coordinate,
    Parameter,
    Sum,
    Product,
    Negate,
    Quotient,
    Power,
    Exp,
    Sin,
    Cos,
  };

  ScalarExpr() : ScalarExpr(constant(0.0)) {}

  static ScalarExpr constant(double v);
  static ScalarExpr coordinate(int index);
  static ScalarExpr parameter(std::string name);
  static ScalarExpr power(const ScalarExpr& base, int exponent);

  /// Literal node constructors without folding; the parser builds with these
  /// so that parse(print(tree)) reproduces trees node for node.
  static ScalarExpr make(Kind kind, const ScalarExpr& a);
  static ScalarExpr make(Kind kind, const ScalarExpr& a, const ScalarExpr& b);
  static ScalarExpr make_power(const ScalarExpr& base, int exponent);

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr exp(const ScalarExpr& a);
  friend ScalarExpr sin(const ScalarExpr& a);
  friend ScalarExpr cos(const ScalarExpr& a);
  ScalarExpr operator-() const;

  Kind kind() const;
  double constant_value() const;
  int coordinate_index() const;
  const std::string& parameter_name() const;
  int exponent() const;
  int child_count() const;
  const ScalarExpr child(int i) const;

  bool is_constant_zero() const;
  bool is_constant_one() const;

  /// Structural equality (kinds, children, exact values).
  bool same_tree(const ScalarExpr& other) const;

  /// Renders text that reparses to the same tree.
  std::string to_string() const;

  void collect_coordinates(std::set<int>& out) const;
  void collect_parameters(std::set<std::string>& out) const;

  struct Node;

 private:
  explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses `text` against the expression grammar.  Coordinates are `x0..x{dim-1}`;
/// any other identifier must be listed in `params` or be one of exp/sin/cos.
/// Operators: + - * / ^ with precedence ^ > unary- > */ > +-, left associative.
/// Throws ParseError with the byte offset of the failure.
ScalarExpr parse_expr(std::string_view text, int dim, const std::set<std::string>& params);

/// Partial derivative with respect to coordinate `index`, as a new tree.
/// Applies only local constant folds (0 + e, 0 * e, 1 * e, fold of constants).
ScalarExpr derivative(const ScalarExpr& e, int index);

/// Plain value evaluation.  Throws EvalError on division by zero or an
/// unbound parameter.
double eval_value(const ScalarExpr& e, const Point& p, const Bindings& bindings);

/// Order-3 jet of the expression at `p`: value, gradient, Hessian and third
/// derivatives, each equal to the analytic partial derivatives at `p`.
Jet3 eval_jet(const ScalarExpr& e, const Point& p, const Bindings& bindings);

ScalarExpr exp(const ScalarExpr& a);
ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);

}  // namespace curvlab

#endif  // CURVLAB_EXPR_HPP
