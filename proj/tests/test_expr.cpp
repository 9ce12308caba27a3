#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curvlab/expr.hpp"
#include "fd_oracle.hpp"

using namespace curvlab;
using Kind = ScalarExpr::Kind;

namespace {

ScalarExpr parse4(const std::string& s, std::set<std::string> params = {}) {
  return parse_expr(s, 4, params);
}

// random polynomial of total degree <= 4 in dim variables
ScalarExpr random_poly(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> nterms(3, 8);
  std::uniform_int_distribution<int> degree(0, 4);
  std::uniform_int_distribution<int> var(0, dim - 1);
  ScalarExpr acc = ScalarExpr::constant(coeff(rng));
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    ScalarExpr mono = ScalarExpr::constant(coeff(rng));
    const int d = degree(rng);
    for (int f = 0; f < d; ++f) mono = mono * ScalarExpr::coordinate(var(rng));
    acc = acc + mono;
  }
  return acc;
}

// random literal tree exercising every node kind (for round-trip tests)
ScalarExpr random_tree(std::mt19937_64& rng, int dim, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 10);
  std::uniform_real_distribution<double> cval(0.0, 5.0);
  std::uniform_int_distribution<int> var(0, dim - 1);
  std::uniform_int_distribution<int> expo(0, 5);
  std::uniform_int_distribution<int> par(0, 2);
  const char* params[] = {"a", "b", "c_1"};
  switch (pick(rng)) {
    case 0:
      return ScalarExpr::constant(cval(rng));
    case 1:
      return ScalarExpr::constant(static_cast<double>(var(rng)));
    case 2:
      return ScalarExpr::coordinate(var(rng));
    case 3:
      return ScalarExpr::parameter(params[par(rng)]);
    case 4:
      return ScalarExpr::make(Kind::Sum, random_tree(rng, dim, depth - 1),
                              random_tree(rng, dim, depth - 1));
    case 5:
      return ScalarExpr::make(Kind::Product, random_tree(rng, dim, depth - 1),
                              random_tree(rng, dim, depth - 1));
    case 6:
      return ScalarExpr::make(Kind::Quotient, random_tree(rng, dim, depth - 1),
                              random_tree(rng, dim, depth - 1));
    case 7:
      return ScalarExpr::make(Kind::Negate, random_tree(rng, dim, depth - 1));
    case 8:
      return ScalarExpr::make_power(random_tree(rng, dim, depth - 1), expo(rng));
    case 9:
      return ScalarExpr::make(Kind::Exp, random_tree(rng, dim, depth - 1));
    default:
      return ScalarExpr::make(pick(rng) % 2 ? Kind::Sin : Kind::Cos,
                              random_tree(rng, dim, depth - 1));
  }
}

void check_jet_against_fd(const ScalarExpr& e, const Point& p, const Bindings& b,
                          double tol3 = 1e-6) {
  const int m = static_cast<int>(p.size());
  const auto field = [&](const Point& q) { return eval_value(e, q, b); };
  const Jet3 jet = eval_jet(e, p, b);

  double s1 = 1.0, s2 = 1.0, s3 = 1.0;
  for (int i = 0; i < m; ++i) {
    s1 = std::max(s1, std::abs(jet.d1(i)));
    for (int j = i; j < m; ++j) {
      s2 = std::max(s2, std::abs(jet.d2(i, j)));
      for (int k = j; k < m; ++k) s3 = std::max(s3, std::abs(jet.d3(i, j, k)));
    }
  }
  for (int i = 0; i < m; ++i) {
    const double fd = testing::fd_d1(field, p, i);
    CHECK(std::abs(jet.d1(i) - fd) <= std::max(1e-9, 1e-6 * s1));
  }
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double fd = testing::fd_d2(field, p, i, j);
      CHECK(std::abs(jet.d2(i, j) - fd) <= std::max(1e-9, 1e-6 * s2));
    }
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k) {
        const double fd = testing::fd_d3(field, p, i, j, k);
        CHECK(std::abs(jet.d3(i, j, k) - fd) <= std::max(1e-9, tol3 * s3));
      }
}

}  // namespace

TEST_CASE("parse: grammar cases from the interface") {
  const ScalarExpr e = parse4("exp(b*x1)", {"b"});
  REQUIRE(e.kind() == Kind::Exp);
  REQUIRE(e.child(0).kind() == Kind::Product);
  CHECK(e.child(0).child(0).kind() == Kind::Parameter);
  CHECK(e.child(0).child(0).parameter_name() == "b");
  CHECK(e.child(0).child(1).kind() == Kind::Coordinate);
  CHECK(e.child(0).child(1).coordinate_index() == 1);

  const ScalarExpr d = parse_expr("x0^2 - x1^2", 2, {});
  REQUIRE(d.kind() == Kind::Sum);
  CHECK(d.child(0).kind() == Kind::Power);
  CHECK(d.child(0).exponent() == 2);
  REQUIRE(d.child(1).kind() == Kind::Negate);
  CHECK(d.child(1).child(0).kind() == Kind::Power);

  const ScalarExpr q = parse4("1/(a + b*x2 + c*x3)", {"a", "b", "c"});
  REQUIRE(q.kind() == Kind::Quotient);
  CHECK(q.child(0).kind() == Kind::Constant);
  CHECK(q.child(1).kind() == Kind::Sum);
}

TEST_CASE("parse: precedence") {
  // ^ binds tighter than unary minus: -x0^2 == -(x0^2)
  const ScalarExpr e = parse_expr("-x0^2", 2, {});
  REQUIRE(e.kind() == Kind::Negate);
  CHECK(e.child(0).kind() == Kind::Power);
  // unary minus binds tighter than *: -x0*x1 == (-x0)*x1
  const ScalarExpr f = parse_expr("-x0*x1", 2, {});
  REQUIRE(f.kind() == Kind::Product);
  CHECK(f.child(0).kind() == Kind::Negate);
  // left associativity of / and -
  const ScalarExpr g = parse_expr("x0/x1/x0", 2, {});
  REQUIRE(g.kind() == Kind::Quotient);
  CHECK(g.child(0).kind() == Kind::Quotient);
  const double v = eval_value(parse_expr("2 - 1 - 1", 1, {}), {0.0}, {});
  CHECK(v == 0.0);
}

TEST_CASE("parse: errors carry byte offsets") {
  CHECK_THROWS_AS(parse_expr("x0 + ", 2, {}), ParseError);
  CHECK_THROWS_AS(parse_expr("x0 + q", 2, {}), ParseError);
  CHECK_THROWS_AS(parse_expr("x5 + 1", 2, {}), ParseError);
  CHECK_THROWS_AS(parse_expr("x0^-2", 2, {}), ParseError);
  CHECK_THROWS_AS(parse_expr("x0^2.5", 2, {}), ParseError);
  CHECK_THROWS_AS(parse_expr("(x0 + 1", 2, {}), ParseError);
  CHECK_THROWS_AS(parse_expr("x0 @ 1", 2, {}), ParseError);
  try {
    parse_expr("x0 + q", 2, {});
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 5);
  }
  // identifier that collides with a coordinate or function name is rejected
  CHECK_THROWS_AS(parse_expr("x1", 2, {"x1"}), ParseError);
  CHECK_THROWS_AS(parse_expr("exp(x0)", 2, {"exp"}), ParseError);
}

TEST_CASE("print/parse round trip is the identity on parse trees") {
  for (const char* text : {"x0^2 - x1^2", "-x0*x1 + 2/(x1 + 3)", "exp(b*x1)*sin(x0) - cos(x1)^3",
                           "1/(a + b*x2 + c_1*x3)", "--x0", "-(x0 + x1)", "x0^0", "0.5*x1 - 1e-3"}) {
    const ScalarExpr t = parse4(text, {"a", "b", "c", "c_1"});
    const ScalarExpr r = parse4(t.to_string(), {"a", "b", "c", "c_1"});
    CAPTURE(text);
    CAPTURE(t.to_string());
    CHECK(r.same_tree(t));
  }
  std::mt19937_64 rng(20240811);
  for (int t = 0; t < 300; ++t) {
    const ScalarExpr tree = random_tree(rng, 4, 4);
    const std::string s = tree.to_string();
    CAPTURE(s);
    const ScalarExpr re = parse4(s, {"a", "b", "c_1"});
    CHECK(re.same_tree(tree));
  }
}

TEST_CASE("eval_jet: analytic examples") {
  // exp(2 x0) at x0 = 0: value 1, d = 2, d2 = 4, d3 = 8
  const ScalarExpr e = parse_expr("exp(2*x0)", 1, {});
  const Jet3 j = eval_jet(e, {0.0}, {});
  CHECK(j.value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.d1(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j.d2(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(j.d3(0, 0, 0) == doctest::Approx(8.0).epsilon(1e-12));

  // x0^2 - x1^2 at (1,2)
  const ScalarExpr d = parse_expr("x0^2 - x1^2", 2, {});
  const Jet3 k = eval_jet(d, {1.0, 2.0}, {});
  CHECK(k.value() == -3.0);
  CHECK(k.d1(0) == 2.0);
  CHECK(k.d1(1) == -4.0);
  CHECK(k.d2(0, 0) == 2.0);
  CHECK(k.d2(1, 1) == -2.0);
  CHECK(k.d2(0, 1) == 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j2 = i; j2 < 2; ++j2)
      for (int l = j2; l < 2; ++l) CHECK(k.d3(i, j2, l) == 0.0);
}

TEST_CASE("eval_jet: finite-difference oracle on random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int dim = 1; dim <= 6; ++dim) {
    for (int t = 0; t < 6; ++t) {
      const ScalarExpr e = random_poly(rng, dim);
      Point p(dim);
      for (auto& c : p) c = coord(rng);
      check_jet_against_fd(e, p, {});
    }
  }
}

TEST_CASE("eval_jet: finite-difference oracle on transcendental expressions") {
  const Bindings b{{"a", 0.7}, {"b", -0.4}};
  const std::set<std::string> names{"a", "b"};
  const char* exprs[] = {
      "exp(a*x0)*sin(x1) + cos(x0*x1)",
      "1/(2 + x0^2 + b*x1)",
      "sin(x0)^3 - cos(x1)*exp(b*x0*x1)",
      "(x0 + sin(b*x1))/(3 + cos(x0))",
  };
  for (const char* s : exprs) {
    const ScalarExpr e = parse_expr(s, 2, names);
    // third-order stencil truncation is O(h^2 f^(5)), so allow more slack there
    check_jet_against_fd(e, {0.3, -0.6}, b, 2e-6);
  }
}

TEST_CASE("eval_jet: product nodes evaluate as the jet product") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const ScalarExpr e1 = random_poly(rng, 3);
    const ScalarExpr e2 = random_poly(rng, 3);
    const ScalarExpr prod = ScalarExpr::make(Kind::Product, e1, e2);
    Point p(3);
    for (auto& c : p) c = coord(rng);
    const Jet3 a = eval_jet(prod, p, {});
    const Jet3 b = eval_jet(e1, p, {}) * eval_jet(e2, p, {});
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
      CHECK(std::abs(a.coeffs()[i] - b.coeffs()[i]) <=
            1e-12 * std::max(1.0, std::abs(b.coeffs()[i])));
    }
  }
}

TEST_CASE("derivative: matches jet coefficients") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const Bindings b{{"a", 1.3}, {"b", -0.2}};
  const std::set<std::string> names{"a", "b"};
  std::vector<ScalarExpr> cases;
  for (int t = 0; t < 10; ++t) cases.push_back(random_poly(rng, 3));
  cases.push_back(parse_expr("exp(a*x0)*sin(x1)/(2 + x2^2)", 3, names));
  for (const ScalarExpr& e : cases) {
    Point p(3);
    for (auto& c : p) c = coord(rng);
    const Jet3 jet = eval_jet(e, p, b);
    for (int i = 0; i < 3; ++i) {
      const ScalarExpr di = derivative(e, i);
      const double v = eval_value(di, p, b);
      CHECK(std::abs(v - jet.d1(i)) <= 1e-9 * std::max(1.0, std::abs(jet.d1(i))));
      for (int j = 0; j < 3; ++j) {
        const double w = eval_value(derivative(di, j), p, b);
        CHECK(std::abs(w - jet.d2(i, j)) <= 1e-9 * std::max(1.0, std::abs(jet.d2(i, j))));
      }
    }
  }
}

TEST_CASE("evaluation errors") {
  const ScalarExpr q = parse_expr("1/x0", 1, {});
  CHECK_THROWS_AS(eval_value(q, {0.0}, {}), EvalError);
  CHECK_THROWS_AS(eval_jet(q, {0.0}, {}), EvalError);
  CHECK(eval_value(q, {2.0}, {}) == 0.5);

  const ScalarExpr r = parse_expr("1/(x0 - x0)", 1, {});
  CHECK_THROWS_AS(eval_value(r, {1.5}, {}), EvalError);

  const ScalarExpr p = parse_expr("a*x0", 1, {"a"});
  CHECK_THROWS_AS(eval_value(p, {1.0}, {}), EvalError);
  CHECK(eval_value(p, {2.0}, {{"a", 3.0}}) == 6.0);
}
