#include "curvlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>

namespace curvlab {

struct ScalarExpr::Node {
  Kind kind;
  double value = 0.0;       // Constant
  int index = 0;            // Coordinate
  int exponent = 0;         // Power
  std::string name;         // Parameter
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

NodePtr make_node(ScalarExpr::Kind kind, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

ScalarExpr ScalarExpr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = v;
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::coordinate(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coordinate;
  n->index = index;
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::parameter(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Parameter;
  n->name = std::move(name);
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::power(const ScalarExpr& base, int exponent) {
  if (exponent < 0) throw Error("integer power exponent must be >= 0");
  if (base.kind() == Kind::Constant) return constant(std::pow(base.constant_value(), exponent));
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = exponent;
  n->a = base.node_;
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::make(Kind kind, const ScalarExpr& a) {
  return ScalarExpr(make_node(kind, a.node_));
}

ScalarExpr ScalarExpr::make(Kind kind, const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(kind, a.node_, b.node_));
}

ScalarExpr ScalarExpr::make_power(const ScalarExpr& base, int exponent) {
  if (exponent < 0) throw Error("integer power exponent must be >= 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = exponent;
  n->a = base.node_;
  return ScalarExpr(std::move(n));
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_constant_zero()) return b;
  if (b.is_constant_zero()) return a;
  if (a.kind() == ScalarExpr::Kind::Constant && b.kind() == ScalarExpr::Kind::Constant)
    return ScalarExpr::constant(a.constant_value() + b.constant_value());
  return ScalarExpr(make_node(ScalarExpr::Kind::Sum, a.node_, b.node_));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_constant_zero() || b.is_constant_zero()) return ScalarExpr::constant(0.0);
  if (a.is_constant_one()) return b;
  if (b.is_constant_one()) return a;
  if (a.kind() == ScalarExpr::Kind::Constant && b.kind() == ScalarExpr::Kind::Constant)
    return ScalarExpr::constant(a.constant_value() * b.constant_value());
  return ScalarExpr(make_node(ScalarExpr::Kind::Product, a.node_, b.node_));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ScalarExpr::Kind::Quotient, a.node_, b.node_));
}

ScalarExpr ScalarExpr::operator-() const {
  if (kind() == Kind::Constant) return constant(-constant_value());
  if (kind() == Kind::Negate) return child(0);
  return ScalarExpr(make_node(Kind::Negate, node_));
}

ScalarExpr exp(const ScalarExpr& a) {
  return ScalarExpr(make_node(ScalarExpr::Kind::Exp, a.node_));
}

ScalarExpr sin(const ScalarExpr& a) {
  return ScalarExpr(make_node(ScalarExpr::Kind::Sin, a.node_));
}

ScalarExpr cos(const ScalarExpr& a) {
  return ScalarExpr(make_node(ScalarExpr::Kind::Cos, a.node_));
}

ScalarExpr::Kind ScalarExpr::kind() const { return node_->kind; }
double ScalarExpr::constant_value() const { return node_->value; }
int ScalarExpr::coordinate_index() const { return node_->index; }
const std::string& ScalarExpr::parameter_name() const { return node_->name; }
int ScalarExpr::exponent() const { return node_->exponent; }

int ScalarExpr::child_count() const {
  return (node_->b ? 2 : (node_->a ? 1 : 0));
}

const ScalarExpr ScalarExpr::child(int i) const {
  return ScalarExpr(i == 0 ? node_->a : node_->b);
}

bool ScalarExpr::is_constant_zero() const {
  return kind() == Kind::Constant && constant_value() == 0.0;
}

bool ScalarExpr::is_constant_one() const {
  return kind() == Kind::Constant && constant_value() == 1.0;
}

bool ScalarExpr::same_tree(const ScalarExpr& other) const {
  const Node* x = node_.get();
  const Node* y = other.node_.get();
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Kind::Constant:
      if (x->value != y->value) return false;
      break;
    case Kind::Coordinate:
      if (x->index != y->index) return false;
      break;
    case Kind::Parameter:
      if (x->name != y->name) return false;
      break;
    case Kind::Power:
      if (x->exponent != y->exponent) return false;
      break;
    default:
      break;
  }
  if (static_cast<bool>(x->a) != static_cast<bool>(y->a)) return false;
  if (static_cast<bool>(x->b) != static_cast<bool>(y->b)) return false;
  if (x->a && !ScalarExpr(x->a).same_tree(ScalarExpr(y->a))) return false;
  if (x->b && !ScalarExpr(x->b).same_tree(ScalarExpr(y->b))) return false;
  return true;
}

void ScalarExpr::collect_coordinates(std::set<int>& out) const {
  if (kind() == Kind::Coordinate) out.insert(coordinate_index());
  for (int i = 0; i < child_count(); ++i) child(i).collect_coordinates(out);
}

void ScalarExpr::collect_parameters(std::set<std::string>& out) const {
  if (kind() == Kind::Parameter) out.insert(parameter_name());
  for (int i = 0; i < child_count(); ++i) child(i).collect_parameters(out);
}

// ---------------------------------------------------------------------------
// printing

namespace {

// precedence levels: sum 1, product/quotient 2, unary minus 3, power 4, atom 5
int level(const ScalarExpr& e) {
  switch (e.kind()) {
    case ScalarExpr::Kind::Sum:
      return 1;
    case ScalarExpr::Kind::Product:
    case ScalarExpr::Kind::Quotient:
      return 2;
    case ScalarExpr::Kind::Negate:
      return 3;
    case ScalarExpr::Kind::Power:
      return 4;
    default:
      return 5;
  }
}

std::string format_constant(double v) {
  if (v == static_cast<double>(static_cast<long long>(v)) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string print(const ScalarExpr& e);

std::string wrapped(const ScalarExpr& e, int min_level) {
  std::string s = print(e);
  if (level(e) < min_level) return "(" + s + ")";
  return s;
}

std::string print(const ScalarExpr& e) {
  using Kind = ScalarExpr::Kind;
  switch (e.kind()) {
    case Kind::Constant:
      return format_constant(e.constant_value());
    case Kind::Coordinate:
      return "x" + std::to_string(e.coordinate_index());
    case Kind::Parameter:
      return e.parameter_name();
    case Kind::Sum: {
      const ScalarExpr a = e.child(0), b = e.child(1);
      if (b.kind() == Kind::Negate) return wrapped(a, 1) + " - " + wrapped(b.child(0), 2);
      return wrapped(a, 1) + " + " + wrapped(b, 2);
    }
    case Kind::Product:
      return wrapped(e.child(0), 2) + "*" + wrapped(e.child(1), 3);
    case Kind::Quotient:
      return wrapped(e.child(0), 2) + "/" + wrapped(e.child(1), 3);
    case Kind::Negate:
      return "-" + wrapped(e.child(0), 3);
    case Kind::Power:
      return wrapped(e.child(0), 4) + "^" + std::to_string(e.exponent());
    case Kind::Exp:
      return "exp(" + print(e.child(0)) + ")";
    case Kind::Sin:
      return "sin(" + print(e.child(0)) + ")";
    case Kind::Cos:
      return "cos(" + print(e.child(0)) + ")";
  }
  return "?";
}

}  // namespace

std::string ScalarExpr::to_string() const { return print(*this); }

// ---------------------------------------------------------------------------
// parser: recursive descent

namespace {

struct Token {
  enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } type;
  std::size_t offset = 0;
  double number = 0.0;
  bool integral = false;  // number consists of digits only
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.type = Token::End;
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.type = Token::Plus; ++pos_; return;
      case '-': tok_.type = Token::Minus; ++pos_; return;
      case '*': tok_.type = Token::Star; ++pos_; return;
      case '/': tok_.type = Token::Slash; ++pos_; return;
      case '^': tok_.type = Token::Caret; ++pos_; return;
      case '(': tok_.type = Token::LParen; ++pos_; return;
      case ')': tok_.type = Token::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      bool integral = true;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        integral = false;
        ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        integral = false;
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
          throw ParseError("malformed exponent in numeric literal", pos_);
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
      tok_.type = Token::Number;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      if (tok_.text == ".") throw ParseError("malformed numeric literal", start);
      tok_.number = std::stod(tok_.text);
      tok_.integral = integral;
      return;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::islower(static_cast<unsigned char>(src_[pos_])) ||
              std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Ident;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, int dim, const std::set<std::string>& params)
      : lex_(text), dim_(dim), params_(params) {}

  ScalarExpr parse() {
    ScalarExpr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::End) throw ParseError("unexpected trailing input", t.offset);
    return e;
  }

 private:
  ScalarExpr parse_sum() {
    ScalarExpr e = parse_term();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::Plus) {
        lex_.take();
        e = ScalarExpr::make(ScalarExpr::Kind::Sum, e, parse_term());
      } else if (t.type == Token::Minus) {
        lex_.take();
        e = ScalarExpr::make(ScalarExpr::Kind::Sum, e, ScalarExpr::make(ScalarExpr::Kind::Negate, parse_term()));
      } else {
        return e;
      }
    }
  }

  ScalarExpr parse_term() {
    ScalarExpr e = parse_factor();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::Star) {
        lex_.take();
        e = ScalarExpr::make(ScalarExpr::Kind::Product, e, parse_factor());
      } else if (t.type == Token::Slash) {
        lex_.take();
        e = ScalarExpr::make(ScalarExpr::Kind::Quotient, e, parse_factor());
      } else {
        return e;
      }
    }
  }

  ScalarExpr parse_factor() {
    if (lex_.peek().type == Token::Minus) {
      lex_.take();
      return ScalarExpr::make(ScalarExpr::Kind::Negate, parse_factor());
    }
    return parse_power();
  }

  ScalarExpr parse_power() {
    ScalarExpr e = parse_atom();
    while (lex_.peek().type == Token::Caret) {
      lex_.take();
      const Token t = lex_.take();
      if (t.type != Token::Number || !t.integral)
        throw ParseError("exponent must be a non-negative integer", t.offset);
      if (t.number > 1000.0) throw ParseError("exponent too large", t.offset);
      e = ScalarExpr::make_power(e, static_cast<int>(t.number));
    }
    return e;
  }

  ScalarExpr parse_atom() {
    const Token t = lex_.take();
    if (t.type == Token::Number) return ScalarExpr::constant(t.number);
    if (t.type == Token::LParen) {
      ScalarExpr e = parse_sum();
      const Token r = lex_.take();
      if (r.type != Token::RParen) throw ParseError("expected ')'", r.offset);
      return e;
    }
    if (t.type == Token::Ident) return ident(t);
    throw ParseError("expected a number, identifier or '('", t.offset);
  }

  ScalarExpr ident(const Token& t) {
    if (t.text == "exp" || t.text == "sin" || t.text == "cos") {
      const Token l = lex_.take();
      if (l.type != Token::LParen) throw ParseError("expected '(' after function name", l.offset);
      ScalarExpr arg = parse_sum();
      const Token r = lex_.take();
      if (r.type != Token::RParen) throw ParseError("expected ')'", r.offset);
      if (t.text == "exp") return ScalarExpr::make(ScalarExpr::Kind::Exp, arg);
      if (t.text == "sin") return ScalarExpr::make(ScalarExpr::Kind::Sin, arg);
      return ScalarExpr::make(ScalarExpr::Kind::Cos, arg);
    }
    if (t.text.size() >= 2 && t.text[0] == 'x' &&
        t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int idx = std::stoi(t.text.substr(1));
      if (idx >= dim_)
        throw ParseError("coordinate index out of range for dimension " + std::to_string(dim_),
                         t.offset);
      return ScalarExpr::coordinate(idx);
    }
    if (params_.count(t.text)) return ScalarExpr::parameter(t.text);
    throw ParseError("unknown identifier '" + t.text + "'", t.offset);
  }

  Lexer lex_;
  int dim_;
  const std::set<std::string>& params_;
};

}  // namespace

ScalarExpr parse_expr(std::string_view text, int dim, const std::set<std::string>& params) {
  for (const auto& p : params) {
    if (p == "exp" || p == "sin" || p == "cos")
      throw ParseError("parameter name '" + p + "' collides with a function name", 0);
    if (p.size() >= 2 && p[0] == 'x' && p.find_first_not_of("0123456789", 1) == std::string::npos)
      throw ParseError("parameter name '" + p + "' collides with a coordinate name", 0);
  }
  return Parser(text, dim, params).parse();
}

// ---------------------------------------------------------------------------
// derivatives and evaluation

ScalarExpr derivative(const ScalarExpr& e, int index) {
  using Kind = ScalarExpr::Kind;
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
      return ScalarExpr::constant(0.0);
    case Kind::Coordinate:
      return ScalarExpr::constant(e.coordinate_index() == index ? 1.0 : 0.0);
    case Kind::Sum:
      return derivative(e.child(0), index) + derivative(e.child(1), index);
    case Kind::Product:
      return derivative(e.child(0), index) * e.child(1) + e.child(0) * derivative(e.child(1), index);
    case Kind::Negate:
      return -derivative(e.child(0), index);
    case Kind::Quotient: {
      const ScalarExpr f = e.child(0), g = e.child(1);
      return (derivative(f, index) * g - f * derivative(g, index)) / (g * g);
    }
    case Kind::Power: {
      const int n = e.exponent();
      if (n == 0) return ScalarExpr::constant(0.0);
      return ScalarExpr::constant(n) * ScalarExpr::power(e.child(0), n - 1) *
             derivative(e.child(0), index);
    }
    case Kind::Exp:
      return exp(e.child(0)) * derivative(e.child(0), index);
    case Kind::Sin:
      return cos(e.child(0)) * derivative(e.child(0), index);
    case Kind::Cos:
      return -(sin(e.child(0)) * derivative(e.child(0), index));
  }
  throw Error("unreachable expression kind");
}

double eval_value(const ScalarExpr& e, const Point& p, const Bindings& bindings) {
  using Kind = ScalarExpr::Kind;
  switch (e.kind()) {
    case Kind::Constant:
      return e.constant_value();
    case Kind::Coordinate: {
      const int i = e.coordinate_index();
      if (i >= static_cast<int>(p.size()))
        throw EvalError("point dimension too small for coordinate x" + std::to_string(i));
      return p[i];
    }
    case Kind::Parameter: {
      auto it = bindings.find(e.parameter_name());
      if (it == bindings.end()) throw EvalError("unbound parameter '" + e.parameter_name() + "'");
      return it->second;
    }
    case Kind::Sum:
      return eval_value(e.child(0), p, bindings) + eval_value(e.child(1), p, bindings);
    case Kind::Product:
      return eval_value(e.child(0), p, bindings) * eval_value(e.child(1), p, bindings);
    case Kind::Negate:
      return -eval_value(e.child(0), p, bindings);
    case Kind::Quotient: {
      const double den = eval_value(e.child(1), p, bindings);
      if (den == 0.0) throw EvalError("division by zero at evaluation point");
      return eval_value(e.child(0), p, bindings) / den;
    }
    case Kind::Power: {
      double base = eval_value(e.child(0), p, bindings);
      double r = 1.0;
      for (int t = 0; t < e.exponent(); ++t) r *= base;
      return r;
    }
    case Kind::Exp:
      return std::exp(eval_value(e.child(0), p, bindings));
    case Kind::Sin:
      return std::sin(eval_value(e.child(0), p, bindings));
    case Kind::Cos:
      return std::cos(eval_value(e.child(0), p, bindings));
  }
  throw Error("unreachable expression kind");
}

Jet3 eval_jet(const ScalarExpr& e, const Point& p, const Bindings& bindings) {
  using Kind = ScalarExpr::Kind;
  const int m = static_cast<int>(p.size());
  switch (e.kind()) {
    case Kind::Constant:
      return Jet3::constant(m, e.constant_value());
    case Kind::Coordinate: {
      const int i = e.coordinate_index();
      if (i >= m)
        throw EvalError("point dimension too small for coordinate x" + std::to_string(i));
      return Jet3::coordinate(m, i, p[i]);
    }
    case Kind::Parameter: {
      auto it = bindings.find(e.parameter_name());
      if (it == bindings.end()) throw EvalError("unbound parameter '" + e.parameter_name() + "'");
      return Jet3::constant(m, it->second);
    }
    case Kind::Sum:
      return eval_jet(e.child(0), p, bindings) + eval_jet(e.child(1), p, bindings);
    case Kind::Product:
      return eval_jet(e.child(0), p, bindings) * eval_jet(e.child(1), p, bindings);
    case Kind::Negate:
      return -eval_jet(e.child(0), p, bindings);
    case Kind::Quotient:
      return eval_jet(e.child(0), p, bindings) / eval_jet(e.child(1), p, bindings);
    case Kind::Power:
      return Jet3::ipow(eval_jet(e.child(0), p, bindings), e.exponent());
    case Kind::Exp:
      return exp(eval_jet(e.child(0), p, bindings));
    case Kind::Sin:
      return sin(eval_jet(e.child(0), p, bindings));
    case Kind::Cos:
      return cos(eval_jet(e.child(0), p, bindings));
  }
  throw Error("unreachable expression kind");
}

}  // namespace curvlab
