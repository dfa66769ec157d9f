#ifndef HPW_EXPR_HPP
#define HPW_EXPR_HPP

/// \file
/// Expression trees for holomorphic functions of one complex variable and
/// positive functions of one real variable: parsing, printing, evaluation
/// and symbolic differentiation.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hpw {

using Complex = std::complex<double>;

/// Base of every error raised while parsing or evaluating an expression.
class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind { Syntax, UnknownIdentifier, WrongVariable };

class ParseError : public ExprError {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& what)
      : ExprError(what + " at position " + std::to_string(position)),
        kind_(kind),
        position_(position) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

enum class EvalErrorKind { Pole, Overflow, NonReal };

class EvalError : public ExprError {
 public:
  EvalError(EvalErrorKind kind, const std::string& what) : ExprError(what), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

enum class NodeKind { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Exp };

/// Half-open byte range of the source text a node was parsed from.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Constant;
  Complex value{};   // Constant
  int exponent = 0;  // Power
  NodePtr lhs;       // unary operand or left operand
  NodePtr rhs;
  Span span{};
};

inline constexpr int kMaxExponent = 64;
inline constexpr double kPoleThreshold = 1e-300;
inline constexpr double kOverflowThreshold = 1e300;

/// Immutable expression in a single variable. Copies share the tree.
class Expr {
 public:
  Expr(NodePtr root, std::string variable) : root_(std::move(root)), variable_(std::move(variable)) {
    if (!root_) throw std::invalid_argument("Expr: null root");
  }

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::string& variable() const { return variable_; }

 private:
  NodePtr root_;
  std::string variable_;
};

namespace detail {

inline NodePtr leaf_constant(Complex c, Span span = {}) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = c;
  n->span = span;
  return n;
}

inline NodePtr leaf_variable(Span span = {}) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->span = span;
  return n;
}

inline NodePtr raw_node(NodeKind kind, NodePtr lhs, NodePtr rhs = nullptr, int exponent = 0, Span span = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->exponent = exponent;
  n->span = span;
  return n;
}

inline bool is_constant(const NodePtr& n) { return n->kind == NodeKind::Constant; }
inline bool is_constant(const NodePtr& n, Complex c) { return is_constant(n) && n->value == c; }

inline bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

inline Complex int_power(Complex base, int n) {
  Complex result{1.0, 0.0};
  Complex b = base;
  unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
  while (m != 0) {
    if (m & 1u) result *= b;
    b *= b;
    m >>= 1u;
  }
  return n < 0 ? Complex{1.0, 0.0} / result : result;
}

// Folding constructors used by differentiate/substitute and the builders
// below. The parser never folds.

inline NodePtr fold_neg(NodePtr a) {
  if (is_constant(a)) return leaf_constant(-a->value);
  if (a->kind == NodeKind::Negate) return a->lhs;
  return raw_node(NodeKind::Negate, std::move(a));
}

inline NodePtr fold_add(NodePtr a, NodePtr b) {
  if (is_constant(a, 0.0)) return b;
  if (is_constant(b, 0.0)) return a;
  if (is_constant(a) && is_constant(b)) return leaf_constant(a->value + b->value);
  return raw_node(NodeKind::Add, std::move(a), std::move(b));
}

inline NodePtr fold_sub(NodePtr a, NodePtr b) {
  if (is_constant(b, 0.0)) return a;
  if (is_constant(a, 0.0)) return fold_neg(std::move(b));
  if (is_constant(a) && is_constant(b)) return leaf_constant(a->value - b->value);
  return raw_node(NodeKind::Subtract, std::move(a), std::move(b));
}

inline NodePtr fold_mul(NodePtr a, NodePtr b) {
  if (is_constant(a, 0.0) || is_constant(b, 0.0)) return leaf_constant(0.0);
  if (is_constant(a, 1.0)) return b;
  if (is_constant(b, 1.0)) return a;
  if (is_constant(a) && is_constant(b)) return leaf_constant(a->value * b->value);
  return raw_node(NodeKind::Multiply, std::move(a), std::move(b));
}

inline NodePtr fold_div(NodePtr a, NodePtr b) {
  if (is_constant(b, 1.0)) return a;
  if (is_constant(b) && std::abs(b->value) < kPoleThreshold) {
    return raw_node(NodeKind::Divide, std::move(a), std::move(b));
  }
  if (is_constant(a, 0.0)) return a;
  if (is_constant(a) && is_constant(b)) return leaf_constant(a->value / b->value);
  return raw_node(NodeKind::Divide, std::move(a), std::move(b));
}

inline NodePtr fold_pow(NodePtr a, int n) {
  if (n == 0) return leaf_constant(1.0);
  if (n == 1) return a;
  if (is_constant(a) && (n > 0 || std::abs(a->value) >= kPoleThreshold)) {
    const Complex v = int_power(a->value, n);
    if (finite(v)) return leaf_constant(v);
  }
  if (n > kMaxExponent || n < -kMaxExponent) {
    // Split so every stored exponent respects |n| <= 64.
    const int half = n / 2;
    return fold_mul(fold_pow(a, half), fold_pow(a, n - half));
  }
  return raw_node(NodeKind::Power, std::move(a), nullptr, n);
}

inline NodePtr fold_exp(NodePtr a) {
  if (is_constant(a)) {
    const Complex v = std::exp(a->value);
    if (finite(v) && std::abs(v) <= kOverflowThreshold) return leaf_constant(v);
  }
  return raw_node(NodeKind::Exp, std::move(a));
}

inline const std::string& require_same_variable(const Expr& a, const Expr& b) {
  if (a.variable() != b.variable()) {
    throw std::invalid_argument("cannot combine expressions in '" + a.variable() + "' and '" + b.variable() + "'");
  }
  return a.variable();
}

}  // namespace detail

// Builders. These fold trivial constants (0, 1, constant subtrees).

inline Expr make_const(Complex c, std::string variable) {
  return Expr(detail::leaf_constant(c), std::move(variable));
}
inline Expr make_var(std::string variable) { return Expr(detail::leaf_variable(), std::move(variable)); }

inline Expr operator-(const Expr& a) { return Expr(detail::fold_neg(a.root_ptr()), a.variable()); }
inline Expr operator+(const Expr& a, const Expr& b) {
  return Expr(detail::fold_add(a.root_ptr(), b.root_ptr()), detail::require_same_variable(a, b));
}
inline Expr operator-(const Expr& a, const Expr& b) {
  return Expr(detail::fold_sub(a.root_ptr(), b.root_ptr()), detail::require_same_variable(a, b));
}
inline Expr operator*(const Expr& a, const Expr& b) {
  return Expr(detail::fold_mul(a.root_ptr(), b.root_ptr()), detail::require_same_variable(a, b));
}
inline Expr operator/(const Expr& a, const Expr& b) {
  return Expr(detail::fold_div(a.root_ptr(), b.root_ptr()), detail::require_same_variable(a, b));
}
inline Expr operator*(Complex c, const Expr& b) { return make_const(c, b.variable()) * b; }
inline Expr operator+(Complex c, const Expr& b) { return make_const(c, b.variable()) + b; }
inline Expr operator-(Complex c, const Expr& b) { return make_const(c, b.variable()) - b; }
inline Expr operator/(Complex c, const Expr& b) { return make_const(c, b.variable()) / b; }
inline Expr operator+(const Expr& a, Complex c) { return a + make_const(c, a.variable()); }
inline Expr operator-(const Expr& a, Complex c) { return a - make_const(c, a.variable()); }

inline Expr make_exp(const Expr& a) { return Expr(detail::fold_exp(a.root_ptr()), a.variable()); }
inline Expr make_pow(const Expr& a, int n) { return Expr(detail::fold_pow(a.root_ptr(), n), a.variable()); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool is_reserved(std::string_view id) { return id == "i" || id == "pi" || id == "e" || id == "exp"; }

inline bool is_identifier(std::string_view id) {
  if (id.empty() || !std::isalpha(static_cast<unsigned char>(id.front()))) return false;
  for (char ch : id) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view src, std::string_view variable) : src_(src), variable_(variable) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, ParseErrorKind kind = ParseErrorKind::Syntax) const {
    throw ParseError(kind, pos_, what);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) {
      fail(pos_ < src_.size() ? "expected '" + std::string(1, ch) + "'"
                              : "expected '" + std::string(1, ch) + "' before end of input");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      const std::size_t start = pos_;
      if (accept('+')) {
        lhs = raw_node(NodeKind::Add, lhs, parse_term(), 0, {lhs->span.begin, pos_});
      } else if (accept('-')) {
        lhs = raw_node(NodeKind::Subtract, lhs, parse_term(), 0, {lhs->span.begin, pos_});
      } else {
        pos_ = start;
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = raw_node(NodeKind::Multiply, lhs, parse_factor(), 0, {lhs->span.begin, pos_});
      } else if (accept('/')) {
        lhs = raw_node(NodeKind::Divide, lhs, parse_factor(), 0, {lhs->span.begin, pos_});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    skip_ws();
    const std::size_t start = pos_;
    if (accept('-')) return raw_node(NodeKind::Negate, parse_base(), nullptr, 0, {start, pos_});
    return parse_base();
  }

  NodePtr parse_base() {
    NodePtr atom = parse_atom();
    if (!accept('^')) return atom;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("integer exponent expected");
    }
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      fail("exponent must be an integer");
    }
    const std::string text(src_.substr(digits, pos_ - digits));
    if (text.size() > 3 || std::stoi(text) > kMaxExponent) {
      pos_ = start;
      fail("exponent out of range (|n| <= 64)");
    }
    const int n = std::stoi(text);
    return raw_node(NodeKind::Power, atom, nullptr, negative ? -n : n, {atom->span.begin, pos_});
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ - start == 1 && src_[start] == '.') {
      pos_ = start;
      fail("malformed number");
    }
    // Exponent part only when digits follow; "2e" is a number then an identifier.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
        pos_ = k;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) {
      pos_ = start;
      fail("numeric literal out of range");
    }
    return leaf_constant(v, {start, pos_});
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    const char ch = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
    if (ch == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view id = src_.substr(start, pos_ - start);
      const Span span{start, pos_};
      if (id == variable_) return leaf_variable(span);
      if (id == "i") return leaf_constant({0.0, 1.0}, span);
      if (id == "pi") return leaf_constant(3.14159265358979323846, span);
      if (id == "e") return leaf_constant(2.71828182845904523536, span);
      if (id == "exp") {
        expect('(');
        NodePtr arg = parse_expr();
        expect(')');
        return raw_node(NodeKind::Exp, arg, nullptr, 0, {start, pos_});
      }
      pos_ = start;
      if (id == "z" || id == "t" || id == "w") {
        fail("variable '" + std::string(id) + "' used where '" + std::string(variable_) + "' is expected",
             ParseErrorKind::WrongVariable);
      }
      fail("unknown identifier '" + std::string(id) + "'", ParseErrorKind::UnknownIdentifier);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view src_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `source` as an expression in `variable`. Precedence, tightest
/// first: integer power, unary minus, multiply/divide, add/subtract; binary
/// operators associate to the left. Throws ParseError.
inline Expr parse(std::string_view source, std::string_view variable) {
  if (!detail::is_identifier(variable) || detail::is_reserved(variable)) {
    throw std::invalid_argument("invalid variable name '" + std::string(variable) + "'");
  }
  detail::Parser parser(source, variable);
  return Expr(parser.parse(), std::string(variable));
}

// ---------------------------------------------------------------------------
// Printing (fully parenthesized, re-parsable)

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string print_constant(Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    return std::signbit(re) ? "(-" + format_double(-re) + ")" : format_double(re);
  }
  std::string s = "(";
  if (re != 0.0) s += format_double(re) + (std::signbit(im) ? " - " : " + ");
  else if (std::signbit(im)) s += "-";
  s += format_double(std::abs(im)) + "*i)";
  return s;
}

inline std::string print_node(const Node& n, const std::string& var) {
  switch (n.kind) {
    case NodeKind::Constant: return print_constant(n.value);
    case NodeKind::Variable: return var;
    case NodeKind::Negate: return "(-" + print_node(*n.lhs, var) + ")";
    case NodeKind::Add: return "(" + print_node(*n.lhs, var) + " + " + print_node(*n.rhs, var) + ")";
    case NodeKind::Subtract: return "(" + print_node(*n.lhs, var) + " - " + print_node(*n.rhs, var) + ")";
    case NodeKind::Multiply: return "(" + print_node(*n.lhs, var) + " * " + print_node(*n.rhs, var) + ")";
    case NodeKind::Divide: return "(" + print_node(*n.lhs, var) + " / " + print_node(*n.rhs, var) + ")";
    case NodeKind::Power: return "(" + print_node(*n.lhs, var) + ")^" + std::to_string(n.exponent);
    case NodeKind::Exp: return "exp(" + print_node(*n.lhs, var) + ")";
  }
  return {};
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print_node(e.root(), e.variable()); }

// ---------------------------------------------------------------------------
// Plain evaluation

namespace detail {

inline Complex checked(Complex v) {
  if (!(std::abs(v) <= kOverflowThreshold)) throw EvalError(EvalErrorKind::Overflow, "overflow: magnitude exceeds 1e300");
  return v;
}

inline Complex eval_node(const Node& n, Complex z) {
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return z;
    case NodeKind::Negate: return -eval_node(*n.lhs, z);
    case NodeKind::Add: return checked(eval_node(*n.lhs, z) + eval_node(*n.rhs, z));
    case NodeKind::Subtract: return checked(eval_node(*n.lhs, z) - eval_node(*n.rhs, z));
    case NodeKind::Multiply: return checked(eval_node(*n.lhs, z) * eval_node(*n.rhs, z));
    case NodeKind::Divide: {
      const Complex num = eval_node(*n.lhs, z);
      const Complex den = eval_node(*n.rhs, z);
      if (std::abs(den) < kPoleThreshold) throw EvalError(EvalErrorKind::Pole, "pole: denominator vanishes");
      return checked(num / den);
    }
    case NodeKind::Power: {
      const Complex base = eval_node(*n.lhs, z);
      if (n.exponent < 0 && std::abs(base) < kPoleThreshold) {
        throw EvalError(EvalErrorKind::Pole, "pole: negative power of zero");
      }
      return checked(int_power(base, n.exponent));
    }
    case NodeKind::Exp: {
      const Complex arg = eval_node(*n.lhs, z);
      if (arg.real() > 690.8) throw EvalError(EvalErrorKind::Overflow, "overflow: exp argument too large");
      return checked(std::exp(arg));
    }
  }
  return {};
}

inline double eval_real_node(const Node& n, double t) {
  auto ok = [](double v) {
    if (!(std::abs(v) <= kOverflowThreshold)) throw EvalError(EvalErrorKind::Overflow, "overflow: magnitude exceeds 1e300");
    return v;
  };
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value.imag() != 0.0) throw EvalError(EvalErrorKind::NonReal, "imaginary constant in a real expression");
      return n.value.real();
    case NodeKind::Variable: return t;
    case NodeKind::Negate: return -eval_real_node(*n.lhs, t);
    case NodeKind::Add: return ok(eval_real_node(*n.lhs, t) + eval_real_node(*n.rhs, t));
    case NodeKind::Subtract: return ok(eval_real_node(*n.lhs, t) - eval_real_node(*n.rhs, t));
    case NodeKind::Multiply: return ok(eval_real_node(*n.lhs, t) * eval_real_node(*n.rhs, t));
    case NodeKind::Divide: {
      const double num = eval_real_node(*n.lhs, t);
      const double den = eval_real_node(*n.rhs, t);
      if (std::abs(den) < kPoleThreshold) throw EvalError(EvalErrorKind::Pole, "pole: denominator vanishes");
      return ok(num / den);
    }
    case NodeKind::Power: {
      const double base = eval_real_node(*n.lhs, t);
      if (n.exponent < 0 && std::abs(base) < kPoleThreshold) {
        throw EvalError(EvalErrorKind::Pole, "pole: negative power of zero");
      }
      double r = 1.0;
      double b = base;
      unsigned m = static_cast<unsigned>(n.exponent < 0 ? -n.exponent : n.exponent);
      while (m != 0) {
        if (m & 1u) r *= b;
        b *= b;
        m >>= 1u;
      }
      return ok(n.exponent < 0 ? 1.0 / r : r);
    }
    case NodeKind::Exp: {
      const double arg = eval_real_node(*n.lhs, t);
      if (arg > 690.8) throw EvalError(EvalErrorKind::Overflow, "overflow: exp argument too large");
      return ok(std::exp(arg));
    }
  }
  return 0.0;
}

}  // namespace detail

/// Direct recursive evaluation. Throws EvalError on a pole (|den| < 1e-300)
/// or when any intermediate magnitude exceeds 1e300.
inline Complex eval_complex(const Expr& e, Complex z) { return detail::eval_node(e.root(), z); }

/// Real evaluation; imaginary constants are rejected with EvalErrorKind::NonReal.
inline double eval_real(const Expr& e, double t) { return detail::eval_real_node(e.root(), t); }

/// True when no constant in the tree has a nonzero imaginary part.
inline bool is_real_expression(const Expr& e) {
  auto walk = [](auto&& self, const Node& n) -> bool {
    if (n.kind == NodeKind::Constant) return n.value.imag() == 0.0;
    if (n.lhs && !self(self, *n.lhs)) return false;
    if (n.rhs && !self(self, *n.rhs)) return false;
    return true;
  };
  return walk(walk, e.root());
}

// ---------------------------------------------------------------------------
// Calculus and composition

namespace detail {

inline NodePtr derive(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant: return leaf_constant(0.0);
    case NodeKind::Variable: return leaf_constant(1.0);
    case NodeKind::Negate: return fold_neg(derive(n->lhs));
    case NodeKind::Add: return fold_add(derive(n->lhs), derive(n->rhs));
    case NodeKind::Subtract: return fold_sub(derive(n->lhs), derive(n->rhs));
    case NodeKind::Multiply:
      return fold_add(fold_mul(derive(n->lhs), n->rhs), fold_mul(n->lhs, derive(n->rhs)));
    case NodeKind::Divide: {
      // (u'v - uv') / v^2
      NodePtr num = fold_sub(fold_mul(derive(n->lhs), n->rhs), fold_mul(n->lhs, derive(n->rhs)));
      return fold_div(num, fold_pow(n->rhs, 2));
    }
    case NodeKind::Power: {
      const int k = n->exponent;
      NodePtr outer = fold_mul(leaf_constant(static_cast<double>(k)), fold_pow(n->lhs, k - 1));
      return fold_mul(outer, derive(n->lhs));
    }
    case NodeKind::Exp: return fold_mul(n, derive(n->lhs));
  }
  return leaf_constant(0.0);
}

inline NodePtr replace(const NodePtr& n, const NodePtr& with) {
  switch (n->kind) {
    case NodeKind::Constant: return n;
    case NodeKind::Variable: return with;
    case NodeKind::Negate: return fold_neg(replace(n->lhs, with));
    case NodeKind::Add: return fold_add(replace(n->lhs, with), replace(n->rhs, with));
    case NodeKind::Subtract: return fold_sub(replace(n->lhs, with), replace(n->rhs, with));
    case NodeKind::Multiply: return fold_mul(replace(n->lhs, with), replace(n->rhs, with));
    case NodeKind::Divide: return fold_div(replace(n->lhs, with), replace(n->rhs, with));
    case NodeKind::Power: return fold_pow(replace(n->lhs, with), n->exponent);
    case NodeKind::Exp: return fold_exp(replace(n->lhs, with));
  }
  return n;
}

}  // namespace detail

/// Symbolic derivative with respect to the expression's variable.
inline Expr differentiate(const Expr& e) { return Expr(detail::derive(e.root_ptr()), e.variable()); }

/// Composition e(inner): every occurrence of e's variable is replaced by
/// `inner`; the result is an expression in inner's variable.
inline Expr substitute(const Expr& e, const Expr& inner) {
  return Expr(detail::replace(e.root_ptr(), inner.root_ptr()), inner.variable());
}

}  // namespace hpw

#endif  // HPW_EXPR_HPP
