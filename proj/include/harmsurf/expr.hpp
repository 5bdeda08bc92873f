#pragma once

/**
 * @file expr.hpp
 * @brief A tiny language of entire functions of z, with jet evaluation.
 *
 * Grammar (whitespace insignificant):
 *
 *     expr   := term (('+' | '-') term)*
 *     term   := factor (('*' | '/') factor)*
 *     factor := ['-'] atom ['^' uint]
 *     atom   := number | 'i' | 'z' | func '(' expr ')' | '(' expr ')'
 *     func   := exp | sin | cos | sinh | cosh
 *
 * Only entire functions, quotients and non-negative integer powers are
 * representable, so no branch cut ever has to be chosen.
 */

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace harmsurf {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Sinh, Cosh };

inline constexpr unsigned kMaxPowExponent = 64;

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree node. Build through the factory functions below.
class ExprNode {
 public:
  Op op() const noexcept { return op_; }
  complex constant() const noexcept { return value_; }
  unsigned exponent() const noexcept { return exponent_; }
  const std::vector<Expr>& children() const noexcept { return children_; }
  const ExprNode& child(std::size_t i) const { return *children_.at(i); }

  static Expr make(Op op, std::vector<Expr> children, complex value = 0.0, unsigned exponent = 0) {
    auto node = std::shared_ptr<ExprNode>(new ExprNode());
    node->op_ = op;
    node->children_ = std::move(children);
    node->value_ = value;
    node->exponent_ = exponent;
    if (node->children_.size() != arity(op)) throw Error("expression node arity mismatch");
    for (const auto& c : node->children_) {
      if (!c) throw Error("null expression child");
    }
    if (op == Op::Pow && exponent > kMaxPowExponent) throw Error("power exponent exceeds 64");
    return node;
  }

  static constexpr std::size_t arity(Op op) {
    switch (op) {
      case Op::Const:
      case Op::Var: return 0;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: return 2;
      default: return 1;
    }
  }

 private:
  ExprNode() = default;

  Op op_ = Op::Const;
  complex value_ = 0.0;
  unsigned exponent_ = 0;
  std::vector<Expr> children_;
};

namespace expr {

inline Expr constant(complex v) { return ExprNode::make(Op::Const, {}, v); }
inline Expr var() { return ExprNode::make(Op::Var, {}); }
inline Expr add(Expr a, Expr b) { return ExprNode::make(Op::Add, {std::move(a), std::move(b)}); }
inline Expr sub(Expr a, Expr b) { return ExprNode::make(Op::Sub, {std::move(a), std::move(b)}); }
inline Expr mul(Expr a, Expr b) { return ExprNode::make(Op::Mul, {std::move(a), std::move(b)}); }
inline Expr div(Expr a, Expr b) { return ExprNode::make(Op::Div, {std::move(a), std::move(b)}); }
inline Expr neg(Expr a) { return ExprNode::make(Op::Neg, {std::move(a)}); }
inline Expr pow(Expr a, unsigned n) { return ExprNode::make(Op::Pow, {std::move(a)}, 0.0, n); }
inline Expr unary(Op fn, Expr a) { return ExprNode::make(fn, {std::move(a)}); }

}  // namespace expr

inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.op() != b.op() || a.children().size() != b.children().size()) return false;
  if (a.op() == Op::Const && a.constant() != b.constant()) return false;
  if (a.op() == Op::Pow && a.exponent() != b.exponent()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  }
  return true;
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    default: return nullptr;
  }
}

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Fully parenthesized text that parses back to the same tree. Constants
/// that are neither non-negative reals nor exactly i print as a sum and do
/// not round-trip structurally.
inline std::string print(const ExprNode& e) {
  switch (e.op()) {
    case Op::Const: {
      const complex c = e.constant();
      if (c == complex(0.0, 1.0)) return "i";
      if (c.imag() == 0.0 && !std::signbit(c.real())) return detail::format_real(c.real());
      return "(" + detail::format_real(c.real()) + " + " + detail::format_real(c.imag()) + "*i)";
    }
    case Op::Var: return "z";
    case Op::Add: return "(" + print(e.child(0)) + " + " + print(e.child(1)) + ")";
    case Op::Sub: return "(" + print(e.child(0)) + " - " + print(e.child(1)) + ")";
    case Op::Mul: return "(" + print(e.child(0)) + " * " + print(e.child(1)) + ")";
    case Op::Div: return "(" + print(e.child(0)) + " / " + print(e.child(1)) + ")";
    case Op::Neg: return "-(" + print(e.child(0)) + ")";
    case Op::Pow: return "(" + print(e.child(0)) + ")^" + std::to_string(e.exponent());
    default: return std::string(function_name(e.op())) + "(" + print(e.child(0)) + ")";
  }
}

inline std::string print(const Expr& e) { return print(*e); }

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail({"'+'", "'-'", "'*'", "'/'", "end of input"}, "trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail) {
    throw SyntaxError(pos_, std::move(expected), detail);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = expr::add(lhs, parse_term());
      } else if (accept('-')) {
        lhs = expr::sub(lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = expr::mul(lhs, parse_factor());
      } else if (accept('/')) {
        lhs = expr::div(lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    const bool negate = accept('-');
    Expr base = parse_atom();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
      if (start == pos_) fail({"unsigned integer"}, "exponent must be a non-negative integer");
      unsigned n = 0;
      const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, n);
      if (ec != std::errc() || n > kMaxPowExponent) {
        pos_ = start;
        fail({"unsigned integer <= 64"}, "exponent too large");
      }
      base = expr::pow(base, n);
    }
    return negate ? expr::neg(base) : base;
  }

  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  Expr parse_atom() {
    skip_ws();
    static const std::vector<std::string> kAtomStart = {"number", "'i'", "'z'", "function", "'('"};
    if (pos_ >= src_.size()) fail(kAtomStart, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail({"')'"}, "unbalanced parenthesis");
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_alpha(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "i") return expr::constant(complex(0.0, 1.0));
      if (name == "z") return expr::var();
      Op fn;
      if (name == "exp") {
        fn = Op::Exp;
      } else if (name == "sin") {
        fn = Op::Sin;
      } else if (name == "cos") {
        fn = Op::Cos;
      } else if (name == "sinh") {
        fn = Op::Sinh;
      } else if (name == "cosh") {
        fn = Op::Cosh;
      } else {
        throw UnknownFunction(std::string(name), start);
      }
      if (!accept('(')) fail({"'('"}, "function call requires parentheses");
      Expr arg = parse_expr();
      if (!accept(')')) fail({"')'"}, "unbalanced parenthesis");
      return expr::unary(fn, arg);
    }
    fail(kAtomStart, std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_, ++digits;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_, ++digits;
    }
    if (digits == 0) fail({"digit"}, "malformed number");
    // Optional exponent, only when digits follow.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        while (p < src_.size() && is_digit(src_[p])) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail({"finite decimal literal"}, "number out of range");
    }
    return expr::constant(v);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view src) { return detail::Parser(src).parse(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

template <std::size_t Order>
Jet<Order> checked(Jet<Order> j, const ExprNode& e) {
  if (!j.is_finite()) throw Overflow("non-finite value in '" + print(e) + "'");
  return j;
}

}  // namespace detail

/// Value and the first `Order` complex derivatives of `e` at z.
template <std::size_t Order>
Jet<Order> eval_jet(const ExprNode& e, complex z) {
  using J = Jet<Order>;
  switch (e.op()) {
    case Op::Const: return J::constant(e.constant());
    case Op::Var: return J::variable(z);
    case Op::Add: return detail::checked(eval_jet<Order>(e.child(0), z) + eval_jet<Order>(e.child(1), z), e);
    case Op::Sub: return detail::checked(eval_jet<Order>(e.child(0), z) - eval_jet<Order>(e.child(1), z), e);
    case Op::Mul: return detail::checked(eval_jet<Order>(e.child(0), z) * eval_jet<Order>(e.child(1), z), e);
    case Op::Div: {
      const J num = eval_jet<Order>(e.child(0), z);
      const J den = eval_jet<Order>(e.child(1), z);
      if (std::abs(den.v()) < kDivisionFloor) throw DivisionByZero(print(e.child(1)));
      return detail::checked(num / den, e);
    }
    case Op::Neg: return -eval_jet<Order>(e.child(0), z);
    case Op::Pow: return detail::checked(pow(eval_jet<Order>(e.child(0), z), e.exponent()), e);
    case Op::Exp: return detail::checked(exp(eval_jet<Order>(e.child(0), z)), e);
    case Op::Sin: return detail::checked(sin(eval_jet<Order>(e.child(0), z)), e);
    case Op::Cos: return detail::checked(cos(eval_jet<Order>(e.child(0), z)), e);
    case Op::Sinh: return detail::checked(sinh(eval_jet<Order>(e.child(0), z)), e);
    case Op::Cosh: return detail::checked(cosh(eval_jet<Order>(e.child(0), z)), e);
  }
  throw Error("unreachable expression op");
}

inline Jet2 eval_jet(const ExprNode& e, complex z) { return eval_jet<2>(e, z); }
inline Jet2 eval_jet(const Expr& e, complex z) { return eval_jet<2>(*e, z); }

/// Plain complex evaluation with no derivative bookkeeping.
inline complex eval_value(const ExprNode& e, complex z) {
  auto finite = [&](complex v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Overflow("non-finite value in '" + print(e) + "'");
    }
    return v;
  };
  switch (e.op()) {
    case Op::Const: return e.constant();
    case Op::Var: return z;
    case Op::Add: return finite(eval_value(e.child(0), z) + eval_value(e.child(1), z));
    case Op::Sub: return finite(eval_value(e.child(0), z) - eval_value(e.child(1), z));
    case Op::Mul: return finite(eval_value(e.child(0), z) * eval_value(e.child(1), z));
    case Op::Div: {
      const complex num = eval_value(e.child(0), z);
      const complex den = eval_value(e.child(1), z);
      if (std::abs(den) < kDivisionFloor) throw DivisionByZero(print(e.child(1)));
      return finite(num / den);
    }
    case Op::Neg: return -eval_value(e.child(0), z);
    case Op::Pow: {
      const complex b = eval_value(e.child(0), z);
      complex r = 1.0;
      for (unsigned k = 0; k < e.exponent(); ++k) r *= b;
      return finite(r);
    }
    case Op::Exp: return finite(std::exp(eval_value(e.child(0), z)));
    case Op::Sin: return finite(std::sin(eval_value(e.child(0), z)));
    case Op::Cos: return finite(std::cos(eval_value(e.child(0), z)));
    case Op::Sinh: return finite(std::sinh(eval_value(e.child(0), z)));
    case Op::Cosh: return finite(std::cosh(eval_value(e.child(0), z)));
  }
  throw Error("unreachable expression op");
}

inline complex eval_value(const Expr& e, complex z) { return eval_value(*e, z); }

}  // namespace harmsurf
