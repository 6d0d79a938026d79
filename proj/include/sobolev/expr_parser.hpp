#pragma once

// Recursive-descent parser for the expression language.
//
//   expr     := term { ("+" | "-") term }
//   term     := unary { ("*" | "/") unary }
//   unary    := "-" unary | power
//   power    := primary { "^" exponent }
//   exponent := ["-"] number | "(" ["-"] number [ "/" integer ] ")"
//   primary  := number | "pi" | variable | function "(" expr ")" | "(" expr ")"
//   variable := "x" integer            (1 <= index <= n)
//   function := "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" | "sign"
//   number   := digits [ "." digits ] [ ("e" | "E") ["+" | "-"] digits ]
//
// Precedence, high to low: "^", unary "-", "*" "/", "+" "-".
// Exponents are rational literals; decimals are converted exactly.

#include <cctype>
#include <string>
#include <string_view>

#include "sobolev/expr.hpp"
#include "sobolev/rational.hpp"

namespace sobolev {

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, int dimension) : text_(text), n_(dimension) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = Expr::make(Op::Add, lhs, term());
      else if (accept('-')) lhs = Expr::make(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = Expr::make(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = Expr::make(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::make(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    while (accept('^')) {
      Rational r = exponent();
      using boost::multiprecision::denominator;
      using boost::multiprecision::numerator;
      BigInt num = numerator(r);
      BigInt den = denominator(r);
      constexpr std::int64_t kMax = std::int64_t{1} << 40;
      if (num > kMax || num < -kMax || den > kMax) fail("exponent too large");
      base = Expr::make_pow(base, num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>());
    }
    return base;
  }

  std::string_view number_token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
      pos_ = start;
      fail("expected a number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      std::size_t digits_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == digits_start) pos_ = save;
    }
    return text_.substr(start, pos_ - start);
  }

  Rational exponent() {
    skip_ws();
    bool paren = accept('(');
    bool negative = accept('-');
    std::size_t at = pos_;
    Rational r;
    try {
      r = parse_rational(number_token());
    } catch (const ParseError&) {
      pos_ = at;
      fail("expected a rational exponent");
    }
    if (paren) {
      if (accept('/')) {
        std::size_t dat = pos_;
        Rational d = parse_rational(number_token());
        if (!is_integer(d) || d == 0) {
          pos_ = dat;
          fail("exponent denominator must be a nonzero integer");
        }
        r /= d;
      }
      expect(')');
    }
    return negative ? Rational(-r) : r;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::string token(number_token());
      return Expr::constant(std::stod(token));
    }
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view id = text_.substr(start, pos_ - start);
      if (id == "pi") return Expr::pi();
      if (id.size() >= 2 && id[0] == 'x' &&
          id.find_first_not_of("0123456789", 1) == std::string_view::npos) {
        long idx = std::stol(std::string(id.substr(1)));
        if (idx < 1 || idx > n_) {
          pos_ = start;
          fail("variable " + std::string(id) + " out of range for dimension " + std::to_string(n_));
        }
        return Expr::var(static_cast<int>(idx));
      }
      Op op;
      if (id == "sin") op = Op::Sin;
      else if (id == "cos") op = Op::Cos;
      else if (id == "exp") op = Op::Exp;
      else if (id == "log") op = Op::Log;
      else if (id == "sqrt") op = Op::Sqrt;
      else if (id == "abs") op = Op::Abs;
      else if (id == "sign") op = Op::Sign;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
      }
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::make(op, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` as an expression in the variables x1..xn.
inline Expr parse_expr(std::string_view text, int n) {
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  return detail::ExprParser(text, n).parse();
}

}  // namespace sobolev
