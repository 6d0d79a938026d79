#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "sobolev/errors.hpp"

namespace sobolev {

/// Exact, unbounded rational number.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational floor(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return Rational(q);
}

inline Rational fractional_part(const Rational& r) { return r - floor(r); }

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) {
  return r.convert_to<double>();
}

/// Parses "a", "a/b", "-a/b" or a decimal such as "-1.25" / "2.5e-1".
/// Decimals convert exactly (1.25 -> 5/4); no floating point is involved.
inline Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto digits = [&](BigInt& into) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      into = into * 10 + (text[i] - '0');
      ++i;
    }
    return i - start;
  };
  skip_ws();
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt num = 0;
  BigInt den = 1;
  std::size_t int_digits = digits(num);
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      num = num * 10 + (text[i] - '0');
      den *= 10;
      ++i;
    }
    frac_digits = i - start;
  }
  if (int_digits == 0 && frac_digits == 0) throw ParseError("expected a number", i);
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool neg_exp = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      neg_exp = text[i] == '-';
      ++i;
    }
    BigInt e = 0;
    if (digits(e) == 0) throw ParseError("expected exponent digits", i);
    BigInt scale = boost::multiprecision::pow(BigInt(10), e.convert_to<unsigned>());
    if (neg_exp) den *= scale; else num *= scale;
  } else if (i < text.size() && text[i] == '/' && frac_digits == 0) {
    ++i;
    skip_ws();
    BigInt d = 0;
    if (digits(d) == 0) throw ParseError("expected denominator", i);
    if (d == 0) throw ParseError("zero denominator", i);
    den = d;
  }
  skip_ws();
  if (i != text.size()) throw ParseError("unexpected character '" + std::string(1, text[i]) + "'", i);
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

}  // namespace sobolev
