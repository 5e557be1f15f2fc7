#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "arithvol/errors.hpp"

namespace arithvol {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 256-bit binary mantissa.  Used whenever a double evaluation lands too close
// to a sign change to be trusted.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

inline BigFloat to_bigfloat(const Rational& r) { return static_cast<BigFloat>(r); }

// log of a positive rational at 256 bits; safe for values far outside the
// double exponent range (numerator and denominator are taken apart first).
inline BigFloat log_rational(const Rational& r) {
  if (r <= 0) throw DomainError("log_rational: nonpositive argument");
  const BigFloat num(boost::multiprecision::numerator(r));
  const BigFloat den(boost::multiprecision::denominator(r));
  return log(num) - log(den);
}

inline double log_rational_d(const Rational& r) {
  return static_cast<double>(log_rational(r));
}

// Exact parser for command-line and config rationals.  Accepts "p/q" and
// decimal strings; a decimal with k fractional digits means p/10^k exactly.
// Binary floating point is never involved.
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational literal");

  const auto parse_int = [](const std::string& t) -> BigInt {
    std::size_t i = 0;
    bool neg = false;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) neg = (t[i++] == '-');
    if (i >= t.size()) throw ParseError("bad integer literal");
    BigInt v = 0;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw ParseError("bad integer literal: " + t);
      v = v * 10 + (t[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    if (s.find('/', slash + 1) != std::string::npos)
      throw ParseError("bad rational literal: " + text);
    const BigInt p = parse_int(s.substr(0, slash));
    const BigInt q = parse_int(s.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator: " + text);
    return Rational(p, q);
  }

  if (auto dot = s.find('.'); dot != std::string::npos) {
    if (s.find('.', dot + 1) != std::string::npos)
      throw ParseError("bad decimal literal: " + text);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac = s.size() - dot - 1;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac; ++i) scale *= 10;
    return Rational(parse_int(digits), scale);
  }

  return Rational(parse_int(s), 1);
}

inline std::string rational_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline BigInt factorial(long n) {
  BigInt f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt b = 1;
  for (long i = 1; i <= k; ++i) {
    b *= (n - k + i);
    b /= i;
  }
  return b;
}

// l! / prod(k_i!) for a composition k of l.
inline BigInt multinomial(long l, const std::vector<long>& k) {
  BigInt m = factorial(l);
  for (long ki : k) m /= factorial(ki);
  return m;
}

inline BigInt ipow(const BigInt& base, long e) {
  BigInt r = 1, b = base;
  for (long x = e; x > 0; x >>= 1) {
    if (x & 1) r *= b;
    if (x > 1) b *= b;
  }
  return r;
}

inline Rational rpow(const Rational& base, long e) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (e >= 0)
    return Rational(ipow(numerator(base), e), ipow(denominator(base), e));
  return Rational(ipow(denominator(base), -e), ipow(numerator(base), -e));
}

}  // namespace arithvol
