#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace harnesslab {

/// Exact rational scalar backed by arbitrary-precision integers.
/// All identity verification runs on this type; binary64 is the
/// alternate backend for quadrature and other numeric work.
using Rational = mpq_class;

template <class T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q", integers, and finite decimals ("-3", "0.25", "1.5e-3").
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpz_class num(text.substr(0, slash), 10);
    mpz_class den(text.substr(slash + 1), 10);
    if (den == 0) throw std::invalid_argument("zero denominator in \"" + text + "\"");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  std::string digits;
  long tenpow = 0;
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (dot) throw std::invalid_argument("bad numeral \"" + text + "\"");
      dot = true;
    } else if (c == 'e' || c == 'E') {
      tenpow += std::stol(text.substr(i + 1));
      i = text.size() - 1;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (dot) --tenpow;
      any = true;
    } else {
      throw std::invalid_argument("bad numeral \"" + text + "\"");
    }
  }
  if (!any) throw std::invalid_argument("bad numeral \"" + text + "\"");
  mpz_class mant(digits.empty() ? "0" : digits, 10);
  if (neg) mant = -mant;
  mpz_class scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(tenpow < 0 ? -tenpow : tenpow));
  Rational r = tenpow < 0 ? Rational(mant, scale) : Rational(mant * scale);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& v) { return v.get_str(); }

inline double to_double(const Rational& v) { return v.get_d(); }
inline double to_double(double v) { return v; }

template <class T>
T tabs(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <class T>
int tsgn(const T& v) {
  if (v < T(0)) return -1;
  if (T(0) < v) return 1;
  return 0;
}

/// base^e for integer e >= 0, with 0^0 = 1.
template <class T>
T tpow(const T& base, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

/// Exact square root when it exists; nullopt for negatives and irrationals.
inline std::optional<Rational> exact_sqrt(const Rational& v) {
  if (v < 0) return std::nullopt;
  const mpz_class num = v.get_num(), den = v.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

inline std::optional<double> exact_sqrt(double v) {
  if (v < 0) return std::nullopt;
  return std::sqrt(v);
}

/// Sign of x - sqrt(c)*y without forming the square root; requires c >= 0.
/// Works in both backends, so boundary constraints like q <= 1+2*sqrt(s*t)
/// are decided exactly in rational mode.
template <class T>
int cmp_minus_sqrt(const T& x, const T& c, const T& y) {
  const T zero(0);
  if (c < zero) throw std::invalid_argument("cmp_minus_sqrt: negative radicand");
  if (c == zero || y == zero) return tsgn(x);
  if (y > zero) {
    if (x <= zero) return -1;
    return tsgn(T(x * x - c * y * y));
  }
  if (x >= zero) return 1;
  return tsgn(T(c * y * y - x * x));
}

/// Equality used by family classification: exact in rational mode,
/// absolute tolerance 1e-12 in float mode.
template <class T>
bool classify_zero(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v == T(0);
  } else {
    return std::abs(v) <= 1e-12;
  }
}

/// Comparison used by cross-checks: exact in rational mode, relative
/// tolerance in float mode.
template <class T>
bool scalar_close(const T& a, const T& b, double rel = 1e-10) {
  if constexpr (is_exact_v<T>) {
    (void)rel;
    return a == b;
  } else {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= rel * scale;
  }
}

}  // namespace harnesslab
