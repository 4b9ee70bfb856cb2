#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "gcdmoment/numeric.hpp"

namespace gcdmoment {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// "a+bi" / "a-bi" with 12 significant digits per component.
inline std::string format_complex(Complex z) {
  const double re = z.real();
  double im = z.imag();
  char sign = '+';
  if (im < 0) {
    sign = '-';
    im = -im;
  }
  if (im == 0) im = 0;  // normalize -0
  return format_double(re) + sign + format_double(im) + "i";
}

/// "num/den" in lowest terms, or just "num" for integers.
inline std::string format_rational(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) {
    s += "/";
    s += denominator(q).str();
  }
  return s;
}

/// A number on exactly one of two arithmetic paths: exact rational or
/// complex double. The paths never mix silently; combining scalars of
/// different kinds is a domain error.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}
  explicit Scalar(Complex z) : value_(z) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }

  const Rational& rational() const {
    if (!is_exact()) throw std::domain_error("Scalar: floating value has no exact representation");
    return std::get<Rational>(value_);
  }

  Complex complex_value() const {
    if (is_exact()) throw std::domain_error("Scalar: exact value is not on the floating path");
    return std::get<Complex>(value_);
  }

  std::string to_text() const {
    return is_exact() ? format_rational(rational()) : format_complex(complex_value());
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
  }
  Scalar operator-() const {
    if (is_exact()) return Scalar(Rational(-rational()));
    return Scalar(-complex_value());
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    require_same_kind(a, b);
    if (a.is_exact()) return a.rational() == b.rational();
    return a.complex_value() == b.complex_value();
  }

 private:
  static void require_same_kind(const Scalar& a, const Scalar& b) {
    if (a.is_exact() != b.is_exact()) {
      throw std::domain_error("Scalar: cannot mix exact and floating operands");
    }
  }

  template <typename Op>
  static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    require_same_kind(a, b);
    if (a.is_exact()) return Scalar(Rational(op(a.rational(), b.rational())));
    return Scalar(Complex(op(a.complex_value(), b.complex_value())));
  }

  std::variant<Rational, Complex> value_;
};

/// The moment exponent w. The exact-integer path promises exact rational
/// results; the complex path never promotes back, even for values like
/// 2+0i that happen to be integral.
class Exponent {
 public:
  static Exponent exact(BigInt w) { return Exponent(std::move(w)); }
  static Exponent exact(std::int64_t w) { return Exponent(BigInt(w)); }
  static Exponent floating(Complex w) { return Exponent(w); }
  static Exponent floating(double re, double im = 0.0) { return Exponent(Complex(re, im)); }

  bool is_exact() const { return std::holds_alternative<BigInt>(value_); }

  const BigInt& integer() const {
    if (!is_exact()) throw std::domain_error("Exponent: not on the exact-integer path");
    return std::get<BigInt>(value_);
  }

  /// Exact exponents beyond +-2^20 would demand p^w with megabits per
  /// digit string; they are rejected rather than silently attempted.
  std::int64_t integer_as_i64() const {
    const BigInt& w = integer();
    static const BigInt kBound = BigInt(1) << 20;
    if (w > kBound || w < -kBound) {
      throw std::domain_error("Exponent: integer exponent magnitude exceeds 2^20");
    }
    return w.convert_to<std::int64_t>();
  }

  Complex complex_value() const {
    if (is_exact()) throw std::domain_error("Exponent: not on the floating path");
    return std::get<Complex>(value_);
  }

  std::string to_text() const {
    return is_exact() ? integer().str() : format_complex(complex_value());
  }

 private:
  explicit Exponent(BigInt w) : value_(std::move(w)) {}
  explicit Exponent(Complex w) : value_(w) {}
  std::variant<BigInt, Complex> value_;
};

/// Conversion from exact big-integer coefficients into a scalar type.
/// Specialized per arithmetic path; test code may add its own.
template <typename S>
S from_bigint(const BigInt& b);

template <>
inline Rational from_bigint<Rational>(const BigInt& b) {
  return Rational(b);
}

template <>
inline Complex from_bigint<Complex>(const BigInt& b) {
  return Complex(to_double(b), 0.0);
}

/// base^exp by squaring; negative exponents invert first.
template <typename S>
S scalar_pow(const S& base, std::int64_t exp) {
  if (exp < 0) return from_bigint<S>(1) / scalar_pow(base, -exp);
  S acc = from_bigint<S>(1);
  S sq = base;
  std::int64_t e = exp;
  while (e > 0) {
    if (e & 1) acc = acc * sq;
    e >>= 1;
    if (e > 0) sq = sq * sq;
  }
  return acc;
}

inline Rational scalar_pow(const Rational& base, std::int64_t exp) {
  return rational_pow(base, exp);
}

}  // namespace gcdmoment
