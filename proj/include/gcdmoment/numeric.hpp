#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace gcdmoment {

// Expression templates are disabled so that values always materialize as
// plain numbers; the generic evaluators deduce their scalar type from
// arithmetic subexpressions.
using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using Complex = std::complex<double>;

/// Default cap on exhaustive tuple enumerations (number of tuples).
/// Overridable per call and, at the CLI, via GCDMOMENT_GUARD.
inline constexpr std::uint64_t kDefaultBruteGuard = 100'000'000;

/// Thrown when an exhaustive enumeration would exceed the configured guard.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical rational from a possibly negative or unreduced num/den pair.
inline Rational make_rational(BigInt num, BigInt den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

inline BigInt int_pow(const BigInt& base, std::int64_t exp) {
  if (exp < 0) throw std::domain_error("int_pow: negative exponent");
  return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

/// Exact q^exp for any integer exp; q = 0 with exp < 0 is rejected.
inline Rational rational_pow(const Rational& q, std::int64_t exp) {
  if (exp == 0) return Rational(1);
  const BigInt& num = numerator(q);
  const BigInt& den = denominator(q);
  if (exp > 0) return make_rational(int_pow(num, exp), int_pow(den, exp));
  if (num == 0) throw std::domain_error("rational_pow: zero base, negative exponent");
  return make_rational(int_pow(den, -exp), int_pow(num, -exp));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& b) { return b.convert_to<double>(); }

/// True iff base^exp > limit, without materializing base^exp when it is
/// astronomically large (a cheap log2 bound short-circuits first).
inline bool power_exceeds(std::uint64_t base, std::int64_t exp, std::uint64_t limit) {
  if (exp < 0) throw std::domain_error("power_exceeds: negative exponent");
  if (base <= 1 || exp == 0) return limit < 1;
  const double bits = static_cast<double>(exp) * std::log2(static_cast<double>(base));
  if (bits > 66.0) return true;  // limit is a u64, so 2^66 is safely beyond it
  return int_pow(BigInt(base), exp) > limit;
}

}  // namespace gcdmoment
