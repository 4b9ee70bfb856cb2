#pragma once

#include <cstdint>
#include <stdexcept>

#include "gcdmoment/numth.hpp"
#include "gcdmoment/scalar.hpp"

namespace gcdmoment {

/// Shape of a truncated binomial series: the first `terms` terms of the
/// expansion of (1-x)^(-order), i.e. sum_{k < terms} H(order, k) x^k where
/// H(order, k) is the multiset coefficient. Both indices are >= 1.
struct PolySpec {
  std::int64_t terms;
  std::int64_t order;
};

namespace detail {

inline void validate(const PolySpec& spec) {
  if (spec.terms < 1 || spec.order < 1) {
    throw std::domain_error("PolySpec: terms and order must be >= 1");
  }
}

}  // namespace detail

/// Evaluates the truncated series at x. Coefficients are generated
/// incrementally by the ratio of consecutive multiset coefficients (an
/// exact integer step), so exactly `terms` coefficients are read and the
/// cost is linear in `terms`. Exact for rational x.
template <typename S>
S truncated_series(const PolySpec& spec, const S& x) {
  detail::validate(spec);
  BigInt coeff = 1;  // H(order, 0)
  S x_pow = from_bigint<S>(1);
  S acc = from_bigint<S>(1);  // constant term
  for (std::int64_t k = 1; k < spec.terms; ++k) {
    coeff *= spec.order + k - 1;
    coeff /= k;  // exact: yields H(order, k)
    x_pow = x_pow * x;
    acc = acc + from_bigint<S>(coeff) * x_pow;
  }
  return acc;
}

/// Value of the truncated series at x = 1, as an exact count:
/// binomial(terms + order - 1, order).
inline BigInt truncated_series_at_one(const PolySpec& spec) {
  detail::validate(spec);
  return binomial(spec.terms + spec.order - 1, spec.order);
}

/// Residual of the reflection identity
///   (1-x)^order * F(x) + x^terms * F~(1-x) - 1,
/// where F is the truncated series of `spec` and F~ the one with terms and
/// order swapped. Identically zero as a polynomial in x, so the exact path
/// returns exactly 0; the floating path reports rounding magnitude.
template <typename S>
S reflection_residual(const PolySpec& spec, const S& x) {
  detail::validate(spec);
  const S one = from_bigint<S>(1);
  const PolySpec swapped{spec.order, spec.terms};
  return scalar_pow(one - x, spec.order) * truncated_series(spec, x) +
         scalar_pow(x, spec.terms) * truncated_series(swapped, one - x) - one;
}

/// Residual of the one-more-term identity: moving the top coefficient of
/// the swapped series across the at-one value extends its truncation by
/// one term. Returns LHS - RHS of
///   (1-x)^order F(y) + y^terms F~(1-x)
///     = (1-x)^order (F(y) - y^terms F(1)) + y^terms F~+(1-x),
/// where F~+ has one more term than F~. Identically zero in x and y.
template <typename S>
S extension_residual(const PolySpec& spec, const S& x, const S& y) {
  detail::validate(spec);
  const S one = from_bigint<S>(1);
  const PolySpec swapped{spec.order, spec.terms};
  const PolySpec extended{spec.order + 1, spec.terms};
  const S f_y = truncated_series(spec, y);
  const S y_pow = scalar_pow(y, spec.terms);
  const S u_pow = scalar_pow(one - x, spec.order);
  const S lhs = u_pow * f_y + y_pow * truncated_series(swapped, one - x);
  const S rhs = u_pow * (f_y - y_pow * from_bigint<S>(truncated_series_at_one(spec))) +
                y_pow * truncated_series(extended, one - x);
  return lhs - rhs;
}

// Tagged-scalar front ends; each dispatches to the matching arithmetic path.

inline Scalar truncated_series(const PolySpec& spec, const Scalar& x) {
  if (x.is_exact()) return Scalar(truncated_series(spec, x.rational()));
  return Scalar(truncated_series(spec, x.complex_value()));
}

inline Scalar reflection_residual(const PolySpec& spec, const Scalar& x) {
  if (x.is_exact()) return Scalar(reflection_residual(spec, x.rational()));
  return Scalar(reflection_residual(spec, x.complex_value()));
}

inline Scalar extension_residual(const PolySpec& spec, const Scalar& x, const Scalar& y) {
  if (x.is_exact() != y.is_exact()) {
    throw std::domain_error("extension_residual: x and y must be on the same arithmetic path");
  }
  if (x.is_exact()) return Scalar(extension_residual(spec, x.rational(), y.rational()));
  return Scalar(extension_residual(spec, x.complex_value(), y.complex_value()));
}

}  // namespace gcdmoment
