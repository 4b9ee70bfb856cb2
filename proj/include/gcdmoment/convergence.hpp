#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gcdmoment/moments.hpp"

namespace gcdmoment {

/// The r -> infinity target n^w: exact rational for integer w, principal
/// complex power otherwise.
inline Scalar limit_value(std::uint64_t n, const Exponent& w) {
  if (n < 1) throw std::domain_error("limit_value: n must be >= 1");
  if (w.is_exact()) return Scalar(rational_pow(Rational(n), w.integer_as_i64()));
  return Scalar(detail::complex_prime_power(n, w.complex_value()));
}

/// Per-prime distances relevant to the r -> infinity behaviour. The two
/// magnitudes answer different sufficient conditions, which do not
/// coincide; both are reported so callers can see the gap between them.
struct PrimeConvergenceDetail {
  std::uint64_t p = 0;
  double abs_pw_minus_one = 0.0;    // |p^w - 1|
  double abs_pwm1_minus_one = 0.0;  // |p^(w-1) - 1|
};

struct ConvergenceCondition {
  /// w = 1, or |p^w - 1| > 1 for every p | n (the stated sufficient
  /// condition for the moments to converge to n^w).
  bool guaranteed = false;
  /// w = 1, or |p^(w-1) - 1| > 1 for every p | n (the stricter distance
  /// that controls the tail bound directly).
  bool conservative = false;
  std::vector<PrimeConvergenceDetail> per_prime;
};

inline ConvergenceCondition convergence_condition(std::uint64_t n, const Exponent& w) {
  if (n < 1) throw std::domain_error("convergence_condition: n must be >= 1");
  const Factorization fact = factorize(n);
  ConvergenceCondition cond;
  const bool is_unit_exponent = w.is_exact() && w.integer() == 1;
  bool all_pw = true;
  bool all_pwm1 = true;
  for (const auto& [p, e] : fact.entries()) {
    PrimeConvergenceDetail detail;
    detail.p = p;
    if (w.is_exact()) {
      const std::int64_t we = w.integer_as_i64();
      const Rational pw = rational_pow(Rational(p), we);
      const Rational pwm1 = rational_pow(Rational(p), we - 1);
      const Rational d1 = Rational(abs(Rational(pw - 1)));
      const Rational d2 = Rational(abs(Rational(pwm1 - 1)));
      detail.abs_pw_minus_one = to_double(d1);
      detail.abs_pwm1_minus_one = to_double(d2);
      all_pw = all_pw && d1 > 1;
      all_pwm1 = all_pwm1 && d2 > 1;
    } else {
      const Complex wc = w.complex_value();
      detail.abs_pw_minus_one = std::abs(detail::complex_prime_power(p, wc) - Complex(1.0));
      detail.abs_pwm1_minus_one = std::abs(detail::complex_prime_power(p, wc - 1.0) - Complex(1.0));
      all_pw = all_pw && detail.abs_pw_minus_one > 1.0;
      all_pwm1 = all_pwm1 && detail.abs_pwm1_minus_one > 1.0;
    }
    cond.per_prime.push_back(detail);
  }
  cond.guaranteed = is_unit_exponent || all_pw;
  cond.conservative = is_unit_exponent || all_pwm1;
  return cond;
}

struct ConvergenceRow {
  std::int64_t r = 1;
  MomentResult moment;
  double gap = 0.0;  // |moment - n^w|, in the value's own arithmetic
};

struct ConvergenceReport {
  std::uint64_t n = 1;
  Exponent w = Exponent::exact(1);
  Scalar limit;
  bool guaranteed = false;
  bool conservative = false;
  std::vector<ConvergenceRow> rows;
};

/// Evaluates the closed-form moment along increasing r and reports the gap
/// to n^w. Near-singular complex exponents are handled by moment_closed's
/// own fallback to the universal form.
inline ConvergenceReport convergence_table(std::uint64_t n, const Exponent& w,
                                           std::vector<std::int64_t> r_values) {
  if (r_values.empty()) throw std::domain_error("convergence_table: empty r list");
  for (const std::int64_t r : r_values) {
    if (r < 1) throw std::domain_error("convergence_table: every r must be >= 1");
  }
  std::sort(r_values.begin(), r_values.end());
  r_values.erase(std::unique(r_values.begin(), r_values.end()), r_values.end());

  ConvergenceReport report;
  report.n = n;
  report.w = w;
  report.limit = limit_value(n, w);
  const ConvergenceCondition cond = convergence_condition(n, w);
  report.guaranteed = cond.guaranteed;
  report.conservative = cond.conservative;
  for (const std::int64_t r : r_values) {
    ConvergenceRow row;
    row.r = r;
    row.moment = moment_closed(n, r, w);
    if (row.moment.value.is_exact()) {
      row.gap = to_double(Rational(abs(Rational(report.limit.rational() - row.moment.value.rational()))));
    } else {
      row.gap = std::abs(report.limit.complex_value() - row.moment.value.complex_value());
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace gcdmoment
