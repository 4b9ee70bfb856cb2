#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gcdmoment/counting.hpp"
#include "gcdmoment/numth.hpp"
#include "gcdmoment/rng.hpp"
#include "gcdmoment/scalar.hpp"
#include "gcdmoment/series.hpp"

namespace gcdmoment {

enum class Method {
  closed_branch,
  closed_universal,
  brute,
  kurokawa_ochiai,
  kurokawa,
  monte_carlo,
};

constexpr std::string_view method_label(Method m) {
  switch (m) {
    case Method::closed_branch: return "closed-branch";
    case Method::closed_universal: return "closed-universal";
    case Method::brute: return "brute";
    case Method::kurokawa_ochiai: return "kurokawa-ochiai";
    case Method::kurokawa: return "kurokawa";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

struct MonteCarloStats {
  std::uint64_t samples = 0;
  double std_error = 0.0;
};

struct MomentResult {
  Scalar value;
  Method method = Method::closed_branch;
  std::optional<MonteCarloStats> mc;
};

/// The two displayed shapes of the closed-form product; algebraically equal
/// wherever both are defined.
enum class ClosedForm { primary, alternate };

/// On the complex path the branch shape divides by 1 - p^(w-1); when any
/// prime of n brings that within this tolerance of zero, evaluation falls
/// back to the universal form, which is finite for every w.
inline constexpr double kSingularTolerance = 1e-6;

namespace detail {

inline void validate_nr(std::uint64_t n, std::int64_t r, const char* who) {
  if (n < 1) throw std::domain_error(std::string(who) + ": n must be >= 1");
  if (r < 1) throw std::domain_error(std::string(who) + ": r must be >= 1");
}

// Per-prime factor shared by every route: u = 1 - 1/p and x = p^(w-1).

inline Rational unit_density(std::uint64_t p) { return make_rational(BigInt(p) - 1, BigInt(p)); }

inline Complex complex_prime_power(std::uint64_t p, Complex exponent) {
  return std::exp(exponent * std::log(static_cast<double>(p)));
}

/// Pre-cancellation per-prime value u^r F_{e,r}(x) + x^e F_{r,e}(u), where
/// F_{t,o} is the truncated binomial series with t terms of order o. This
/// shape involves no division and is well defined for every x, including
/// the branch form's singular points.
template <typename S>
S universal_bracket(std::int64_t e, std::int64_t r, const S& x, const S& u) {
  return scalar_pow(u, r) * truncated_series(PolySpec{e, r}, x) +
         scalar_pow(x, e) * truncated_series(PolySpec{r, e}, u);
}

/// w = 1 per-prime value: the series at u with one more term than the
/// universal shape's second summand.
template <typename S>
S mean_bracket(std::int64_t e, std::int64_t r, const S& u) {
  return truncated_series(PolySpec{r + 1, e}, u);
}

/// First displayed branch shape (w != 1):
///   A + x^e * sum_{l<r} H(e,l) (u^l - A v^l),  A = (u/v)^r,  v = 1 - x.
template <typename S>
S branch_bracket_primary(std::int64_t e, std::int64_t r, const S& x, const S& u) {
  const S one = from_bigint<S>(1);
  const S v = one - x;
  const S a = scalar_pow(u / v, r);
  BigInt coeff = 1;  // H(e, l)
  S u_pow = one;
  S v_pow = one;
  S sum = from_bigint<S>(0);
  for (std::int64_t l = 0; l < r; ++l) {
    if (l > 0) {
      coeff *= e + l - 1;
      coeff /= l;
      u_pow = u_pow * u;
      v_pow = v_pow * v;
    }
    sum = sum + from_bigint<S>(coeff) * (u_pow - a * v_pow);
  }
  return a + scalar_pow(x, e) * sum;
}

// ----- exact fast paths ----------------------------------------------------
// cpp_rational normalizes on every operation, which costs a big-integer gcd
// per loop step and makes long brackets quadratic in r. The exact paths
// below clear denominators up front, accumulate in plain integers and
// normalize once.

/// sum_{k < count} H(order, k) a^k b^(count-1-k). The running power
/// a^k b^(count-1-k) is updated by an exact multiply-divide step.
inline BigInt cleared_series_sum(std::int64_t count, std::int64_t order, const BigInt& a,
                                 const BigInt& b) {
  BigInt coeff = 1;
  BigInt power = int_pow(b, count - 1);
  BigInt sum = power;
  for (std::int64_t k = 1; k < count; ++k) {
    coeff *= order + k - 1;
    coeff /= k;
    power *= a;
    power /= b;  // exact: b^(count-1-k) still divides the power
    sum += coeff * power;
  }
  return sum;
}

/// w = 1 bracket as [sum_{l<=r} H(e,l) (p-1)^l p^(r-l)] / p^r.
inline Rational mean_bracket_exact(const BigInt& p, std::int64_t e, std::int64_t r) {
  return make_rational(cleared_series_sum(r + 1, e, p - 1, p), int_pow(p, r));
}

/// Universal bracket over the common denominator p^r b^e, where x = a/b:
///   [ (p-1)^r F1 b + a^e F2 p ] / (p^r b^e),
/// with F1 the cleared x-series (e terms) and F2 the cleared u-series
/// (r terms).
inline Rational universal_bracket_exact(const BigInt& p, std::int64_t e, std::int64_t r,
                                        const Rational& x) {
  const BigInt& a = numerator(x);
  const BigInt& b = denominator(x);
  const BigInt f1 = cleared_series_sum(e, r, a, b);
  const BigInt f2 = cleared_series_sum(r, e, p - 1, p);
  const BigInt num = int_pow(p - 1, r) * f1 * b + int_pow(a, e) * f2 * p;
  return make_rational(num, int_pow(p, r) * int_pow(b, e));
}

/// First branch shape over the common denominator p^r m^r b^e, where
/// x = a/b and m = b - a (nonzero for w != 1):
///   [ (p-1)^r b^(r+e) + a^e (m^r S1 - (p-1)^r S2) ] / (p^r m^r b^e),
/// with S1 = sum H(e,l) (p-1)^l p^(r-l) and S2 = sum H(e,l) b^(r-l) m^l.
inline Rational branch_bracket_primary_exact(const BigInt& p, std::int64_t e, std::int64_t r,
                                             const Rational& x) {
  const BigInt& a = numerator(x);
  const BigInt& b = denominator(x);
  const BigInt c = p - 1;
  const BigInt m = b - a;
  const BigInt s1 = p * cleared_series_sum(r, e, c, p);
  const BigInt s2 = b * cleared_series_sum(r, e, m, b);
  const BigInt cr = int_pow(c, r);
  const BigInt num = cr * int_pow(b, r + e) + int_pow(a, e) * (int_pow(m, r) * s1 - cr * s2);
  return make_rational(num, int_pow(p, r) * int_pow(m, r) * int_pow(b, e));
}

/// Second displayed branch shape (w != 1):
///   A + x^e u^r * sum_{l<r} H(e,l) (u^(l-r) - v^(l-r)).
template <typename S>
S branch_bracket_alternate(std::int64_t e, std::int64_t r, const S& x, const S& u) {
  const S one = from_bigint<S>(1);
  const S v = one - x;
  const S a = scalar_pow(u / v, r);
  std::vector<BigInt> coeffs(static_cast<std::size_t>(r));
  coeffs[0] = 1;
  for (std::int64_t l = 1; l < r; ++l) {
    coeffs[static_cast<std::size_t>(l)] = coeffs[static_cast<std::size_t>(l - 1)] * (e + l - 1) / l;
  }
  const S iu = one / u;
  const S iv = one / v;
  S pu = iu;  // u^(l-r) at l = r-1
  S pv = iv;
  S sum = from_bigint<S>(0);
  for (std::int64_t l = r - 1; l >= 0; --l) {
    sum = sum + from_bigint<S>(coeffs[static_cast<std::size_t>(l)]) * (pu - pv);
    if (l > 0) {
      pu = pu * iu;
      pv = pv * iv;
    }
  }
  return a + scalar_pow(x, e) * scalar_pow(u, r) * sum;
}

}  // namespace detail

/// Per-prime evaluation of the proof's pre-cancellation expression,
/// multiplied over the primes of n. Finite for every exponent, including
/// complex w where some p^(w-1) = 1; exact on the integer path.
inline MomentResult moment_universal(std::uint64_t n, std::int64_t r, const Exponent& w) {
  detail::validate_nr(n, r, "moment_universal");
  const Factorization fact = factorize(n);
  if (w.is_exact()) {
    const std::int64_t we = w.integer_as_i64();
    Rational acc(1);
    for (const auto& [p, e] : fact.entries()) {
      const Rational x = rational_pow(Rational(p), we - 1);
      acc *= detail::universal_bracket_exact(BigInt(p), static_cast<std::int64_t>(e), r, x);
    }
    return {Scalar(acc), Method::closed_universal, {}};
  }
  const Complex wc = w.complex_value();
  Complex acc(1.0);
  for (const auto& [p, e] : fact.entries()) {
    const Complex x = detail::complex_prime_power(p, wc - 1.0);
    const Complex u(1.0 - 1.0 / static_cast<double>(p));
    acc *= detail::universal_bracket(static_cast<std::int64_t>(e), r, x, u);
  }
  return {Scalar(acc), Method::closed_universal, {}};
}

/// Closed-form moment E[gcd(n, k_1...k_r)^w]: the w = 1 series product or
/// the w != 1 branch shape, per prime of n. Cost is linear in r. Integer w
/// is exact end to end; on the complex path, exponents within
/// kSingularTolerance of a branch singularity delegate to the universal
/// form.
inline MomentResult moment_closed(std::uint64_t n, std::int64_t r, const Exponent& w,
                                  ClosedForm form = ClosedForm::primary) {
  detail::validate_nr(n, r, "moment_closed");
  const Factorization fact = factorize(n);
  if (w.is_exact()) {
    const std::int64_t we = w.integer_as_i64();
    Rational acc(1);
    for (const auto& [p, e] : fact.entries()) {
      if (we == 1) {
        acc *= detail::mean_bracket_exact(BigInt(p), static_cast<std::int64_t>(e), r);
      } else {
        const Rational x = rational_pow(Rational(p), we - 1);  // never 1 for we != 1
        acc *= form == ClosedForm::primary
                   ? detail::branch_bracket_primary_exact(BigInt(p), static_cast<std::int64_t>(e), r, x)
                   : detail::branch_bracket_alternate(static_cast<std::int64_t>(e), r, x,
                                                      detail::unit_density(p));
      }
    }
    return {Scalar(acc), Method::closed_branch, {}};
  }

  const Complex wc = w.complex_value();
  std::vector<Complex> xs;
  for (const auto& [p, e] : fact.entries()) {
    const Complex x = detail::complex_prime_power(p, wc - 1.0);
    if (std::abs(Complex(1.0) - x) < kSingularTolerance) {
      return moment_universal(n, r, w);
    }
    xs.push_back(x);
  }
  Complex acc(1.0);
  for (std::size_t i = 0; i < fact.entries().size(); ++i) {
    const auto& [p, e] = fact.entries()[i];
    const Complex u(1.0 - 1.0 / static_cast<double>(p));
    acc *= form == ClosedForm::primary
               ? detail::branch_bracket_primary(static_cast<std::int64_t>(e), r, xs[i], u)
               : detail::branch_bracket_alternate(static_cast<std::int64_t>(e), r, xs[i], u);
  }
  return {Scalar(acc), Method::closed_branch, {}};
}

/// The exact mean E[gcd(n, k_1...k_r)] as the product over p | n of
/// sum_{l<=r} H(e_p, l) (1 - 1/p)^l.
inline MomentResult moment_kurokawa_ochiai(std::uint64_t n, std::int64_t r) {
  detail::validate_nr(n, r, "moment_kurokawa_ochiai");
  const Factorization fact = factorize(n);
  Rational acc(1);
  for (const auto& [p, e] : fact.entries()) {
    acc *= detail::mean_bracket_exact(BigInt(p), static_cast<std::int64_t>(e), r);
  }
  return {Scalar(acc), Method::kurokawa_ochiai, {}};
}

/// The single-factor mean (1/n) sum_k gcd(n, k) as the product over p | n
/// of 1 + (1 - 1/p) e_p.
inline MomentResult moment_kurokawa(std::uint64_t n) {
  if (n < 1) throw std::domain_error("moment_kurokawa: n must be >= 1");
  const Factorization fact = factorize(n);
  Rational acc(1);
  for (const auto& [p, e] : fact.entries()) {
    acc *= Rational(1) + detail::unit_density(p) * e;
  }
  return {Scalar(acc), Method::kurokawa, {}};
}

/// Exhaustive-oracle moment: averages gcd(n, k_1...k_r)^w over every tuple.
/// Cost is n^r; refuses to start past `guard`. Exact for integer w.
inline MomentResult moment_brute(std::uint64_t n, std::int64_t r, const Exponent& w,
                                 std::uint64_t guard = kDefaultBruteGuard) {
  detail::validate_nr(n, r, "moment_brute");
  const CountHistogram hist = brute_histogram(n, r, guard);
  const BigInt norm = int_pow(BigInt(n), r);
  if (w.is_exact()) {
    const std::int64_t we = w.integer_as_i64();
    Rational acc(0);
    for (const auto& [f, count] : hist.counts) {
      acc += Rational(count) * rational_pow(Rational(f), we);
    }
    acc /= Rational(norm);
    return {Scalar(acc), Method::brute, {}};
  }
  const Complex wc = w.complex_value();
  Complex acc(0.0);
  for (const auto& [f, count] : hist.counts) {
    acc += to_double(count) * detail::complex_prime_power(f, wc);
  }
  acc /= to_double(norm);
  return {Scalar(acc), Method::brute, {}};
}

/// V[X] = E[X^2] - E[X]^2, exact and nonnegative.
inline Rational variance(std::uint64_t n, std::int64_t r) {
  const Rational m1 = moment_closed(n, r, Exponent::exact(1)).value.rational();
  const Rational m2 = moment_closed(n, r, Exponent::exact(2)).value.rational();
  return Rational(m2 - m1 * m1);
}

/// Seeded Monte Carlo estimate of E[gcd(n, k_1...k_r)^w] over uniform
/// tuples, with the sample standard error. Always on the floating path;
/// bit-identical for a fixed seed. Sampling: SplitMix64, k = 1 + next() % n,
/// coordinates drawn in tuple order, single accumulation pass.
inline MomentResult monte_carlo(std::uint64_t n, std::int64_t r, const Exponent& w,
                                std::uint64_t samples, std::uint64_t seed) {
  detail::validate_nr(n, r, "monte_carlo");
  if (samples < 1) throw std::domain_error("monte_carlo: samples must be >= 1");
  const Factorization fact = factorize(n);
  const std::size_t np = fact.size();

  // Divisor values f^w indexed by the mixed-radix valuation vector.
  std::size_t combos = 1;
  std::vector<std::size_t> strides(np);
  for (std::size_t i = 0; i < np; ++i) {
    strides[i] = combos;
    combos *= static_cast<std::size_t>(fact.entries()[i].exponent) + 1;
  }
  std::vector<Complex> powered(combos);
  for (std::size_t idx = 0; idx < combos; ++idx) {
    std::uint64_t f = 1;
    std::size_t rem = idx;
    for (std::size_t i = 0; i < np; ++i) {
      const std::size_t radix = static_cast<std::size_t>(fact.entries()[i].exponent) + 1;
      const int d = static_cast<int>(rem % radix);
      rem /= radix;
      for (int j = 0; j < d; ++j) f *= fact.entries()[i].prime;
    }
    powered[idx] = w.is_exact()
                       ? Complex(to_double(rational_pow(Rational(f), w.integer_as_i64())), 0.0)
                       : detail::complex_prime_power(f, w.complex_value());
  }

  SplitMix64 rng(seed);
  std::vector<int> vals(np);
  Complex sum(0.0);
  double sum_sq = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::fill(vals.begin(), vals.end(), 0);
    for (std::int64_t j = 0; j < r; ++j) {
      std::uint64_t k = rng.next_in(n);
      for (std::size_t i = 0; i < np && k > 1; ++i) {
        const std::uint64_t p = fact.entries()[i].prime;
        while (k % p == 0 && vals[i] < fact.entries()[i].exponent) {
          k /= p;
          ++vals[i];
        }
        while (k % p == 0) k /= p;  // valuation already capped
      }
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < np; ++i) idx += static_cast<std::size_t>(vals[i]) * strides[i];
    const Complex v = powered[idx];
    sum += v;
    sum_sq += std::norm(v);
  }

  const double count = static_cast<double>(samples);
  const Complex mean = sum / count;
  double std_error = 0.0;
  if (samples > 1) {
    const double centered = std::max(0.0, sum_sq - count * std::norm(mean));
    std_error = std::sqrt(centered / (count - 1.0) / count);
  }
  return {Scalar(mean), Method::monte_carlo, MonteCarloStats{samples, std_error}};
}

}  // namespace gcdmoment
