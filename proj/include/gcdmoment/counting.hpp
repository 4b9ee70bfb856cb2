#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gcdmoment/numth.hpp"
#include "gcdmoment/series.hpp"

namespace gcdmoment {

/// Exhaustive tally: for each divisor f of n, the number of tuples
/// (k_1,...,k_r) in {1..n}^r with gcd(n, k_1...k_r) = f. Values sum to n^r;
/// divisors that are never hit carry no entry.
struct CountHistogram {
  std::uint64_t n = 1;
  std::int64_t r = 1;
  std::map<std::uint64_t, BigInt> counts;

  BigInt total() const {
    BigInt sum = 0;
    for (const auto& [f, c] : counts) sum += c;
    return sum;
  }
};

/// Exact law of the gcd value over uniform tuples: mass[f] = counts[f] / n^r.
struct Pmf {
  std::uint64_t n = 1;
  std::int64_t r = 1;
  std::map<std::uint64_t, Rational> mass;
};

/// Closed-form tuple count for a prime-power modulus: the number of
/// r-tuples over {1..p^e} whose product has gcd exactly p^d with p^e.
/// For d < e this is p^(r(e-1)-d) * (p-1)^r * H(r, d), an all-integer
/// product (r(e-1) >= d holds because d <= e-1 <= r(e-1)); for d = e it is
/// p^((e-1)(r-1)) * sum_{l<r} H(e, l) (p-1)^l p^(r-1-l).
inline BigInt count_prime_power(std::uint64_t p, std::int64_t e, std::int64_t r, std::int64_t d) {
  if (!is_prime(p)) throw std::domain_error("count_prime_power: p must be prime");
  if (e < 1 || r < 1) throw std::domain_error("count_prime_power: e and r must be >= 1");
  if (d < 0 || d > e) throw std::domain_error("count_prime_power: d must lie in [0, e]");
  const BigInt pb(p);
  if (d < e) {
    return int_pow(pb, r * (e - 1) - d) * int_pow(pb - 1, r) * multiset_coeff(r, d);
  }
  BigInt sum = 0;
  BigInt coeff = 1;  // H(e, l)
  BigInt pm1_pow = 1;
  BigInt p_pow = int_pow(pb, r - 1);
  for (std::int64_t l = 0; l < r; ++l) {
    sum += coeff * pm1_pow * p_pow;
    coeff *= e + l;
    coeff /= l + 1;
    pm1_pow *= pb - 1;
    p_pow /= pb;  // exact while l < r-1
  }
  return int_pow(pb, (e - 1) * (r - 1)) * sum;
}

namespace detail {

/// Depth-first walk over {1..n}^r tracking, per prime of n, the capped
/// valuation sum min(e_p, sum_i ord_p(k_i)). The tuple product itself is
/// never formed.
struct TupleWalker {
  std::uint64_t n;
  std::int64_t r;
  std::vector<std::uint64_t> primes;
  std::vector<int> caps;
  std::vector<std::size_t> strides;
  std::vector<int> vals;
  std::vector<std::uint64_t> counters;

  void run() { descend(0, 0); }

  void descend(std::int64_t depth, std::size_t index) {
    if (depth == r) {
      ++counters[index];
      return;
    }
    const std::size_t np = primes.size();
    for (std::uint64_t k = 1; k <= n; ++k) {
      std::array<int, 16> applied{};
      std::size_t next = index;
      std::uint64_t rest = k;
      for (std::size_t i = 0; i < np && rest > 1; ++i) {
        const std::uint64_t p = primes[i];
        if (rest % p == 0) {
          int v = 0;
          do {
            rest /= p;
            ++v;
          } while (rest % p == 0);
          const int add = std::min(caps[i] - vals[i], v);
          if (add > 0) {
            vals[i] += add;
            next += static_cast<std::size_t>(add) * strides[i];
            applied[i] = add;
          }
        }
      }
      descend(depth + 1, next);
      for (std::size_t i = 0; i < np; ++i) vals[i] -= applied[i];
    }
  }
};

}  // namespace detail

/// Exhaustively enumerates {1..n}^r and histograms gcd(n, k_1...k_r).
/// Cost is n^r tuples; refuses to start past `guard`.
inline CountHistogram brute_histogram(std::uint64_t n, std::int64_t r,
                                      std::uint64_t guard = kDefaultBruteGuard) {
  if (n < 1 || r < 1) throw std::domain_error("brute_histogram: n and r must be >= 1");
  if (power_exceeds(n, r, guard)) {
    throw ResourceLimitError("brute-force enumeration of n^r tuples (n = " + std::to_string(n) +
                             ", r = " + std::to_string(r) + ") exceeds the guard of " +
                             std::to_string(guard) + " tuples");
  }
  const Factorization fact = factorize(n);
  detail::TupleWalker walker;
  walker.n = n;
  walker.r = r;
  std::size_t combos = 1;
  for (const auto& [p, e] : fact.entries()) {
    walker.primes.push_back(p);
    walker.caps.push_back(e);
    walker.strides.push_back(combos);
    combos *= static_cast<std::size_t>(e) + 1;
  }
  walker.vals.assign(walker.primes.size(), 0);
  walker.counters.assign(combos, 0);
  walker.run();

  CountHistogram hist;
  hist.n = n;
  hist.r = r;
  for (std::size_t idx = 0; idx < combos; ++idx) {
    if (walker.counters[idx] == 0) continue;
    std::uint64_t f = 1;
    std::size_t rem = idx;
    for (std::size_t i = 0; i < walker.primes.size(); ++i) {
      const std::size_t radix = static_cast<std::size_t>(walker.caps[i]) + 1;
      const int d = static_cast<int>(rem % radix);
      rem /= radix;
      for (int j = 0; j < d; ++j) f *= walker.primes[i];
    }
    hist.counts[f] = walker.counters[idx];
  }
  return hist;
}

/// Brute-force histogram for a prime-power modulus p^e; the oracle the
/// closed-form counts are checked against.
inline CountHistogram count_brute(std::uint64_t p, std::int64_t e, std::int64_t r,
                                  std::uint64_t guard = kDefaultBruteGuard) {
  if (!is_prime(p)) throw std::domain_error("count_brute: p must be prime");
  if (e < 1 || r < 1) throw std::domain_error("count_brute: e and r must be >= 1");
  if (e > std::numeric_limits<std::int64_t>::max() / r || power_exceeds(p, e * r, guard)) {
    throw ResourceLimitError("brute-force enumeration of (p^e)^r tuples (p = " + std::to_string(p) +
                             ", e = " + std::to_string(e) + ", r = " + std::to_string(r) +
                             ") exceeds the guard of " + std::to_string(guard) + " tuples");
  }
  std::uint64_t pe = 1;
  for (std::int64_t i = 0; i < e; ++i) pe *= p;
  return brute_histogram(pe, r, guard);
}

/// Exact probability mass function of gcd(n, k_1...k_r) over uniform
/// tuples, assembled multiplicatively across the primes of n: the law at a
/// divisor f = prod p^(d_p) is the product of the per-prime closed-form
/// counts normalized by p^(r e_p).
inline Pmf pmf(std::uint64_t n, std::int64_t r) {
  if (n < 1 || r < 1) throw std::domain_error("pmf: n and r must be >= 1");
  const Factorization fact = factorize(n);
  Pmf result;
  result.n = n;
  result.r = r;

  // Per prime, the mass of each valuation d in [0, e].
  std::vector<std::vector<Rational>> factor_mass;
  for (const auto& [p, e] : fact.entries()) {
    std::vector<Rational> masses;
    const BigInt norm = int_pow(BigInt(p), r * e);
    for (std::int64_t d = 0; d <= e; ++d) {
      masses.push_back(make_rational(count_prime_power(p, e, r, d), norm));
    }
    factor_mass.push_back(std::move(masses));
  }

  const std::size_t np = fact.entries().size();
  std::vector<std::int64_t> digits(np, 0);
  while (true) {
    Rational mass(1);
    std::uint64_t f = 1;
    for (std::size_t i = 0; i < np; ++i) {
      mass *= factor_mass[i][static_cast<std::size_t>(digits[i])];
      for (std::int64_t j = 0; j < digits[i]; ++j) f *= fact.entries()[i].prime;
    }
    result.mass[f] = mass;
    std::size_t pos = 0;
    while (pos < np) {
      if (++digits[pos] <= fact.entries()[pos].exponent) break;
      digits[pos] = 0;
      ++pos;
    }
    if (pos == np) break;
  }
  return result;
}

}  // namespace gcdmoment
