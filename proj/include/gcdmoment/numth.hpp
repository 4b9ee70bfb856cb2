#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gcdmoment/numeric.hpp"

namespace gcdmoment {

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a positive integer. Entries are ascending by
/// prime, exponents are >= 1, and a factorization of 1 is empty.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> entries) : entries_(std::move(entries)) {}

  const std::vector<PrimePower>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Multiplies the factorization back into the integer it represents.
  std::uint64_t value() const {
    std::uint64_t n = 1;
    for (const auto& [p, e] : entries_) {
      for (int i = 0; i < e; ++i) n *= p;
    }
    return n;
  }

  int exponent_of(std::uint64_t p) const {
    for (const auto& [q, e] : entries_) {
      if (q == p) return e;
    }
    return 0;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> entries_;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) acc = mulmod_u64(acc, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace detail

/// Deterministic Miller-Rabin, valid for every 64-bit input. The base set
/// {2, 325, 9375, 28178, 450775, 9780504, 1795265022} has no strong
/// pseudoprime below 2^64.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  const int s = std::countr_zero(n - 1);
  const std::uint64_t d = (n - 1) >> s;
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    std::uint64_t x = detail::powmod_u64(a % n, d, n);
    if (x <= 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace detail {

/// Brent-cycle Pollard rho. Expects an odd composite with no factor found
/// by trial division; sweeps the polynomial offset deterministically until
/// a nontrivial factor appears.
inline std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    std::uint64_t x = 2, y = 2, factor = 1;
    std::uint64_t power = 1, lam = 1;
    while (factor == 1) {
      if (power == lam) {
        x = y;
        power *= 2;
        lam = 0;
      }
      y = step(y);
      ++lam;
      const std::uint64_t diff = x > y ? x - y : y - x;
      if (diff == 0) break;  // cycle closed without a factor; retry with next c
      factor = std::gcd(diff, n);
    }
    if (factor > 1 && factor < n) return factor;
  }
}

inline void factor_into(std::uint64_t n, std::map<std::uint64_t, int>& acc) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++acc[n];
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_into(d, acc);
  factor_into(n / d, acc);
}

inline constexpr std::uint64_t kTrialDivisionLimit = 1'000'000;

}  // namespace detail

/// Factors n >= 1: trial division by 2, 3 and the 6k+-1 wheel up to 10^6,
/// then Brent-Pollard rho on any remaining cofactor (certified by
/// Miller-Rabin). Comfortable well past 10^12.
inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::domain_error("factorize: n must be >= 1");
  std::vector<PrimePower> entries;
  auto strip = [&](std::uint64_t p) {
    if (n % p != 0) return;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    entries.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t i = 5; i <= detail::kTrialDivisionLimit && i * i <= n; i += 6) {
    strip(i);
    strip(i + 2);
  }
  if (n > 1) {
    std::map<std::uint64_t, int> rest;
    detail::factor_into(n, rest);
    for (const auto& [p, e] : rest) entries.push_back({p, e});
  }
  return Factorization(std::move(entries));
}

/// p-adic valuation ord_p(n): the exponent of prime p in n.
inline int valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::domain_error("valuation: n must be >= 1");
  if (p < 2 || !is_prime(p)) throw std::domain_error("valuation: p must be prime");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

/// gcd with gcd(a, 0) = a; the all-zero pair has no greatest divisor.
inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  if (a == 0 && b == 0) throw std::domain_error("gcd: gcd(0, 0) is undefined");
  return std::gcd(a, b);
}

/// Exact binomial coefficient via the multiplicative formula; every
/// intermediate division is exact. k > n yields 0.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0) throw std::domain_error("binomial: negative argument");
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

/// Multiset coefficient: the number of degree-r monomials in m variables,
/// equal to C(m+r-1, r). By convention the degree-0 count is 1 for every m,
/// and an empty variable set admits no monomial of positive degree.
inline BigInt multiset_coeff(std::int64_t m, std::int64_t r) {
  if (m < 0 || r < 0) throw std::domain_error("multiset_coeff: negative argument");
  if (r == 0) return 1;
  if (m == 0) return 0;
  return binomial(m + r - 1, r);
}

}  // namespace gcdmoment
