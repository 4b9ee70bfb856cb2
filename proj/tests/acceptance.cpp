// Acceptance suite: one test (and one pass/fail line) per criterion, each
// pinned to its stated tolerance and runtime budget.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "gcdmoment/cli.hpp"
#include "gcdmoment/convergence.hpp"
#include "gcdmoment/moments.hpp"

using namespace gcdmoment;

namespace {

template <typename F>
double seconds(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_close(const Complex& a, const Complex& b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace

TEST(Acceptance, Criterion01_SingleFactorMeanOfTwelve) {
  const Rational expected = make_rational(10, 3);
  Rational k, c, b;
  const double elapsed = seconds([&] {
    k = moment_kurokawa(12).value.rational();
    c = moment_closed(12, 1, Exponent::exact(1)).value.rational();
    b = moment_brute(12, 1, Exponent::exact(1)).value.rational();
  });
  EXPECT_EQ(k, expected);
  EXPECT_EQ(c, expected);
  EXPECT_EQ(b, expected);
  EXPECT_LT(elapsed, 0.010);
}

TEST(Acceptance, Criterion02_TwoFactorMeanOfSix) {
  const Rational expected = make_rational(133, 36);
  Rational ko, c, b;
  const double elapsed = seconds([&] {
    ko = moment_kurokawa_ochiai(6, 2).value.rational();
    c = moment_closed(6, 2, Exponent::exact(1)).value.rational();
    b = moment_brute(6, 2, Exponent::exact(1)).value.rational();
  });
  EXPECT_EQ(ko, expected);
  EXPECT_EQ(c, expected);
  EXPECT_EQ(b, expected);
  EXPECT_LT(elapsed, 0.010);
}

TEST(Acceptance, Criterion03_OracleEquivalenceSweep) {
  const std::vector<Exponent> w_set = {Exponent::exact(-1), Exponent::exact(0), Exponent::exact(1),
                                       Exponent::exact(2), Exponent::exact(3)};
  cli::VerifySummary summary;
  const double elapsed = seconds([&] { summary = cli::verify_sweep(30, 3, w_set, 100'000'000); });
  EXPECT_EQ(summary.checked, 30u * 3u * 5u);
  EXPECT_EQ(summary.brute_compared, summary.checked) << "every grid point fits the guard";
  EXPECT_EQ(summary.mismatches, 0u) << summary.first_counterexample;
  EXPECT_LT(elapsed, 60.0);
}

TEST(Acceptance, Criterion04_CountingOracle) {
  const std::vector<std::pair<std::uint64_t, std::int64_t>> prime_powers = {
      {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}};
  const double elapsed = seconds([&] {
    for (const auto& [p, e] : prime_powers) {
      for (std::int64_t r = 1; r <= 3; ++r) {
        const CountHistogram hist = count_brute(p, e, r);
        ASSERT_EQ(hist.total(), int_pow(BigInt(p), e * r)) << "p=" << p << " e=" << e << " r=" << r;
        std::uint64_t f = 1;
        for (std::int64_t d = 0; d <= e; ++d) {
          ASSERT_EQ(hist.counts.at(f), count_prime_power(p, e, r, d))
              << "p=" << p << " e=" << e << " r=" << r << " d=" << d;
          f *= p;
        }
      }
    }
  });
  EXPECT_LT(elapsed, 60.0);
}

TEST(Acceptance, Criterion05_SeriesIdentitySuite) {
  const double elapsed = seconds([&] {
    for (std::int64_t e = 1; e <= 8; ++e) {
      for (std::int64_t r = 1; r <= 8; ++r) {
        ASSERT_EQ(truncated_series_at_one(PolySpec{e, r}), binomial(e + r - 1, r));
        ASSERT_EQ(truncated_series_at_one(PolySpec{e, r}), binomial(e + r - 1, e - 1));
        const cli::IdentitySummary summary = cli::identity_sweep(e, r, 200, 97'000 + 100 * e + r);
        ASSERT_EQ(summary.failures, 0u) << "e=" << e << " r=" << r << ": " << summary.first_failure;
      }
    }
  });
  EXPECT_LT(elapsed, 30.0);
}

TEST(Acceptance, Criterion06_BranchShapeEquivalence) {
  for (std::uint64_t n = 1; n <= 30; ++n) {
    for (std::int64_t r = 1; r <= 4; ++r) {
      for (std::int64_t w : {2, 3}) {
        const Exponent exponent = Exponent::exact(w);
        ASSERT_EQ(moment_closed(n, r, exponent, ClosedForm::primary).value.rational(),
                  moment_closed(n, r, exponent, ClosedForm::alternate).value.rational())
            << "n=" << n << " r=" << r << " w=" << w;
      }
      for (const Complex w : {Complex(0.5, 0.5), Complex(2.0, 3.0)}) {
        const Exponent exponent = Exponent::floating(w);
        ASSERT_TRUE(rel_close(
            moment_closed(n, r, exponent, ClosedForm::primary).value.complex_value(),
            moment_closed(n, r, exponent, ClosedForm::alternate).value.complex_value(), 1e-10))
            << "n=" << n << " r=" << r << " w=" << w;
      }
    }
  }
}

TEST(Acceptance, Criterion07_SingularExponentHandling) {
  const Exponent w = Exponent::floating(1.0, 2.0 * std::numbers::pi / std::log(2.0));
  for (std::int64_t r = 1; r <= 3; ++r) {
    const Complex universal = moment_universal(8, r, w).value.complex_value();
    const double unit_moment = to_double(moment_closed(8, r, Exponent::exact(1)).value.rational());
    ASSERT_TRUE(rel_close(universal, Complex(unit_moment), 1e-9))
        << "r=" << r << " universal=" << universal << " exact=" << unit_moment;
  }
}

TEST(Acceptance, Criterion08_UnitExponentConvergenceExact) {
  std::vector<std::int64_t> rs(50);
  std::iota(rs.begin(), rs.end(), 1);
  const ConvergenceReport report = convergence_table(2, Exponent::exact(1), rs);
  ASSERT_EQ(report.rows.size(), 50u);
  for (const auto& row : report.rows) {
    const Rational expected =
        Rational(2) - make_rational(1, BigInt(1) << static_cast<unsigned>(row.r));
    ASSERT_EQ(row.moment.value.rational(), expected) << "r=" << row.r;
  }
  const ConvergenceRow& last = report.rows.back();
  ASSERT_EQ(last.r, 50);
  EXPECT_EQ(Rational(Rational(2) - last.moment.value.rational()), make_rational(1, BigInt(1) << 50));
  EXPECT_EQ(last.gap, std::ldexp(1.0, -50));
}

TEST(Acceptance, Criterion09_SquareExponentConvergenceNumeric) {
  std::vector<std::int64_t> rs(200);
  std::iota(rs.begin(), rs.end(), 1);
  const ConvergenceReport report = convergence_table(6, Exponent::exact(2), rs);
  ASSERT_EQ(report.limit.rational(), Rational(36));
  bool reached = false;
  Rational previous(-1);
  for (const auto& row : report.rows) {
    const Rational gap = Rational(abs(Rational(Rational(36) - row.moment.value.rational())));
    if (previous >= 0) ASSERT_LT(gap, previous) << "gap not decreasing at r=" << row.r;
    previous = gap;
    if (gap < make_rational(1, 1'000'000)) {
      reached = true;
      break;
    }
  }
  EXPECT_TRUE(reached) << "|moment - 36| never fell below 1e-6 for r <= 200";
}

TEST(Acceptance, Criterion10_LinearCostAndGuard) {
  const Exponent w = Exponent::exact(3);
  const double single = seconds([&] { moment_closed(720'720, 1000, w); });
  EXPECT_LT(single, 1.0);

  std::vector<std::int64_t> rs;
  for (std::int64_t r = 100; r <= 1000; r += 100) rs.push_back(r);
  const cli::BenchReport report = cli::bench_sweep(720'720, w, rs, kDefaultBruteGuard);
  ASSERT_EQ(report.rows.size(), 10u);
  for (const auto& row : report.rows) {
    EXPECT_FALSE(row.brute_seconds.has_value()) << "brute must be refused at r=" << row.r;
  }
  EXPECT_GE(report.pearson_r, 0.9);

  std::ostringstream out, err;
  const int code = cli::run({"moment", "--n", "720720", "--r", "1000", "--w", "3", "--method",
                             "brute"},
                            out, err);
  EXPECT_EQ(code, 3);
  EXPECT_NE(err.str().find("guard"), std::string::npos);
}

TEST(Acceptance, Criterion11_MonteCarloSanity) {
  const MomentResult first = monte_carlo(6, 2, Exponent::exact(1), 100'000, 7);
  const MomentResult second = monte_carlo(6, 2, Exponent::exact(1), 100'000, 7);
  ASSERT_TRUE(first.value == second.value);
  ASSERT_EQ(first.mc->std_error, second.mc->std_error);

  const double exact = to_double(make_rational(133, 36));
  for (std::uint64_t seed : {11, 222, 3333}) {
    const MomentResult est = monte_carlo(6, 2, Exponent::exact(1), 1'000'000, seed);
    ASSERT_GT(est.mc->std_error, 0.0);
    ASSERT_LE(std::abs(est.value.complex_value().real() - exact), 5.0 * est.mc->std_error)
        << "seed=" << seed;
  }
}
