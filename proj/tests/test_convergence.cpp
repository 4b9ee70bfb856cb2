#include "gcdmoment/convergence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

using namespace gcdmoment;

TEST(LimitValue, Examples) {
  EXPECT_EQ(limit_value(6, Exponent::exact(1)).rational(), Rational(6));
  for (std::uint64_t n : {1, 2, 7, 100}) {
    EXPECT_EQ(limit_value(n, Exponent::exact(0)).rational(), Rational(1));
  }
  EXPECT_EQ(limit_value(2, Exponent::exact(2)).rational(), Rational(4));
  EXPECT_EQ(limit_value(3, Exponent::exact(-1)).rational(), make_rational(1, 3));
  const Complex z = limit_value(2, Exponent::floating(1.0, 1.0)).complex_value();
  EXPECT_NEAR(std::abs(z - std::pow(Complex(2.0), Complex(1.0, 1.0))), 0.0, 1e-12);
}

TEST(LimitValue, ExactlyNForUnitExponent) {
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    ASSERT_EQ(limit_value(n, Exponent::exact(1)).rational(), Rational(n));
  }
}

TEST(ConvergenceCondition, Examples) {
  const ConvergenceCondition six_sq = convergence_condition(6, Exponent::exact(2));
  EXPECT_TRUE(six_sq.guaranteed);
  ASSERT_EQ(six_sq.per_prime.size(), 2u);
  EXPECT_DOUBLE_EQ(six_sq.per_prime[0].abs_pw_minus_one, 3.0);   // |2^2 - 1|
  EXPECT_DOUBLE_EQ(six_sq.per_prime[1].abs_pw_minus_one, 8.0);   // |3^2 - 1|
  EXPECT_DOUBLE_EQ(six_sq.per_prime[0].abs_pwm1_minus_one, 1.0); // |2^1 - 1|
  // The boundary case: |2 - 1| = 1 is not > 1, so the stricter flag is off
  // while the stated condition holds — the two conditions genuinely differ.
  EXPECT_FALSE(six_sq.conservative);

  for (std::uint64_t n : {1, 2, 6, 360}) {
    EXPECT_TRUE(convergence_condition(n, Exponent::exact(1)).guaranteed) << n;
    EXPECT_TRUE(convergence_condition(n, Exponent::exact(1)).conservative) << n;
  }

  const ConvergenceCondition half = convergence_condition(2, Exponent::floating(0.5, 0.0));
  EXPECT_FALSE(half.guaranteed);  // |sqrt(2) - 1| < 1
  EXPECT_NEAR(half.per_prime[0].abs_pw_minus_one, std::sqrt(2.0) - 1.0, 1e-12);
}

TEST(ConvergenceTable, PowerOfTwoUnitExponent) {
  const ConvergenceReport report = convergence_table(2, Exponent::exact(1), {1, 2, 3, 4});
  ASSERT_EQ(report.rows.size(), 4u);
  const Rational expected[] = {make_rational(3, 2), make_rational(7, 4), make_rational(15, 8),
                               make_rational(31, 16)};
  const double gaps[] = {0.5, 0.25, 0.125, 0.0625};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(report.rows[i].moment.value.rational(), expected[i]);
    EXPECT_DOUBLE_EQ(report.rows[i].gap, gaps[i]);
  }
  EXPECT_EQ(report.limit.rational(), Rational(2));
  EXPECT_TRUE(report.guaranteed);
}

TEST(ConvergenceTable, DegenerateModulus) {
  const ConvergenceReport report = convergence_table(1, Exponent::exact(7), {1, 5, 9});
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.moment.value.rational(), Rational(1));
    EXPECT_EQ(row.gap, 0.0);
  }
}

TEST(ConvergenceTable, ValidatesAndOrdersRows) {
  EXPECT_THROW(convergence_table(6, Exponent::exact(1), {}), std::domain_error);
  EXPECT_THROW(convergence_table(6, Exponent::exact(1), {2, 0}), std::domain_error);
  const ConvergenceReport report = convergence_table(6, Exponent::exact(1), {5, 1, 3, 3});
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].r, 1);
  EXPECT_EQ(report.rows[1].r, 3);
  EXPECT_EQ(report.rows[2].r, 5);
}

TEST(ConvergenceTable, SquareExponentSweepReachesTolerance) {
  std::vector<std::int64_t> rs(200);
  std::iota(rs.begin(), rs.end(), 1);
  const ConvergenceReport report = convergence_table(6, Exponent::exact(2), rs);
  EXPECT_EQ(report.limit.rational(), Rational(36));
  bool reached = false;
  Rational previous_gap(-1);
  for (const auto& row : report.rows) {
    const Rational gap = Rational(abs(Rational(Rational(36) - row.moment.value.rational())));
    if (previous_gap >= 0) {
      ASSERT_LT(gap, previous_gap) << "gap must decrease monotonically at r = " << row.r;
    }
    previous_gap = gap;
    if (gap < make_rational(1, 1'000'000)) reached = true;
  }
  EXPECT_TRUE(reached) << "gap never fell below 1e-6 within r <= 200";
}

TEST(ConvergenceGaps, UnitExponentStrictlyDecreasing) {
  std::vector<std::int64_t> rs(50);
  std::iota(rs.begin(), rs.end(), 1);
  for (std::uint64_t n : {2, 6, 12, 60}) {
    const ConvergenceReport report = convergence_table(n, Exponent::exact(1), rs);
    Rational previous(-1);
    for (const auto& row : report.rows) {
      const Rational gap =
          Rational(abs(Rational(Rational(n) - row.moment.value.rational())));
      ASSERT_GT(gap, 0) << "n = " << n << " r = " << row.r;
      if (previous >= 0) ASSERT_LT(gap, previous) << "n = " << n << " r = " << row.r;
      previous = gap;
    }
  }
  // For n = 2 the r = 50 gap is exactly 2^-50.
  const ConvergenceReport two = convergence_table(2, Exponent::exact(1), {50});
  EXPECT_EQ(Rational(Rational(2) - two.rows[0].moment.value.rational()),
            make_rational(1, BigInt(1) << 50));
  EXPECT_EQ(two.rows[0].gap, std::ldexp(1.0, -50));
}

TEST(ConvergenceGaps, GuaranteedExponentsHalveOverSweep) {
  const Exponent exponents[] = {Exponent::exact(2), Exponent::exact(3),
                                Exponent::floating(1.0, 1.0)};
  for (std::uint64_t n = 2; n <= 30; ++n) {
    for (const Exponent& w : exponents) {
      if (!convergence_condition(n, w).guaranteed) continue;
      const ConvergenceReport report = convergence_table(n, w, {10, 60});
      ASSERT_EQ(report.rows.size(), 2u);
      ASSERT_LE(report.rows[1].gap, report.rows[0].gap / 2.0)
          << "n = " << n << " w = " << w.to_text();
    }
  }
}
