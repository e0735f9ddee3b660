#include <gtest/gtest.h>

#include "lattice/bezout_bounds.hpp"
#include "lattice/critical_counting.hpp"
#include "lattice/errors.hpp"

namespace {

using namespace lattice;

TEST(Bezout, CircleModel) {
  const BezoutBound b = bezout_bound(circle_model(2), 1);
  EXPECT_EQ(b.exponent, 3);
  EXPECT_EQ(b.base, 2);
  EXPECT_EQ(b.sites, 2);
  EXPECT_EQ(b.value, 64);
  EXPECT_EQ(bezout_bound(circle_model(1), 1).value, 64);
}

TEST(Bezout, ZeroDimensionalLinearModel) {
  const AlgebraicModel m{3, 3, 3, {1, 1, 1}, 1};
  EXPECT_EQ(bezout_bound(m, 1).value, 1);
  EXPECT_EQ(bezout_bound(m, 5).value, 1);
}

TEST(Bezout, ExponentFormula) {
  // R + (r+1) C(d, r+1) C(R+1, r+1) = 2 + 2 * C(4,2) * C(3,2) = 38
  const AlgebraicModel m{4, 1, 2, {2, 3}, 2};
  const BezoutBound b = bezout_bound(m, 2);
  EXPECT_EQ(b.exponent, 38);
  EXPECT_EQ(b.base, 3);
  EXPECT_EQ(b.value, boost::multiprecision::pow(BigInt(3), 38 * 3));
}

TEST(Bezout, MonotoneInEachParameter) {
  for (int n = 1; n <= 4; ++n) {
    for (int big_n = 1; big_n <= 4; ++big_n) {
      const AlgebraicModel m{3, 1, 2, {2, 2}, big_n};
      const BigInt v = bezout_bound(m, n).value;
      EXPECT_LE(v, bezout_bound({3, 1, 2, {2, 2}, big_n + 1}, n).value);
      EXPECT_LE(v, bezout_bound({3, 1, 3, {2, 2, 1}, big_n}, n).value);
      EXPECT_LE(v, bezout_bound({4, 1, 2, {2, 2}, big_n}, n).value);
      EXPECT_LE(v, bezout_bound(m, n + 1).value);
    }
  }
}

TEST(Bezout, Validation) {
  EXPECT_THROW(bezout_bound({2, 3, 3, {1, 1, 1}, 1}, 1), ValidationError);
  EXPECT_THROW(bezout_bound({2, 1, 1, {2, 2}, 1}, 1), ValidationError);
  EXPECT_THROW(bezout_bound({2, 1, 1, {0}, 1}, 1), ValidationError);
  EXPECT_THROW(bezout_bound(circle_model(0), 1), ValidationError);
  EXPECT_THROW(bezout_bound(circle_model(2), 0), ValidationError);
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(5, 0), 1);
  EXPECT_EQ(binomial(5, 6), 0);
  EXPECT_EQ(binomial(60, 30), BigInt("118264581564861424"));
}

TEST(MorseLowerBound, Examples) {
  EXPECT_EQ(morse_lower_bound(2, 3), 16);
  EXPECT_EQ(morse_lower_bound(1, 7), 1);
  EXPECT_EQ(morse_lower_bound(4, 2), 64);
  EXPECT_THROW(morse_lower_bound(0, 2), ValidationError);
}

TEST(Sandwich, Examples) {
  EXPECT_TRUE(sandwich_check(16, 16, 64));
  EXPECT_FALSE(sandwich_check(16, 8, 64));
  EXPECT_TRUE(sandwich_check(1, 1, 1));
}

TEST(Sandwich, HoldsForCosinePotentials) {
  const TrigPotential f({{1, 0, 1.0, 0.0}, {0, 1, 1.0, 0.0}, {1, 1, 0.05, 0.0}});
  for (int n = 1; n <= 4; ++n) {
    const CountReport r = count_by_newton(f, n);
    ASSERT_TRUE(r.saturated);
    const BigInt upper = bezout_bound(circle_model(trig_degree_proxy(1)), n).value;
    EXPECT_TRUE(sandwich_check(morse_lower_bound(2, n), BigInt(r.count), upper)) << n;
  }
}

}  // namespace
