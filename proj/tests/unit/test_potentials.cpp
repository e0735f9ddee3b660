#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lattice/errors.hpp"
#include "lattice/potentials.hpp"

namespace {

using namespace lattice;
constexpr double kPi = std::numbers::pi;

TrigPotential cos_sum() { return TrigPotential({{1, 0, 1.0, 0.0}, {0, 1, 1.0, 0.0}}); }

// A potential with mixed, higher and phased terms for the property checks.
TrigPotential mixed() {
  return TrigPotential(
      {{1, 0, 1.0, 0.3}, {0, 1, 0.7, -1.1}, {1, 1, 0.05, 0.0}, {2, -1, 0.2, 0.5}, {3, 2, -0.1, 2.0}});
}

TEST(TrigPotential, ValueExamples) {
  EXPECT_DOUBLE_EQ(cos_sum().derivative({0, 0}, {0.0, 0.0}), 2.0);
  EXPECT_NEAR(cos_sum().derivative({1, 0}, {kPi / 2, 0.0}), -1.0, 1e-15);
  const TrigPotential p({{1, 1, 0.05, 0.0}});
  EXPECT_NEAR(p.derivative({1, 1}, {0.0, 0.0}), -0.05, 1e-15);
}

TEST(TrigPotential, RejectsBadOrder) {
  EXPECT_THROW(cos_sum().derivative({4, 0}, {0.0, 0.0}), ValidationError);
  EXPECT_THROW(cos_sum().derivative({0, -1}, {0.0, 0.0}), ValidationError);
}

TEST(TrigPotential, SupNormExamples) {
  EXPECT_DOUBLE_EQ(TrigPotential({{1, 0, 1.0, 0.0}}).sup_norm_bound({1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(TrigPotential({{1, 1, 0.05, 0.0}}).sup_norm_bound({2, 0}), 0.05);
  EXPECT_DOUBLE_EQ(cos_sum().sup_norm_bound({1, 1}), 0.0);
}

TEST(TrigPotential, Periodicity) {
  const TrigPotential p = mixed();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Point2 q{u(rng), u(rng)};
    for (int a = 0; a <= 3; ++a) {
      for (int b = 0; a + b <= 3; ++b) {
        const double v = p.derivative({a, b}, q);
        EXPECT_NEAR(p.derivative({a, b}, {q.x + 2 * kPi, q.y}), v, 1e-12);
        EXPECT_NEAR(p.derivative({a, b}, {q.x, q.y - 2 * kPi}), v, 1e-12);
      }
    }
  }
}

TEST(TrigPotential, DerivativesMatchFiniteDifferences) {
  const TrigPotential p = mixed();
  const double h = 1e-5;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const Point2 q{u(rng), u(rng)};
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; a + b <= 2; ++b) {
        const double dx = (p.derivative({a, b}, {q.x + h, q.y}) - p.derivative({a, b}, {q.x - h, q.y})) / (2 * h);
        const double dy = (p.derivative({a, b}, {q.x, q.y + h}) - p.derivative({a, b}, {q.x, q.y - h})) / (2 * h);
        const double ex = p.derivative({a + 1, b}, q);
        const double ey = p.derivative({a, b + 1}, q);
        // relative 1e-6 with an absolute floor for values near zero
        EXPECT_NEAR(dx, ex, 1e-6 * std::max(1.0, std::abs(ex)));
        EXPECT_NEAR(dy, ey, 1e-6 * std::max(1.0, std::abs(ey)));
      }
    }
  }
}

TEST(TrigPotential, JetMatchesDerivative) {
  const TrigPotential p = mixed();
  const PairJet j = p.jet(0.4, -2.2);
  const Point2 q{0.4, -2.2};
  EXPECT_DOUBLE_EQ(j.v, p.value(q));
  EXPECT_NEAR(j.d1, p.derivative({1, 0}, q), 1e-14);
  EXPECT_NEAR(j.d2, p.derivative({0, 1}, q), 1e-14);
  EXPECT_NEAR(j.d11, p.derivative({2, 0}, q), 1e-14);
  EXPECT_NEAR(j.d12, p.derivative({1, 1}, q), 1e-14);
  EXPECT_NEAR(j.d22, p.derivative({0, 2}, q), 1e-14);
}

TEST(TrigPotential, SupNormDominatesDenseGrid) {
  const TrigPotential p = mixed();
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; a + b <= 3; ++b) {
      double grid_max = 0.0;
      for (int i = 0; i < 100; ++i) {
        for (int k = 0; k < 100; ++k) {
          const Point2 q{2 * kPi * i / 100, 2 * kPi * k / 100};
          grid_max = std::max(grid_max, std::abs(p.derivative({a, b}, q)));
        }
      }
      EXPECT_GE(p.sup_norm_bound({a, b}) + 1e-15, grid_max) << a << "," << b;
    }
  }
}

TEST(TrigPotential, SimplifiedMergesAndCancels) {
  const TrigPotential p({{1, 1, 0.5, 0.0}, {-1, -1, 0.5, 0.0}, {2, 0, 1.0, 0.0}, {2, 0, -1.0, 0.0}});
  const TrigPotential s = p.simplified();
  ASSERT_EQ(s.terms().size(), 1u);
  EXPECT_NEAR(std::abs(s.terms()[0].amp), 1.0, 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const Point2 q{u(rng), u(rng)};
    EXPECT_NEAR(s.value(q), p.value(q), 1e-14);
  }
}

TEST(TrigPotential, DifferenceCancelsCommonTerms) {
  const TrigPotential f({{1, 0, 1.0, 0.0}, {0, 1, 1.0, 0.0}, {1, 1, 0.05, 0.0}});
  const TrigPotential d = f - cos_sum();
  ASSERT_EQ(d.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(gradient_sup_bound(d), 0.05);
  EXPECT_DOUBLE_EQ(hessian_sup_bound(d), 0.05);
}

TEST(TrigPolynomial1D, DerivativesAndSeparableSum) {
  const TrigPolynomial1D h({{1, 1.0, 0.0}, {2, 0.3, 0.4}});
  const double x = 0.7;
  const double step = 1e-5;
  for (int order = 0; order < 3; ++order) {
    const double fd = (h.derivative(order, x + step) - h.derivative(order, x - step)) / (2 * step);
    EXPECT_NEAR(fd, h.derivative(order + 1, x), 1e-6);
  }
  const TrigPotential g = h.separable_sum();
  EXPECT_NEAR(g.value({0.7, -1.3}), h.value(0.7) + h.value(-1.3), 1e-14);
  EXPECT_DOUBLE_EQ(h.sup_norm_bound(2), 1.0 + 0.3 * 4);
}

TEST(GeneratingFunction, TwistMarginExamples) {
  EXPECT_DOUBLE_EQ(twist_margin(GeneratingFunction(0, 0, 0, {})), 1.0);
  EXPECT_DOUBLE_EQ(twist_margin(GeneratingFunction(0, 0, 0, TrigPotential({{1, 1, 0.3, 0.0}}))), 0.7);
  EXPECT_DOUBLE_EQ(twist_margin(GeneratingFunction(0, 0, 0, cos_sum())), 1.0);
}

TEST(GeneratingFunction, ReducedPartialsArePeriodic) {
  const GeneratingFunction h(0.3, -0.2, 1.0, mixed());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), xp = u(rng);
    const double r1 = h.derivative({1, 0}, {x, xp}) - xp;
    const double r2 = h.derivative({0, 1}, {x, xp}) - x;
    EXPECT_NEAR(h.derivative({1, 0}, {x + 2 * kPi, xp - 2 * kPi}) - (xp - 2 * kPi), r1, 1e-11);
    EXPECT_NEAR(h.derivative({0, 1}, {x - 2 * kPi, xp + 2 * kPi}) - (x - 2 * kPi), r2, 1e-11);
  }
  EXPECT_DOUBLE_EQ(h.derivative({1, 1}, {0.0, 0.0}), 1.0 + mixed().derivative({1, 1}, {0.0, 0.0}));
}

TEST(GeneratingFunction, SampledTwistMinimumBoundedByMargin) {
  const GeneratingFunction h(0, 0, 0, TrigPotential({{1, 1, 0.3, 0.0}, {2, 1, 0.1, 1.0}}));
  EXPECT_GE(sampled_twist_minimum(h) + 1e-12, twist_margin(h));
}

}  // namespace
