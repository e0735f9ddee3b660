#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lattice/errors.hpp"
#include "lattice/twist_map.hpp"

namespace {

using namespace lattice;
constexpr double kPi = std::numbers::pi;

GeneratingFunction bilinear() { return GeneratingFunction(0, 0, 0, {}); }
GeneratingFunction eps_cos(double eps) { return GeneratingFunction(0, 0, 0, TrigPotential({{1, 0, eps, 0.0}})); }

// Random H with twist margin at least 0.2.
GeneratingFunction random_generating(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> wave(-2, 2);
  std::vector<TrigTerm> terms;
  double budget = 0.8;
  for (int i = 0; i < 5; ++i) {
    TrigTerm t{wave(rng), wave(rng), 0.3 * u(rng), kPi * u(rng)};
    const double mixed = std::abs(t.amp * t.k * t.l);
    if (mixed > budget) t.amp = 0.0;
    budget -= std::abs(t.amp * t.k * t.l);
    terms.push_back(t);
  }
  return GeneratingFunction(0.3 * u(rng), 0.3 * u(rng), u(rng), TrigPotential(terms));
}

TEST(TwistMap, ForwardExamples) {
  const TwistMap theta(bilinear());
  const Point2 a = theta.forward({3.0, 5.0});
  EXPECT_DOUBLE_EQ(a.x, 5.0);
  EXPECT_DOUBLE_EQ(a.y, -3.0);

  const TwistMap f(eps_cos(0.1));
  const Point2 b = f.forward({kPi / 2, 0.0});
  EXPECT_NEAR(b.x, 0.1, 1e-12);
  EXPECT_NEAR(b.y, -kPi / 2, 1e-12);

  const TwistMap g(GeneratingFunction(0, 0, 0, TrigPotential({{0, 1, 1.0, 0.0}})));
  const Point2 c = g.forward({0.0, 0.0});
  EXPECT_NEAR(c.x, 0.0, 1e-12);
  EXPECT_NEAR(c.y, 0.0, 1e-12);
}

TEST(TwistMap, InverseExamples) {
  const Point2 a = TwistMap(bilinear()).inverse({5.0, -3.0});
  EXPECT_DOUBLE_EQ(a.x, 3.0);
  EXPECT_DOUBLE_EQ(a.y, 5.0);
  const Point2 b = TwistMap(eps_cos(0.1)).inverse({0.1, -kPi / 2});
  EXPECT_NEAR(b.x, kPi / 2, 1e-12);
  EXPECT_NEAR(b.y, 0.0, 1e-12);
}

TEST(TwistMap, JacobianExamples) {
  const Matrix2 j = TwistMap(bilinear()).jacobian({0.7, -4.0});
  EXPECT_DOUBLE_EQ(j[0][0], 0.0);
  EXPECT_DOUBLE_EQ(j[0][1], 1.0);
  EXPECT_DOUBLE_EQ(j[1][0], -1.0);
  EXPECT_DOUBLE_EQ(j[1][1], 0.0);
  // closed form: x' = y + 0.1 sin x, y' = -x
  const Matrix2 k = TwistMap(eps_cos(0.1)).jacobian({kPi / 2, 0.0});
  EXPECT_NEAR(k[0][0], 0.1 * std::cos(kPi / 2), 1e-12);
  EXPECT_NEAR(k[0][1], 1.0, 1e-12);
  EXPECT_NEAR(k[1][0], -1.0, 1e-12);
  EXPECT_NEAR(k[1][1], 0.0, 1e-12);
  EXPECT_NEAR(det(k), 1.0, 1e-12);
}

TEST(TwistMap, RejectsFailedTwist) {
  EXPECT_THROW(TwistMap(GeneratingFunction(0, 0, 0, TrigPotential({{1, 1, 2.0, 0.0}}))), TwistViolation);
}

TEST(TwistMap, SampledTwistAcceptedWhenCoefficientBoundFails) {
  // Two terms on the same wave vector out of phase by 2: the coefficient
  // margin is 1 - 1.2 < 0 but d1 d2 H >= 1 - 1.2 |cos 1| > 0.
  const TwistMap m(GeneratingFunction(0, 0, 0, TrigPotential({{1, 1, 0.6, 0.0}, {1, 1, 0.6, 2.0}})));
  EXPECT_FALSE(m.certified());
  EXPECT_NEAR(m.twist_margin(), -0.2, 1e-15);
  const Point2 p = m.inverse(m.forward({0.3, 0.4}));
  EXPECT_NEAR(p.x, 0.3, 1e-10);
  EXPECT_NEAR(p.y, 0.4, 1e-10);
}

TEST(TwistMap, PeriodicityConjugatesTheta) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  std::uniform_int_distribution<int> shift(-3, 3);
  const TwistMap f(random_generating(rng));
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{u(rng), u(rng)};
    const Point2 m{2 * kPi * shift(rng), 2 * kPi * shift(rng)};
    const Point2 a = f.forward(p);
    const Point2 b = f.forward({p.x + m.x, p.y + m.y});
    const Point2 t = theta_map(m);
    EXPECT_NEAR(b.x - a.x, t.x, 1e-10);
    EXPECT_NEAR(b.y - a.y, t.y, 1e-10);
  }
}

TEST(TwistMap, AreaPreservingAndMatchesFiniteDifferences) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int r = 0; r < 5; ++r) {
    const TwistMap f(random_generating(rng));
    const PlanarMap pm = f.as_planar_map();
    for (int i = 0; i < 200; ++i) {
      const Point2 p{u(rng), u(rng)};
      const Matrix2 j = f.jacobian(p);
      EXPECT_NEAR(det(j), 1.0, 1e-10);
      const Matrix2 fd = finite_difference_jacobian(pm, p);
      EXPECT_NEAR(det(fd), 1.0, 1e-6);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) EXPECT_NEAR(fd[a][b], j[a][b], 1e-6);
      }
    }
  }
}

TEST(TwistMap, TwistDerivativeIsReciprocalMixedPartial) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const GeneratingFunction h = random_generating(rng);
  const TwistMap f(h);
  for (int i = 0; i < 200; ++i) {
    const Point2 p{u(rng), u(rng)};
    const double s = h.derivative({1, 1}, {p.x, f.forward(p).x});
    EXPECT_GT(f.twist_derivative(p), 0.0);
    EXPECT_NEAR(f.twist_derivative(p), 1.0 / s, 1e-10);
    EXPECT_NEAR(f.jacobian(p)[0][1], 1.0 / s, 1e-10);
  }
}

TEST(TwistMap, RoundTrip) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int r = 0; r < 5; ++r) {
    const TwistMap f(random_generating(rng));
    for (int i = 0; i < 200; ++i) {
      const Point2 p{u(rng), u(rng)};
      const Point2 q = f.inverse(f.forward(p));
      EXPECT_NEAR(q.x, p.x, 1e-10);
      EXPECT_NEAR(q.y, p.y, 1e-10);
    }
  }
}

TEST(RecoverGenerating, ThetaGivesBilinear) {
  const RecoveredTable t = recover_generating(theta_map, 0.0);
  ASSERT_EQ(t.xs.size(), 50u);
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    for (std::size_t k = 0; k < t.xps.size(); ++k) EXPECT_NEAR(t.at(i, k), t.xs[i] * t.xps[k], 1e-8);
  }
}

TEST(RecoverGenerating, RoundTripWithPeriodicPart) {
  const GeneratingFunction h = eps_cos(0.1);
  const TwistMap f(h);
  const RecoveredTable t = recover_generating(f.as_planar_map(), h.value({0.0, 0.0}));
  EXPECT_DOUBLE_EQ(h.value({0.0, 0.0}), 0.1);
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    for (std::size_t k = 0; k < t.xps.size(); ++k) EXPECT_NEAR(t.at(i, k), h.value({t.xs[i], t.xps[k]}), 1e-6);
  }
  EXPECT_LE(t.max_closedness_residual, 1e-6);
}

TEST(RecoverGenerating, RandomRoundTrips) {
  std::mt19937_64 rng(35);
  for (int r = 0; r < 3; ++r) {
    const GeneratingFunction h = random_generating(rng);
    const TwistMap f(h);
    const RecoveredTable t = recover_generating(f.as_planar_map(), h.value({0.0, 0.0}));
    double err = 0.0;
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
      for (std::size_t k = 0; k < t.xps.size(); ++k) err = std::max(err, std::abs(t.at(i, k) - h.value({t.xs[i], t.xps[k]})));
    }
    EXPECT_LE(err, 1e-6);
  }
}

TEST(RecoverGenerating, RejectsNonAreaPreservingMap) {
  const PlanarMap bad = [](Point2 p) { return Point2{p.y + 0.1 * std::sin(p.y), -p.x}; };
  try {
    recover_generating(bad, 0.0);
    FAIL() << "expected ClosednessViolation";
  } catch (const ClosednessViolation& e) {
    EXPECT_GT(e.residual(), 1e-6);
  }
}

TEST(Gauss5Adaptive, IntegratesSine) {
  double err = 0.0;
  EXPECT_NEAR(gauss5_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12, err), 2.0, 1e-12);
  EXPECT_LE(err, 1e-10);
}

}  // namespace
