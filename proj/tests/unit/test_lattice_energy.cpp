#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lattice/errors.hpp"
#include "lattice/lattice_energy.hpp"

namespace {

using namespace lattice;
constexpr double kPi = std::numbers::pi;

TrigPotential cos_sum() { return TrigPotential({{1, 0, 1.0, 0.0}, {0, 1, 1.0, 0.0}}); }
GeneratingFunction bilinear() { return GeneratingFunction(0, 0, 0, {}); }

TrigPotential perturbed() {
  return TrigPotential({{1, 0, 1.0, 0.0}, {0, 1, 1.0, 0.0}, {1, 1, 0.05, 0.0}, {2, -1, 0.1, 0.7}});
}

std::vector<double> random_config(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> x(n + 1);
  for (double& v : x) v = u(rng);
  return x;
}

TEST(LatticeConfig, Validation) {
  EXPECT_THROW(LatticeConfig({1.0}, LatticeMode::torus), ValidationError);
  EXPECT_THROW(LatticeConfig({1.0, NAN}, LatticeMode::line), ValidationError);
  const LatticeConfig c({-1.0, 7.0}, LatticeMode::torus);
  EXPECT_EQ(c.n(), 1);
  EXPECT_NEAR(c.canonical().coords()[0], 2 * kPi - 1.0, 1e-15);
  EXPECT_NEAR(c.canonical().coords()[1], 7.0 - 2 * kPi, 1e-15);
}

TEST(Energy, Examples) {
  EXPECT_DOUBLE_EQ(energy(cos_sum(), std::vector<double>{0.0, 0.0}), 2.0);
  EXPECT_NEAR(energy(cos_sum(), std::vector<double>{0.0, kPi, 0.0}), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(energy(bilinear(), std::vector<double>{1.0, 2.0, 3.0}), 8.0);
}

TEST(Gradient, Examples) {
  for (double g : gradient(bilinear(), std::vector<double>{0.0, 0.0})) EXPECT_EQ(g, 0.0);
  for (double g : gradient(cos_sum(), std::vector<double>{0.0, 0.0})) EXPECT_EQ(g, 0.0);
  const auto g = gradient(cos_sum(), std::vector<double>{kPi / 2, 0.0, 0.0});
  EXPECT_NEAR(g[0], -1.0, 1e-15);
  EXPECT_NEAR(g[1], 0.0, 1e-15);
  EXPECT_NEAR(g[2], 0.0, 1e-15);
}

TEST(Hessian, Examples) {
  const TridiagHessian h = hessian(cos_sum(), std::vector<double>{0.0, kPi, 0.0});
  EXPECT_NEAR(h.diag[0], -1.0, 1e-15);
  EXPECT_NEAR(h.diag[1], 2.0, 1e-15);
  EXPECT_NEAR(h.diag[2], -1.0, 1e-15);
  EXPECT_EQ(h.offdiag[0], 0.0);
  EXPECT_EQ(h.offdiag[1], 0.0);

  const TridiagHessian b = hessian(bilinear(), std::vector<double>{0.3, -2.0});
  EXPECT_EQ(b.diag[0], 0.0);
  EXPECT_EQ(b.diag[1], 0.0);
  EXPECT_EQ(b.offdiag[0], 1.0);

  const TridiagHessian p = hessian(TrigPotential({{1, 1, 0.05, 0.0}}), std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(p.diag[0], -0.05, 1e-15);
  EXPECT_NEAR(p.diag[1], -0.05, 1e-15);
  EXPECT_NEAR(p.offdiag[0], -0.05, 1e-15);
}

TEST(MorseMargin, Examples) {
  EXPECT_NEAR(morse_margin(cos_sum(), std::vector<double>{0.0, kPi}), 1.0, 1e-12);
  EXPECT_NEAR(morse_margin(cos_sum(), std::vector<double>{kPi / 2, kPi / 2}), 1.0, 1e-12);
  EXPECT_NEAR(morse_margin(bilinear(), std::vector<double>{0.0, 0.0}), 1.0, 1e-12);
}

TEST(Gradient, MatchesFiniteDifferences) {
  const TrigPotential f = perturbed();
  std::mt19937_64 rng(21);
  const double step = 1e-5;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x = random_config(rng, 1 + rep % 8);
    const auto g = gradient(f, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double saved = x[i];
      x[i] = saved + step;
      const double ep = energy(f, x);
      x[i] = saved - step;
      const double em = energy(f, x);
      x[i] = saved;
      EXPECT_NEAR((ep - em) / (2 * step), g[i], 1e-6 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST(Hessian, MatchesFiniteDifferencesAndIsTridiagonal) {
  const TrigPotential f = perturbed();
  std::mt19937_64 rng(22);
  const double step = 1e-5;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x = random_config(rng, 2 + rep % 7);
    const TridiagHessian h = hessian(f, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double saved = x[j];
      x[j] = saved + step;
      const auto gp = gradient(f, x);
      x[j] = saved - step;
      const auto gm = gradient(f, x);
      x[j] = saved;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double fd = (gp[i] - gm[i]) / (2 * step);
        const std::size_t d = i > j ? i - j : j - i;
        if (d >= 2) {
          EXPECT_NEAR(fd, 0.0, 1e-9);  // the matrix itself stores no such entries
          continue;
        }
        const double exact = d == 0 ? h.diag[i] : h.offdiag[std::min(i, j)];
        EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST(GradientAndHessian, AgreesWithSeparateCalls) {
  std::mt19937_64 rng(3);
  const auto x = random_config(rng, 6);
  std::vector<double> g;
  TridiagHessian h;
  gradient_and_hessian(perturbed(), x, g, h);
  EXPECT_EQ(g, gradient(perturbed(), x));
  EXPECT_EQ(h.diag, hessian(perturbed(), x).diag);
  EXPECT_EQ(h.offdiag, hessian(perturbed(), x).offdiag);
}

TEST(MorseMargin, SeparableBoundedBelowByBaseConstant) {
  // h = cos x + 0.2 cos 2x; K = inf |h'| + |h''| from a dense grid
  const TrigPolynomial1D h({{1, 1.0, 0.0}, {2, 0.2, 0.0}});
  double k = 1e300;
  for (int i = 0; i < 200000; ++i) {
    const double x = 2 * kPi * i / 200000;
    k = std::min(k, std::abs(h.derivative(1, x)) + std::abs(h.derivative(2, x)));
  }
  const TrigPotential g = h.separable_sum();
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto x = random_config(rng, 1 + rep % 6);
    EXPECT_GE(morse_margin(g, x), k - 1e-6);
  }
}

TEST(HessianEstimates, Examples) {
  const HessianEstimateReport r = verify_hessian_estimates(cos_sum(), 5, 1000);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.max_gradient_ratio, 1.0);
  EXPECT_LE(r.max_hessian_ratio, 1.0);
  EXPECT_FALSE(r.witness.has_value());

  const HessianEstimateReport zero = verify_hessian_estimates(TrigPotential{}, 3, 10);
  EXPECT_TRUE(zero.vacuous);
  EXPECT_TRUE(zero.passed());

  const HessianEstimateReport small = verify_hessian_estimates(TrigPotential({{1, 1, 0.05, 0.0}}), 3, 1000);
  EXPECT_TRUE(small.passed());
  EXPECT_LE(small.max_gradient_ratio, 1.0);
  EXPECT_LE(small.max_hessian_ratio, 1.0);
}

TEST(HessianEstimates, DeterministicForSeed) {
  const auto a = verify_hessian_estimates(perturbed(), 4, 200, 5);
  const auto b = verify_hessian_estimates(perturbed(), 4, 200, 5);
  EXPECT_EQ(a.max_gradient_ratio, b.max_gradient_ratio);
  EXPECT_EQ(a.max_hessian_ratio, b.max_hessian_ratio);
}

TEST(TorusDistance, WrapsCoordinates) {
  EXPECT_NEAR(torus_distance(std::vector<double>{0.1, 0.0}, std::vector<double>{2 * kPi - 0.1, 0.0}), 0.2, 1e-14);
  EXPECT_NEAR(wrap_angle(-0.5), 2 * kPi - 0.5, 1e-15);
}

}  // namespace
