#include "lattice/lattice_energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lattice/errors.hpp"

namespace lattice {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LatticeConfig::LatticeConfig(std::vector<double> coords, LatticeMode mode)
    : coords_(std::move(coords)), mode_(mode) {
  if (coords_.size() < 2) throw ValidationError("lattice configuration needs at least two sites");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ValidationError("lattice configuration has a non-finite coordinate");
  }
}

LatticeConfig LatticeConfig::canonical() const {
  if (mode_ == LatticeMode::line) return *this;
  std::vector<double> out(coords_);
  for (double& c : out) c = wrap_angle(c);
  return LatticeConfig(std::move(out), mode_);
}

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double torus_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = wrap_angle(a[i] - b[i]);
    diff = std::min(diff, kTwoPi - diff);
    d = std::max(d, diff);
  }
  return d;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

HessianEstimateReport verify_hessian_estimates(const TrigPotential& f, int n, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw ValidationError("verify_hessian_estimates needs trials >= 1");
  if (n < 1) throw ValidationError("verify_hessian_estimates needs n >= 1");

  HessianEstimateReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.gradient_sup = gradient_sup_bound(f);
  rep.hessian_sup = hessian_sup_bound(f);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const std::size_t m = static_cast<std::size_t>(n) + 1;
  std::vector<double> x(m);
  std::vector<double> u(m);
  bool any_nonzero = false;
  for (int t = 0; t < trials; ++t) {
    for (auto& c : x) c = angle(rng);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& c : u) {
        c = gauss(rng);
        norm += c * c;
      }
      norm = std::sqrt(norm);
    } while (norm == 0.0);
    for (auto& c : u) c /= norm;

    const double gmax = max_abs(gradient(f, x));
    const auto hu = tridiag_apply(hessian(f, x), u);
    double hu_norm = 0.0;
    for (double c : hu) hu_norm += c * c;
    hu_norm = std::sqrt(hu_norm);
    if (gmax > 0.0 || hu_norm > 0.0) any_nonzero = true;

    // zero numerator over zero bound counts as ratio 0
    const double gr = gmax == 0.0 ? 0.0 : gmax / (2.0 * rep.gradient_sup);
    const double hr = hu_norm == 0.0 ? 0.0 : hu_norm / (5.0 * rep.hessian_sup);
    rep.max_gradient_ratio = std::max(rep.max_gradient_ratio, gr);
    rep.max_hessian_ratio = std::max(rep.max_hessian_ratio, hr);
    if (gr > 1.0 || hr > 1.0) {
      ++rep.violations;
      if (!rep.witness) rep.witness = x;
    }
  }
  rep.vacuous = !any_nonzero && rep.gradient_sup == 0.0 && rep.hessian_sup == 0.0;
  return rep;
}

}  // namespace lattice
