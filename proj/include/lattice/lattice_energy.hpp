#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lattice/potentials.hpp"
#include "lattice/tridiag.hpp"

namespace lattice {

/// Anything that can report value and derivatives up to order two at a pair
/// of neighbouring sites.
template <typename P>
concept PairPotential = requires(const P& p, double x, double y) {
  { p.jet(x, y) } -> std::same_as<PairJet>;
};

enum class LatticeMode { torus, line };

/// Configuration (x_0, ..., x_n) of an n+1 site chain.
///
/// Torus coordinates are stored as given (lifts); canonical() reduces them to
/// [0, 2 pi). Arithmetic always works on the lift.
class LatticeConfig {
 public:
  LatticeConfig(std::vector<double> coords, LatticeMode mode);

  std::span<const double> coords() const { return coords_; }
  LatticeMode mode() const { return mode_; }
  int n() const { return static_cast<int>(coords_.size()) - 1; }

  LatticeConfig canonical() const;

 private:
  std::vector<double> coords_;
  LatticeMode mode_;
};

/// Reduces an angle to [0, 2 pi).
double wrap_angle(double x);

/// l-infinity distance between two chains, modulo 2 pi in each coordinate.
double torus_distance(std::span<const double> a, std::span<const double> b);

template <PairPotential P>
double energy(const P& pot, std::span<const double> x) {
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) e += pot.jet(x[i], x[i + 1]).v;
  return e;
}

template <PairPotential P>
std::vector<double> gradient(const P& pot, std::span<const double> x) {
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const PairJet j = pot.jet(x[i], x[i + 1]);
    g[i] += j.d1;
    g[i + 1] += j.d2;
  }
  return g;
}

template <PairPotential P>
TridiagHessian hessian(const P& pot, std::span<const double> x) {
  TridiagHessian h;
  h.diag.assign(x.size(), 0.0);
  h.offdiag.assign(x.size() > 0 ? x.size() - 1 : 0, 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const PairJet j = pot.jet(x[i], x[i + 1]);
    h.diag[i] += j.d11;
    h.diag[i + 1] += j.d22;
    h.offdiag[i] = j.d12;
  }
  return h;
}

/// Gradient and Hessian from a single pass over the bonds.
template <PairPotential P>
void gradient_and_hessian(const P& pot, std::span<const double> x, std::vector<double>& g,
                          TridiagHessian& h) {
  g.assign(x.size(), 0.0);
  h.diag.assign(x.size(), 0.0);
  h.offdiag.assign(x.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const PairJet j = pot.jet(x[i], x[i + 1]);
    g[i] += j.d1;
    g[i + 1] += j.d2;
    h.diag[i] += j.d11;
    h.diag[i + 1] += j.d22;
    h.offdiag[i] = j.d12;
  }
}

template <PairPotential P>
double energy(const P& pot, const LatticeConfig& cfg) {
  return energy(pot, cfg.coords());
}

template <PairPotential P>
std::vector<double> gradient(const P& pot, const LatticeConfig& cfg) {
  return gradient(pot, cfg.coords());
}

template <PairPotential P>
TridiagHessian hessian(const P& pot, const LatticeConfig& cfg) {
  return hessian(pot, cfg.coords());
}

double max_abs(std::span<const double> v);

/// max_i |d f_n / d x_i| + min |eigenvalue of the Hessian|.
template <PairPotential P>
double morse_margin(const P& pot, std::span<const double> x) {
  return max_abs(gradient(pot, x)) + min_abs_eigenvalue(hessian(pot, x));
}

template <PairPotential P>
double morse_margin(const P& pot, const LatticeConfig& cfg) {
  return morse_margin(pot, cfg.coords());
}

struct HessianEstimateReport {
  int n = 0;
  int trials = 0;
  double gradient_sup = 0.0;  // coefficient bound on ||grad f||
  double hessian_sup = 0.0;   // coefficient bound on ||grad^2 f||
  double max_gradient_ratio = 0.0;  // max_i |d_i f_n| / (2 ||grad f||)
  double max_hessian_ratio = 0.0;   // ||Hess u|| / (5 ||grad^2 f|| ||u||)
  bool vacuous = false;             // f has no gradient/Hessian at all
  int violations = 0;
  std::optional<std::vector<double>> witness;

  bool passed() const { return violations == 0; }
};

/// Random-sampling check of the bounds
///   max_i |d f_n / d x_i| <= 2 ||grad f||_inf,
///   ||Hess f_n u|| <= 5 ||grad^2 f||_inf ||u||.
/// Sup-norms come from coefficient sums.
HessianEstimateReport verify_hessian_estimates(const TrigPotential& f, int n, int trials,
                                               std::uint64_t seed = 1);

}  // namespace lattice
