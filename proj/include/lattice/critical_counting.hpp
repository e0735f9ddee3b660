#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lattice/errors.hpp"
#include "lattice/lattice_energy.hpp"
#include "lattice/potentials.hpp"
#include "lattice/twist_map.hpp"

namespace lattice {

inline constexpr double kPolishTolerance = 1e-9;
inline constexpr double kDegeneracyThreshold = 1e-8;
inline constexpr double kDedupDistance = 1e-6;

enum class CountMethod { shooting, newton };

std::string to_string(CountMethod m);

struct CriticalPoint {
  LatticeConfig config;
  double grad_norm = 0.0;  // max_i |d_i f_n|
  std::optional<int> morse_index;  // empty when the Hessian is singular to 1e-10
  double min_abs_eig = 0.0;
  // |d y_n / d x_0| at the shooting zero; empty for Newton points.
  std::optional<double> transversality;

  bool nondegenerate() const { return min_abs_eig > kDegeneracyThreshold; }
};

struct CountReport {
  int n = 0;
  CountMethod method = CountMethod::newton;
  std::size_t count = 0;  // verified, nondegenerate points
  std::vector<CriticalPoint> points;
  double resolution = 0.0;  // finest sampling step (shooting) or start-grid spacing (Newton)
  bool degenerate_flag = false;
  // Newton: the jittered second pass found nothing new. Shooting: two
  // consecutive refinement levels agreed on the sign-change count.
  bool saturated = false;
  std::size_t samples = 0;  // profile evaluations or Newton starts
  int refinement_levels = 0;
};

/// y_n ≡ 0 on a sampled subinterval: the axis is mapped into itself and
/// the critical set is not a finite set of points. Carries what was found.
class DegenerateFamily : public NumericalError {
 public:
  DegenerateFamily(const std::string& what, CountReport partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const CountReport& partial() const { return partial_; }

 private:
  CountReport partial_;
};

struct ShootingProfile {
  double y_n = 0.0;
  double dy_dx0 = 0.0;
};

/// Iterates F n times from (x0, 0), carrying d/dx0 through the Jacobians.
ShootingProfile shooting_profile(const TwistMap& map, int n, double x0);

/// (x_0, ..., x_n) of the orbit of (x0, 0).
std::vector<double> shooting_orbit(const TwistMap& map, int n, double x0);

/// Half-open window [lo, hi) for x_0. Membership allows 1e-9 of slack so
/// that a zero polished to -1e-17 still counts as 0.
struct Window {
  double lo = 0.0;
  double hi = 6.283185307179586;

  bool contains(double x) const { return x >= lo - 1e-9 && x < hi - 1e-9; }
};

struct ShootingOptions {
  int samples_init = 64;
  int max_levels = 24;
};

/// Critical points of H_n with x_0 in the window, as zeros of x0 -> y_n(x0).
/// Throws DegenerateFamily when y_n vanishes identically on a subinterval.
CountReport count_by_shooting(const TwistMap& map, int n, Window window, const ShootingOptions& options = {});

struct NewtonOptions {
  int starts_per_dim = 4;
  std::uint64_t seed = 1;
  int max_iterations = 60;
  bool jitter_pass = true;  // second, jittered grid used to detect saturation
};

/// Multistart damped Newton on grad f_n = 0 over the torus (S^1)^{n+1}.
CountReport count_by_newton(const TrigPotential& f, int n, const NewtonOptions& options = {});

struct LineNewtonOptions {
  Window window;
  int x0_starts = 50;        // starts along x_0 in the window
  int starts_per_dim = 12;   // starts along each other coordinate
  double half_width = 8.0;   // other coordinates start in [-half_width, half_width]
  std::uint64_t seed = 1;
  int max_iterations = 60;
  bool jitter_pass = false;
};

/// Multistart damped Newton on grad H_n = 0 in R^{n+1}; keeps the points
/// with x_0 in the window. Brute-force reference for count_by_shooting.
CountReport count_by_newton_line(const GeneratingFunction& h, int n, const LineNewtonOptions& options = {});

/// Number of negative eigenvalues. Throws Degenerate when min |lambda| <= 1e-10.
int morse_index(const TridiagHessian& h);

/// Least-squares slope of log(count) against n + 1.
double growth_rate(std::span<const CountReport> reports);
double growth_rate(std::span<const int> ns, std::span<const double> counts);

}  // namespace lattice
