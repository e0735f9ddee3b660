#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "lattice/critical_counting.hpp"
#include "lattice/potentials.hpp"

namespace lattice {

using BigInt = boost::multiprecision::cpp_int;

/// A Morse function h on the circle with its critical points and a
/// certified lower bound on K = inf_x (|h'(x)| + |h''(x)|).
struct BaseMorse {
  TrigPolynomial1D h;
  std::vector<double> critical_points;
  int crit_count = 0;
  double k_lower = 0.0;       // certified: grid minimum minus Lipschitz slack
  double k_sample_min = 0.0;  // plain grid minimum
  double slack = 0.0;
  int grid_points = 0;
};

/// Finds the critical points of h, checks they are nondegenerate, and
/// bounds K from below. Throws NotMorse or NonPositiveK.
BaseMorse analyze_base(const TrigPolynomial1D& h, int grid_points = 1 << 16);

struct MorseCertificate {
  BaseMorse base;
  TrigPotential difference;  // f - g, with g(x, y) = h(x) + h(y)
  double gradient_bound = 0.0;  // coefficient bound on ||grad (f - g)||
  double hessian_bound = 0.0;   // coefficient bound on ||grad^2 (f - g)||
  double bound = 0.0;           // 2 gradient_bound + 5 hessian_bound
  double gap = 0.0;             // K_lower - bound
  bool valid = false;
  // Grid-sampled sup-norms of the same quantities (underestimates), kept as
  // a sharpness diagnostic next to the rigorous bound.
  double sampled_gradient = 0.0;
  double sampled_hessian = 0.0;
  double sampled_bound = 0.0;

  /// d^(n+1)
  BigInt predicted_count(int n) const;
};

/// Checks 2 ||grad(f - g)|| + 5 ||grad^2(f - g)|| < K with coefficient-sum
/// norms. A valid certificate means every f_n is Morse with exactly
/// d^(n+1) critical points.
MorseCertificate certify(const TrigPotential& f, const BaseMorse& base, int sharpness_grid = 256);

struct HomotopyReport {
  std::vector<double> ts;
  std::vector<std::size_t> counts;
  std::vector<double> gaps;
  std::vector<bool> saturated;
};

/// For t on a uniform grid of [0, 1], certifies t g + (1 - t) f and counts
/// its critical points at level n. Throws ValidationError for an invalid
/// certificate and CountJump when consecutive counts differ.
HomotopyReport homotopy_check(const TrigPotential& f, const BaseMorse& base, int n, int steps,
                              const NewtonOptions& newton = {});

}  // namespace lattice
