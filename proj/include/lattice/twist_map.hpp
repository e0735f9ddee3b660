#pragma once

#include <array>
#include <functional>
#include <vector>

#include "lattice/potentials.hpp"

namespace lattice {

using Matrix2 = std::array<std::array<double, 2>, 2>;

inline double det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs);

/// A planar map treated as a black box.
using PlanarMap = std::function<Point2(Point2)>;

/// Theta(x, y) = (y, -x)
inline Point2 theta_map(Point2 p) { return {p.y, -p.x}; }

/// Central finite-difference Jacobian of a black-box map.
Matrix2 finite_difference_jacobian(const PlanarMap& f, Point2 p, double step = 1e-5);

/// The area-preserving twist map generated by H:
///   (x', y') = F(x, y)  iff  y = d1 H(x, x'),  y' = -d2 H(x, x').
class TwistMap {
 public:
  /// Throws TwistViolation when the twist condition can neither be certified
  /// from coefficients nor confirmed on a dense sample grid.
  explicit TwistMap(GeneratingFunction h);

  const GeneratingFunction& source() const { return h_; }
  double twist_margin() const { return margin_; }
  /// True when twist_margin() > 0; false when only the sampled check passed.
  bool certified() const { return margin_ > 0.0; }

  Point2 forward(Point2 p) const;
  Point2 inverse(Point2 p) const;
  Matrix2 jacobian(Point2 p) const;

  /// Forward image together with the Jacobian at p.
  Point2 forward(Point2 p, Matrix2& jac) const;

  /// d2 (p1 o F) at p, i.e. 1 / d1 d2 H(x, x').
  double twist_derivative(Point2 p) const;

  PlanarMap as_planar_map() const;

 private:
  // x' with d1 H(x, x') = y
  double solve_forward(double x, double y) const;
  // x with d2 H(x, x') = target
  double solve_backward(double xp, double target) const;

  GeneratingFunction h_;
  double margin_ = 0.0;
  double d1_bound_ = 0.0;
  double d2_bound_ = 0.0;
};

struct GridSpec {
  double lo = -3.141592653589793;
  double hi = 3.141592653589793;
  int points = 50;
};

/// H reconstructed on a tensor grid: values[i * xs.size() + j] = H(xs[i], xps[j]).
struct RecoveredTable {
  std::vector<double> xs;
  std::vector<double> xps;
  std::vector<double> values;
  double quadrature_error = 0.0;  // sum of panel error estimates along the longest path
  double max_closedness_residual = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * xps.size() + j]; }
};

struct RecoverOptions {
  double closedness_tolerance = 1e-6;
  double panel_tolerance = 1e-8;
  double fd_step = 1e-4;
};

/// Rebuilds the generating function of a black-box twist map F on a grid,
/// normalised so that H(0, 0) = c. With
///   g1(x, x') = the y with p1 F(x, y) = x',   g2(x, x') = -p2 F(x, g1(x, x')),
/// H is the primitive of the closed form g1 dx + g2 dx', integrated along
/// axis-parallel paths from the origin. Throws ClosednessViolation when
/// d1 g2 - d2 g1 exceeds the tolerance at a grid point.
RecoveredTable recover_generating(const PlanarMap& f, double c, const GridSpec& grid = {},
                                  const RecoverOptions& options = {});

/// Adaptive composite 5-point Gauss-Legendre quadrature. Adds the accepted
/// panel error estimates to err.
double gauss5_adaptive(const std::function<double(double)>& g, double a, double b, double tol,
                       double& err);

}  // namespace lattice
