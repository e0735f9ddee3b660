#pragma once

#include <cstddef>
#include <vector>

#include "lattice/potentials.hpp"
#include "lattice/twist_map.hpp"

namespace lattice {

/// Parameters of the homoclinic-tangency construction. G equals
///   (x^2 + y^2)^2                              on the annulus | |q| - 2 | <= delta,
///   y^2 + (x - 1)^2 (x - (1 + delta))          on the disk |q - p0| <= 2 delta,
/// with p0 = (1, 0), is cut off smoothly over blend_width outside those sets,
/// and is extended (2 pi Z)^2-periodically.
struct ConstructionParams {
  double delta = 1.0 / 6.0;
  double T = 0.05;
  double blend_width = 1.0 / 12.0;

  static ConstructionParams with_delta(double delta, double T = 0.05) { return {delta, T, 0.5 * delta}; }
  void validate() const;
};

inline constexpr Point2 kP0{1.0, 0.0};

double eval_G(const ConstructionParams& params, Point2 p);
Point2 grad_G(const ConstructionParams& params, Point2 p);

/// X_G = (d2 G, -d1 G)
Point2 hamiltonian_field(const ConstructionParams& params, Point2 p);

struct FlowState {
  Point2 point;
  double time = 0.0;
};

struct FlowOptions {
  double tolerance = 1e-13;  // absolute and relative error per step
  // The cut-offs are smooth but not analytic at the edge of their support;
  // unbounded steps across that edge fool the embedded error estimate.
  double max_step = 2e-3;
  double max_abs_time = 1e3;
  std::size_t max_steps = 2'000'000;
};

/// Advances the state by t along X_G (t may be negative). Adaptive
/// Runge-Kutta-Fehlberg 7(8). Throws StepFailure when the step controller
/// gives up or the step budget is exhausted.
FlowState flow(const ConstructionParams& params, FlowState state, double t, const FlowOptions& options = {});

/// F0 = Theta o Psi_T
Point2 F0(const ConstructionParams& params, Point2 p);
/// F0^{-1} = Psi_{-T} o Theta^{-1}
Point2 F0_inverse(const ConstructionParams& params, Point2 p);
/// F0^k for k >= 0
Point2 F0_power(const ConstructionParams& params, Point2 p, int k);
PlanarMap F0_map(const ConstructionParams& params);

struct HyperbolicityReport {
  Matrix2 jacobian{};         // D(F0^4) at p0, central differences
  double lambda = 0.0;        // expanding eigenvalue
  double lambda_inv = 0.0;    // contracting eigenvalue
  double product = 0.0;       // lambda * lambda_inv
  double predicted_lambda = 0.0;  // exp(2 sqrt(delta) T) from the linearisation of X_G
  Point2 unstable_direction;
  Point2 stable_direction;
  double fd_step = 0.0;
};

/// Throws NotHyperbolic when the eigenvalues are complex or |lambda| - 1 < 1e-6.
HyperbolicityReport hyperbolicity_report(const ConstructionParams& params, double fd_step = 1e-4);

/// Points of {y^2 + (x-1)^2 (x-(1+delta)) = 0, x >= 1}: both branches over
/// `samples` x values in (1, 1 + delta].
std::vector<Point2> homoclinic_curve_samples(const ConstructionParams& params, int samples);

struct CurveCheckReport {
  int samples = 0;
  double flow_time = 0.0;
  double max_level_residual = 0.0;       // max |G| on the curve samples
  double max_invariance_residual = 0.0;  // max |G(Psi_t(q))| after flowing
  bool meets_axis = false;
  Point2 axis_crossing;
  double axis_crossing_slope = 0.0;  // d1 G at the crossing; nonzero means transverse to the axis
  std::vector<Point2> off_level_points;  // extra points found off the zero level set
};

/// Verifies G = 0 on the curve and that the flow keeps curve points on the
/// zero level. `extra` points are classified (on/off the level set) rather
/// than treated as violations. Throws InvarianceViolation with a witness.
CurveCheckReport homoclinic_curve_check(const ConstructionParams& params, int samples,
                                        const std::vector<Point2>& extra = {}, double flow_time = 1.0);

struct LambdaCount {
  int n = 0;
  std::size_t count = 0;         // at 2 * window_samples
  std::size_t coarse_count = 0;  // at window_samples
  bool stable = false;
  std::vector<double> zeros;     // x0 of the counted intersections
};

/// Counts x0 in (-R, R) with y-component of F^n(x0, 0) equal to zero,
/// transversally, and with F^m(x0, 0) in the open disk of radius R for
/// m = 0..n. Throws DegenerateFamily when the profile vanishes on a
/// sampled subinterval.
LambdaCount lambda_n_count(const PlanarMap& f, double radius, int n, int window_samples);

/// Polyline through a piece of the (un)stable manifold of p0 for F0^4,
/// grown from the local eigendirection.
std::vector<Point2> manifold_segment(const ConstructionParams& params, bool unstable, int points_per_domain = 20,
                                     int max_iterations = 150, double seed_distance = 1e-4);

}  // namespace lattice
