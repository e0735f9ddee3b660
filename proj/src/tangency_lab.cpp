#include "lattice/tangency_lab.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lattice/critical_counting.hpp"
#include "lattice/errors.hpp"

namespace lattice {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kPi = std::numbers::pi;

// C^infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double smooth_step_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  const double ab = a * b;
  return (ab / (s * s) + ab / ((1.0 - s) * (1.0 - s))) / ((a + b) * (a + b));
}

// Representative in [-pi, pi).
double reduce(double v) { return v - 2.0 * kPi * std::floor((v + kPi) / (2.0 * kPi)); }

struct Pieces {
  double x, y;
  double r, rho;
  double annulus_cut, disk_cut;  // cut-off values
};

Pieces pieces(const ConstructionParams& prm, Point2 p) {
  Pieces q{};
  q.x = reduce(p.x);
  q.y = reduce(p.y);
  q.r = std::hypot(q.x, q.y);
  q.rho = std::hypot(q.x - 1.0, q.y);
  q.annulus_cut = 1.0 - smooth_step((std::abs(q.r - 2.0) - prm.delta) / prm.blend_width);
  q.disk_cut = 1.0 - smooth_step((q.rho - 2.0 * prm.delta) / prm.blend_width);
  return q;
}

double disk_formula(double x, double y, double delta) {
  const double u = x - 1.0;
  return y * y + u * u * (u - delta);
}

}  // namespace

void ConstructionParams::validate() const {
  if (!(delta > 0.0) || !(blend_width > 0.0) || !std::isfinite(T)) {
    throw ValidationError("construction needs delta > 0, blend_width > 0 and finite T");
  }
}

double eval_G(const ConstructionParams& params, Point2 p) {
  const Pieces q = pieces(params, p);
  double g = 0.0;
  if (q.annulus_cut > 0.0) {
    const double r2 = q.x * q.x + q.y * q.y;
    g += q.annulus_cut * r2 * r2;
  }
  if (q.disk_cut > 0.0) g += q.disk_cut * disk_formula(q.x, q.y, params.delta);
  return g;
}

Point2 grad_G(const ConstructionParams& params, Point2 p) {
  const Pieces q = pieces(params, p);
  Point2 g{0.0, 0.0};
  if (q.annulus_cut > 0.0) {
    const double r2 = q.x * q.x + q.y * q.y;
    g.x += q.annulus_cut * 4.0 * r2 * q.x;
    g.y += q.annulus_cut * 4.0 * r2 * q.y;
    const double s = (std::abs(q.r - 2.0) - params.delta) / params.blend_width;
    const double dcut = -smooth_step_derivative(s) * (q.r >= 2.0 ? 1.0 : -1.0) / params.blend_width;
    if (dcut != 0.0) {
      g.x += dcut * r2 * r2 * q.x / q.r;
      g.y += dcut * r2 * r2 * q.y / q.r;
    }
  }
  if (q.disk_cut > 0.0) {
    const double u = q.x - 1.0;
    g.x += q.disk_cut * (2.0 * u * (u - params.delta) + u * u);
    g.y += q.disk_cut * 2.0 * q.y;
    const double s = (q.rho - 2.0 * params.delta) / params.blend_width;
    const double dcut = -smooth_step_derivative(s) / params.blend_width;
    if (dcut != 0.0) {
      const double val = disk_formula(q.x, q.y, params.delta);
      g.x += dcut * val * u / q.rho;
      g.y += dcut * val * q.y / q.rho;
    }
  }
  return g;
}

Point2 hamiltonian_field(const ConstructionParams& params, Point2 p) {
  const Point2 g = grad_G(params, p);
  return {g.y, -g.x};
}

FlowState flow(const ConstructionParams& params, FlowState state, double t, const FlowOptions& options) {
  if (!std::isfinite(t) || std::abs(t) > options.max_abs_time) {
    std::ostringstream msg;
    msg << "flow time " << t << " outside the configured cap " << options.max_abs_time;
    throw ValidationError(msg.str());
  }
  if (t == 0.0) return state;
  {
    // the field vanishes at the start point only outside supp(G), where the
    // orbit is stationary
    const Point2 v = hamiltonian_field(params, state.point);
    if (v.x == 0.0 && v.y == 0.0) {
      state.time += t;
      return state;
    }
  }

  auto system = [&params](const State& s, State& ds, double) {
    const Point2 v = hamiltonian_field(params, {s[0], s[1]});
    ds[0] = v.x;
    ds[1] = v.y;
  };
  auto stepper = odeint::make_controlled(options.tolerance, options.tolerance,
                                         odeint::runge_kutta_fehlberg78<State>());
  State s{state.point.x, state.point.y};
  const double sign = t > 0.0 ? 1.0 : -1.0;
  double now = 0.0;
  double dt = sign * std::min(std::abs(t), 1e-3);
  std::size_t steps = 0;
  int failures = 0;
  while (sign * (t - now) > 0.0) {
    if (std::abs(dt) > options.max_step) dt = sign * options.max_step;
    if (sign * (now + dt - t) > 0.0) dt = t - now;
    const auto result = stepper.try_step(system, s, now, dt);
    if (result == odeint::success) {
      failures = 0;
      if (++steps > options.max_steps) throw StepFailure("flow: step budget exhausted");
    } else if (++failures > 500 || std::abs(dt) < 1e-14) {
      std::ostringstream msg;
      msg << "flow: step size control failed near (" << s[0] << ", " << s[1] << ") at time " << now;
      throw StepFailure(msg.str());
    }
  }
  return {{s[0], s[1]}, state.time + t};
}

Point2 F0(const ConstructionParams& params, Point2 p) {
  return theta_map(flow(params, {p, 0.0}, params.T).point);
}

Point2 F0_inverse(const ConstructionParams& params, Point2 p) {
  const Point2 q{-p.y, p.x};  // Theta^{-1}
  return flow(params, {q, 0.0}, -params.T).point;
}

Point2 F0_power(const ConstructionParams& params, Point2 p, int k) {
  for (int i = 0; i < k; ++i) p = F0(params, p);
  return p;
}

PlanarMap F0_map(const ConstructionParams& params) {
  return [params](Point2 p) { return F0(params, p); };
}

HyperbolicityReport hyperbolicity_report(const ConstructionParams& params, double fd_step) {
  params.validate();
  HyperbolicityReport rep;
  rep.fd_step = fd_step;
  rep.predicted_lambda = std::exp(2.0 * std::sqrt(params.delta) * params.T);
  rep.jacobian = finite_difference_jacobian([&](Point2 p) { return F0_power(params, p, 4); }, kP0, fd_step);

  const auto& j = rep.jacobian;
  const double tr = j[0][0] + j[1][1];
  const double dt = det(j);
  const double disc = 0.25 * tr * tr - dt;
  if (disc < 0.0) {
    throw NotHyperbolic("D(F0^4) at p0 has complex eigenvalues (elliptic fixed point)", std::sqrt(std::abs(dt)));
  }
  const double root = std::sqrt(disc);
  const double l1 = 0.5 * tr + root;
  const double l2 = 0.5 * tr - root;
  const bool first = std::abs(l1) >= std::abs(l2);
  rep.lambda = first ? l1 : l2;
  rep.lambda_inv = first ? l2 : l1;
  rep.product = rep.lambda * rep.lambda_inv;
  if (std::abs(rep.lambda) - 1.0 < 1e-6) {
    std::ostringstream msg;
    msg << "p0 is not hyperbolic: |lambda| - 1 = " << std::abs(rep.lambda) - 1.0;
    throw NotHyperbolic(msg.str(), rep.lambda);
  }
  auto eigvec = [&](double lam) {
    // (J - lam I) v = 0
    Point2 v = std::abs(j[0][1]) > std::abs(j[1][0]) ? Point2{j[0][1], lam - j[0][0]}
                                                     : Point2{lam - j[1][1], j[1][0]};
    const double n = std::hypot(v.x, v.y);
    if (n == 0.0) return v;
    const double sgn = v.x < 0.0 ? -1.0 : 1.0;  // point into x > 1
    return Point2{sgn * v.x / n, sgn * v.y / n};
  };
  rep.unstable_direction = eigvec(rep.lambda);
  rep.stable_direction = eigvec(rep.lambda_inv);
  return rep;
}

std::vector<Point2> homoclinic_curve_samples(const ConstructionParams& params, int samples) {
  std::vector<Point2> pts;
  pts.reserve(2 * static_cast<std::size_t>(samples));
  const double d = params.delta;
  for (int i = 1; i <= samples; ++i) {
    const double x = 1.0 + d * i / samples;
    const double u = x - 1.0;
    const double y = u * std::sqrt(std::max(0.0, 1.0 + d - x));
    pts.push_back({x, y});
    if (y != 0.0) pts.push_back({x, -y});
  }
  return pts;
}

CurveCheckReport homoclinic_curve_check(const ConstructionParams& params, int samples,
                                        const std::vector<Point2>& extra, double flow_time) {
  params.validate();
  if (samples < 10) throw ValidationError("homoclinic_curve_check needs samples >= 10");
  CurveCheckReport rep;
  rep.samples = samples;
  rep.flow_time = flow_time;

  auto pts = homoclinic_curve_samples(params, samples);
  pts.push_back(kP0);
  for (const auto& p : pts) {
    rep.max_level_residual = std::max(rep.max_level_residual, std::abs(eval_G(params, p)));
    const Point2 q = flow(params, {p, 0.0}, flow_time).point;
    const double res = std::abs(eval_G(params, q));
    rep.max_invariance_residual = std::max(rep.max_invariance_residual, res);
    if (res > 1e-8 || q.x < 1.0 - 1e-8) {
      std::ostringstream msg;
      msg << "flow leaves the homoclinic curve: start (" << p.x << ", " << p.y << "), |G| after flow " << res;
      throw InvarianceViolation(msg.str(), p.x, p.y, res);
    }
  }

  rep.axis_crossing = {1.0 + params.delta, 0.0};
  rep.axis_crossing_slope = grad_G(params, rep.axis_crossing).x;
  rep.meets_axis = std::abs(eval_G(params, rep.axis_crossing)) <= 1e-14 && rep.axis_crossing_slope != 0.0;

  for (const auto& p : extra) {
    if (std::abs(eval_G(params, p)) > 1e-10) rep.off_level_points.push_back(p);
  }
  return rep;
}

namespace {

struct AxisSample {
  double x0 = 0.0;
  double y = 0.0;
  bool confined = false;
};

AxisSample axis_orbit(const PlanarMap& f, double radius, int n, double x0) {
  AxisSample s{x0, 0.0, std::abs(x0) < radius};
  Point2 p{x0, 0.0};
  for (int m = 0; m < n; ++m) {
    p = f(p);
    if (std::hypot(p.x, p.y) >= radius) s.confined = false;
  }
  s.y = p.y;
  return s;
}

std::vector<double> axis_zeros(const PlanarMap& f, double radius, int n, int samples) {
  std::vector<AxisSample> grid;
  grid.reserve(static_cast<std::size_t>(samples) + 1);
  for (int k = 0; k <= samples; ++k) {
    grid.push_back(axis_orbit(f, radius, n, -radius + 2.0 * radius * k / samples));
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto& a = grid[i];
    const auto& b = grid[i + 1];
    if (a.confined && b.confined && std::abs(a.y) <= 1e-12 && std::abs(b.y) <= 1e-12) {
      std::ostringstream msg;
      msg << "y_" << n << " vanishes on [" << a.x0 << ", " << b.x0 << "]: axis mapped into itself";
      CountReport partial;
      partial.n = n;
      partial.degenerate_flag = true;
      throw DegenerateFamily(msg.str(), partial);
    }
  }

  std::vector<double> zeros;
  auto y_of = [&](double x) { return axis_orbit(f, radius, n, x).y; };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& a = grid[i];
    if (!a.confined) continue;
    if (a.y == 0.0) {
      zeros.push_back(a.x0);
      continue;
    }
    if (i + 1 == grid.size()) break;
    const auto& b = grid[i + 1];
    if (!b.confined || a.y * b.y >= 0.0) continue;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(y_of, a.x0, b.x0, a.y, b.y,
                                                     boost::math::tools::eps_tolerance<double>(50), iters);
    zeros.push_back(0.5 * (r.first + r.second));
  }

  // transverse and confined at the root itself
  std::vector<double> kept;
  for (double z : zeros) {
    if (!axis_orbit(f, radius, n, z).confined) continue;
    const double h = 1e-6;
    const double slope = (y_of(z + h) - y_of(z - h)) / (2.0 * h);
    if (std::abs(slope) > kDegeneracyThreshold) kept.push_back(z);
  }
  return kept;
}

}  // namespace

LambdaCount lambda_n_count(const PlanarMap& f, double radius, int n, int window_samples) {
  if (n < 1) throw ValidationError("lambda_n_count needs n >= 1");
  if (!(radius > 0.0)) throw ValidationError("lambda_n_count needs a positive radius");
  if (window_samples < 4) throw ValidationError("lambda_n_count needs window_samples >= 4");
  LambdaCount out;
  out.n = n;
  out.coarse_count = axis_zeros(f, radius, n, window_samples).size();
  out.zeros = axis_zeros(f, radius, n, 2 * window_samples);
  out.count = out.zeros.size();
  out.stable = out.count == out.coarse_count;
  return out;
}

std::vector<Point2> manifold_segment(const ConstructionParams& params, bool unstable, int points_per_domain,
                                     int max_iterations, double seed_distance) {
  const auto hyp = hyperbolicity_report(params);
  const Point2 dir = unstable ? hyp.unstable_direction : hyp.stable_direction;
  const double factor = std::abs(hyp.lambda);
  std::vector<Point2> domain;
  for (int i = 0; i < points_per_domain; ++i) {
    const double s = seed_distance * std::pow(factor, static_cast<double>(i) / points_per_domain);
    domain.push_back({kP0.x + s * dir.x, kP0.y + s * dir.y});
  }
  std::vector<Point2> out(domain);
  const double escape = 2.0 * params.delta + params.blend_width;
  for (int it = 0; it < max_iterations; ++it) {
    bool inside = false;
    for (auto& p : domain) {
      for (int k = 0; k < 4; ++k) p = unstable ? F0(params, p) : F0_inverse(params, p);
      out.push_back(p);
      inside = inside || std::hypot(p.x - kP0.x, p.y - kP0.y) < escape;
    }
    if (!inside) break;
  }
  return out;
}

}  // namespace lattice
