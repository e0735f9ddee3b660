#include "lattice/twist_map.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "lattice/errors.hpp"

namespace lattice {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kRootTolerance = 1e-12;

// Root of a strictly increasing function on [lo, hi], with derivative.
// eval(t) returns {value, derivative}.
template <typename Eval>
double monotone_newton(Eval eval, double lo, double hi, double guess) {
  double t = std::clamp(guess, lo, hi);
  for (int it = 0; it < kMaxIterations; ++it) {
    const auto [v, dv] = eval(t);
    if (std::abs(v) <= kRootTolerance) return t;
    if (v > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) return t;
    double next = dv > 0.0 ? t - v / dv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  std::ostringstream msg;
  msg << "monotone root solve did not reach tolerance " << kRootTolerance << " in " << kMaxIterations
      << " iterations";
  throw NonConvergence(msg.str());
}

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

double gauss5(const std::function<double(double)>& g, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGaussWeights[i] * g(mid + half * kGaussNodes[i]);
  return half * s;
}

double gauss5_recursive(const std::function<double(double)>& g, double a, double b, double whole,
                        double tol, int depth, double& err) {
  const double mid = 0.5 * (a + b);
  const double left = gauss5(g, a, mid);
  const double right = gauss5(g, mid, b);
  const double diff = std::abs(left + right - whole);
  if (diff <= tol || depth >= 30) {
    err += diff;
    return left + right;
  }
  return gauss5_recursive(g, a, mid, left, 0.5 * tol, depth + 1, err) +
         gauss5_recursive(g, mid, b, right, 0.5 * tol, depth + 1, err);
}

// Integrals from 0 to every node.
std::vector<double> cumulative_from_zero(const std::function<double(double)>& g,
                                         const std::vector<double>& nodes, double tol,
                                         std::vector<double>& errs) {
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) order.emplace_back(nodes[i], i);
  std::sort(order.begin(), order.end());

  std::vector<double> out(nodes.size(), 0.0);
  errs.assign(nodes.size(), 0.0);

  // positive side, walking outwards from zero
  double acc = 0.0;
  double acc_err = 0.0;
  double prev = 0.0;
  for (const auto& [t, idx] : order) {
    if (t < 0.0) continue;
    if (t > prev) acc += gauss5_adaptive(g, prev, t, tol, acc_err);
    prev = t;
    out[idx] = acc;
    errs[idx] = acc_err;
  }
  acc = 0.0;
  acc_err = 0.0;
  prev = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto [t, idx] = *it;
    if (t >= 0.0) continue;
    acc -= gauss5_adaptive(g, t, prev, tol, acc_err);
    prev = t;
    out[idx] = acc;
    errs[idx] = acc_err;
  }
  return out;
}

}  // namespace

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = lhs[i][0] * rhs[0][j] + lhs[i][1] * rhs[1][j];
  }
  return out;
}

Matrix2 finite_difference_jacobian(const PlanarMap& f, Point2 p, double step) {
  const Point2 xp = f({p.x + step, p.y});
  const Point2 xm = f({p.x - step, p.y});
  const Point2 yp = f({p.x, p.y + step});
  const Point2 ym = f({p.x, p.y - step});
  const double inv = 0.5 / step;
  return {{{(xp.x - xm.x) * inv, (yp.x - ym.x) * inv}, {(xp.y - xm.y) * inv, (yp.y - ym.y) * inv}}};
}

TwistMap::TwistMap(GeneratingFunction h) : h_(std::move(h)) {
  margin_ = lattice::twist_margin(h_);
  if (margin_ <= 0.0) {
    const double sampled = sampled_twist_minimum(h_);
    if (!(sampled > 0.0)) {
      std::ostringstream msg;
      msg << "twist condition fails: coefficient margin " << margin_ << ", sampled min d1d2H "
          << sampled;
      throw TwistViolation(msg.str());
    }
  }
  d1_bound_ = h_.periodic_part().sup_norm_bound({1, 0});
  d2_bound_ = h_.periodic_part().sup_norm_bound({0, 1});
}

double TwistMap::solve_forward(double x, double y) const {
  // d1 H(x, x') = x' + a + d1 P, |d1 P| <= d1_bound_
  const double centre = y - h_.a();
  const double pad = d1_bound_ + 1.0;
  return monotone_newton(
      [&](double xp) {
        const PairJet j = h_.jet(x, xp);
        return std::pair{j.d1 - y, j.d12};
      },
      centre - pad, centre + pad, centre);
}

double TwistMap::solve_backward(double xp, double target) const {
  // d2 H(x, x') = x + b + d2 P, |d2 P| <= d2_bound_
  const double centre = target - h_.b();
  const double pad = d2_bound_ + 1.0;
  return monotone_newton(
      [&](double x) {
        const PairJet j = h_.jet(x, xp);
        return std::pair{j.d2 - target, j.d12};
      },
      centre - pad, centre + pad, centre);
}

Point2 TwistMap::forward(Point2 p) const {
  const double xp = solve_forward(p.x, p.y);
  return {xp, -h_.jet(p.x, xp).d2};
}

Point2 TwistMap::forward(Point2 p, Matrix2& jac) const {
  const double xp = solve_forward(p.x, p.y);
  const PairJet j = h_.jet(p.x, xp);
  const double s = j.d12;
  jac = {{{-j.d11 / s, 1.0 / s}, {-s + j.d11 * j.d22 / s, -j.d22 / s}}};
  return {xp, -j.d2};
}

Point2 TwistMap::inverse(Point2 p) const {
  const double x = solve_backward(p.x, -p.y);
  return {x, h_.jet(x, p.x).d1};
}

Matrix2 TwistMap::jacobian(Point2 p) const {
  Matrix2 jac{};
  forward(p, jac);
  return jac;
}

double TwistMap::twist_derivative(Point2 p) const {
  const double xp = solve_forward(p.x, p.y);
  return 1.0 / h_.jet(p.x, xp).d12;
}

PlanarMap TwistMap::as_planar_map() const {
  return [self = *this](Point2 p) { return self.forward(p); };
}

double gauss5_adaptive(const std::function<double(double)>& g, double a, double b, double tol,
                       double& err) {
  if (a == b) return 0.0;
  return gauss5_recursive(g, a, b, gauss5(g, a, b), tol, 0, err);
}

RecoveredTable recover_generating(const PlanarMap& f, double c, const GridSpec& grid,
                                  const RecoverOptions& options) {
  if (grid.points < 2 || !(grid.hi > grid.lo)) throw ValidationError("recover_generating: bad grid");

  // g1(x, x'): the y with p1 F(x, y) = x'. Increasing in y by the twist
  // condition, and p1 F(x, y) - y is periodic, so an expanding bracket
  // around y = x' always closes.
  auto g1 = [&f](double x, double xp) {
    auto phi = [&](double y) { return f({x, y}).x - xp; };
    double w = 1.0;
    double lo = xp - w;
    double hi = xp + w;
    double flo = phi(lo);
    double fhi = phi(hi);
    int expand = 0;
    while (!(flo <= 0.0 && fhi >= 0.0)) {
      if (++expand > 60) throw NonConvergence("recover_generating: cannot bracket p1 F(x, .) = x'");
      w *= 2.0;
      if (flo > 0.0) {
        lo = xp - w;
        flo = phi(lo);
      }
      if (fhi < 0.0) {
        hi = xp + w;
        fhi = phi(hi);
      }
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(phi, lo, hi, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
  };
  auto g2 = [&f, &g1](double x, double xp) { return -f({x, g1(x, xp)}).y; };

  RecoveredTable table;
  const auto m = static_cast<std::size_t>(grid.points);
  table.xs.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    table.xs[i] = grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) / static_cast<double>(m - 1);
  }
  table.xps = table.xs;

  const double h = options.fd_step;
  for (double x : table.xs) {
    for (double xp : table.xps) {
      const double d1g2 = (g2(x + h, xp) - g2(x - h, xp)) / (2.0 * h);
      const double d2g1 = (g1(x, xp + h) - g1(x, xp - h)) / (2.0 * h);
      const double r = std::abs(d1g2 - d2g1);
      table.max_closedness_residual = std::max(table.max_closedness_residual, r);
      if (r > options.closedness_tolerance) {
        std::ostringstream msg;
        msg << "one-form g1 dx + g2 dx' is not closed at (" << x << ", " << xp << "): |d1 g2 - d2 g1| = " << r;
        throw ClosednessViolation(msg.str(), r, x, xp);
      }
    }
  }

  // along x' = 0 first, then along x' at fixed x
  std::vector<double> axis_err;
  const auto axis = cumulative_from_zero([&](double s) { return g1(s, 0.0); }, table.xs,
                                         options.panel_tolerance, axis_err);
  table.values.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = table.xs[i];
    std::vector<double> col_err;
    const auto col = cumulative_from_zero([&](double t) { return g2(x, t); }, table.xps,
                                          options.panel_tolerance, col_err);
    for (std::size_t j = 0; j < m; ++j) {
      table.values[i * m + j] = c + axis[i] + col[j];
      table.quadrature_error = std::max(table.quadrature_error, axis_err[i] + col_err[j]);
    }
  }
  return table;
}

}  // namespace lattice
