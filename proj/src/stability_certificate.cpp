#include "lattice/stability_certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lattice/errors.hpp"

namespace lattice {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Zero of h' in [a, b] given a sign change, Newton safeguarded by bisection.
double polish_critical(const TrigPolynomial1D& h, double a, double b) {
  double fa = h.derivative(1, a);
  double t = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double v = h.derivative(1, t);
    if (v == 0.0) return t;
    if ((v < 0.0) == (fa < 0.0)) {
      a = t;
      fa = v;
    } else {
      b = t;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) return t;
    const double d = h.derivative(2, t);
    double next = d != 0.0 ? t - v / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  return t;
}

}  // namespace

BaseMorse analyze_base(const TrigPolynomial1D& h, int grid_points) {
  if (grid_points < 16) throw ValidationError("analyze_base needs at least 16 grid points");
  if (h.sup_norm_bound(1) == 0.0) throw NotMorse("base function is constant");

  BaseMorse base;
  base.h = h;
  base.grid_points = grid_points;

  const double step = kTwoPi / grid_points;
  std::vector<double> d1(static_cast<std::size_t>(grid_points));
  double sample_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double x = i * step;
    d1[static_cast<std::size_t>(i)] = h.derivative(1, x);
    sample_min = std::min(sample_min, std::abs(d1[static_cast<std::size_t>(i)]) + std::abs(h.derivative(2, x)));
  }

  for (int i = 0; i < grid_points; ++i) {
    const double a = i * step;
    const double fa = d1[static_cast<std::size_t>(i)];
    const double fb = d1[static_cast<std::size_t>((i + 1) % grid_points)];
    double c = 0.0;
    if (fa == 0.0) {
      c = a;
    } else if (fa * fb < 0.0) {
      c = wrap_angle(polish_critical(h, a, a + step));
    } else {
      continue;
    }
    const double curvature = h.derivative(2, c);
    if (std::abs(curvature) <= kDegeneracyThreshold) {
      std::ostringstream msg;
      msg << "critical point " << c << " of the base function is degenerate (h'' = " << curvature << ")";
      throw NotMorse(msg.str());
    }
    base.critical_points.push_back(c);
  }
  std::sort(base.critical_points.begin(), base.critical_points.end());
  base.crit_count = static_cast<int>(base.critical_points.size());

  base.k_sample_min = sample_min;
  if (sample_min <= kDegeneracyThreshold) {
    std::ostringstream msg;
    msg << "|h'| + |h''| nearly vanishes on the grid (min " << sample_min << "): degenerate critical point";
    throw NotMorse(msg.str());
  }
  // |h'| + |h''| is Lipschitz with constant sup|h''| + sup|h'''|; every
  // point is within step / 2 of the grid.
  const double lipschitz = h.sup_norm_bound(2) + h.sup_norm_bound(3);
  base.slack = lipschitz * 0.5 * step;
  base.k_lower = sample_min - base.slack;
  if (base.k_lower <= 0.0) {
    std::ostringstream msg;
    msg << "certified lower bound on K is not positive (" << base.k_lower << "); refine the grid";
    throw NonPositiveK(msg.str(), base.k_lower);
  }
  if (base.crit_count < 2 || base.crit_count % 2 != 0) {
    throw NotMorse("base function has an odd or too small number of critical points: " +
                   std::to_string(base.crit_count));
  }
  return base;
}

BigInt MorseCertificate::predicted_count(int n) const {
  BigInt r = 1;
  for (int i = 0; i <= n; ++i) r *= base.crit_count;
  return r;
}

MorseCertificate certify(const TrigPotential& f, const BaseMorse& base, int sharpness_grid) {
  MorseCertificate cert;
  cert.base = base;
  cert.difference = f - base.h.separable_sum();
  cert.gradient_bound = gradient_sup_bound(cert.difference);
  cert.hessian_bound = hessian_sup_bound(cert.difference);
  cert.bound = 2.0 * cert.gradient_bound + 5.0 * cert.hessian_bound;
  cert.gap = base.k_lower - cert.bound;
  cert.valid = cert.gap > 0.0;

  const double step = kTwoPi / std::max(1, sharpness_grid);
  for (int i = 0; i < sharpness_grid; ++i) {
    for (int j = 0; j < sharpness_grid; ++j) {
      const PairJet jt = cert.difference.jet(i * step, j * step);
      cert.sampled_gradient = std::max({cert.sampled_gradient, std::abs(jt.d1), std::abs(jt.d2)});
      cert.sampled_hessian =
          std::max({cert.sampled_hessian, std::abs(jt.d11), std::abs(jt.d12), std::abs(jt.d22)});
    }
  }
  cert.sampled_bound = 2.0 * cert.sampled_gradient + 5.0 * cert.sampled_hessian;
  return cert;
}

HomotopyReport homotopy_check(const TrigPotential& f, const BaseMorse& base, int n, int steps,
                              const NewtonOptions& newton) {
  if (steps < 2) throw ValidationError("homotopy_check needs steps >= 2");
  const auto initial = certify(f, base);
  if (!initial.valid) {
    std::ostringstream msg;
    msg << "homotopy_check needs a valid certificate (gap " << initial.gap << ")";
    throw ValidationError(msg.str());
  }
  const TrigPotential g = base.h.separable_sum();
  const auto predicted = initial.predicted_count(n);

  HomotopyReport rep;
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    const TrigPotential ft = g.scaled(t) + f.scaled(1.0 - t);
    const auto cert = certify(ft, base, 64);
    if (!cert.valid) {
      std::ostringstream msg;
      msg << "interpolant at t = " << t << " left the certified set (gap " << cert.gap << ")";
      throw NumericalError(msg.str());
    }
    const auto report = count_by_newton(ft, n, newton);
    rep.ts.push_back(t);
    rep.counts.push_back(report.count);
    rep.gaps.push_back(cert.gap);
    rep.saturated.push_back(report.saturated);
    if (i > 0 && rep.counts[static_cast<std::size_t>(i)] != rep.counts[static_cast<std::size_t>(i) - 1]) {
      std::ostringstream msg;
      msg << "critical point count jumps from " << rep.counts[static_cast<std::size_t>(i) - 1] << " to "
          << report.count << " at t = " << t;
      throw CountJump(msg.str(), t, rep.counts[static_cast<std::size_t>(i) - 1], report.count);
    }
    if (BigInt(report.count) != predicted) {
      std::ostringstream msg;
      msg << "count " << report.count << " at t = " << t << " differs from the predicted " << predicted;
      throw CountJump(msg.str(), t, static_cast<std::size_t>(predicted), report.count);
    }
  }
  return rep;
}

}  // namespace lattice
