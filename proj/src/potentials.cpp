#include "lattice/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "lattice/errors.hpp"

namespace lattice {
namespace {

// m-th derivative of cos evaluated at theta, given cos/sin of theta.
double cos_derivative(int m, double c, double s) {
  switch (m & 3) {
    case 0:
      return c;
    case 1:
      return -s;
    case 2:
      return -c;
    default:
      return s;
  }
}

void check_order(DerivOrder order) {
  if (order.a < 0 || order.b < 0 || order.a > kMaxDerivOrder || order.b > kMaxDerivOrder) {
    throw ValidationError("derivative order (" + std::to_string(order.a) + "," +
                          std::to_string(order.b) + ") outside [0,3]^2");
  }
}

double ipow_abs(int base, int e) {
  double r = 1.0;
  const double b = std::abs(static_cast<double>(base));
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double ipow(int base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

TrigPotential::TrigPotential(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.amp) || !std::isfinite(t.phase)) {
      throw ValidationError("trigonometric term with non-finite amplitude or phase");
    }
  }
}

double TrigPotential::value(Point2 p) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.amp * std::cos(t.k * p.x + t.l * p.y + t.phase);
  return sum;
}

double TrigPotential::derivative(DerivOrder order, Point2 p) const {
  check_order(order);
  double sum = 0.0;
  for (const auto& t : terms_) {
    const double coef = t.amp * ipow(t.k, order.a) * ipow(t.l, order.b);
    if (coef == 0.0) continue;
    const double theta = t.k * p.x + t.l * p.y + t.phase;
    sum += coef * cos_derivative(order.a + order.b, std::cos(theta), std::sin(theta));
  }
  return sum;
}

PairJet TrigPotential::jet(double x, double y) const {
  PairJet j;
  for (const auto& t : terms_) {
    const double theta = t.k * x + t.l * y + t.phase;
    const double c = t.amp * std::cos(theta);
    const double s = t.amp * std::sin(theta);
    const double k = t.k;
    const double l = t.l;
    j.v += c;
    j.d1 -= k * s;
    j.d2 -= l * s;
    j.d11 -= k * k * c;
    j.d12 -= k * l * c;
    j.d22 -= l * l * c;
  }
  return j;
}

double TrigPotential::sup_norm_bound(DerivOrder order) const {
  check_order(order);
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::abs(t.amp) * ipow_abs(t.k, order.a) * ipow_abs(t.l, order.b);
  return sum;
}

TrigPotential TrigPotential::simplified() const {
  struct Acc {
    std::complex<double> coef;
    double magnitude = 0.0;
  };
  std::map<std::pair<int, int>, Acc> merged;
  for (const auto& t : terms_) {
    int k = t.k;
    int l = t.l;
    double phase = t.phase;
    if (k < 0 || (k == 0 && l < 0)) {
      k = -k;
      l = -l;
      phase = -phase;
    }
    auto& acc = merged[{k, l}];
    acc.coef += std::polar(t.amp, phase);
    acc.magnitude += std::abs(t.amp);
  }
  std::vector<TrigTerm> out;
  for (const auto& [kl, acc] : merged) {
    const auto [k, l] = kl;
    if (k == 0 && l == 0) {
      const double c0 = acc.coef.real();
      if (std::abs(c0) > 1e-15 * acc.magnitude) out.push_back({0, 0, c0, 0.0});
      continue;
    }
    const double amp = std::abs(acc.coef);
    if (amp <= 1e-15 * acc.magnitude) continue;
    out.push_back({k, l, amp, std::arg(acc.coef)});
  }
  return TrigPotential(std::move(out));
}

TrigPotential TrigPotential::scaled(double s) const {
  std::vector<TrigTerm> out(terms_.begin(), terms_.end());
  for (auto& t : out) t.amp *= s;
  return TrigPotential(std::move(out));
}

TrigPotential operator+(const TrigPotential& lhs, const TrigPotential& rhs) {
  std::vector<TrigTerm> out(lhs.terms_.begin(), lhs.terms_.end());
  out.insert(out.end(), rhs.terms_.begin(), rhs.terms_.end());
  return TrigPotential(std::move(out)).simplified();
}

TrigPotential operator-(const TrigPotential& lhs, const TrigPotential& rhs) {
  return lhs + rhs.scaled(-1.0);
}

double gradient_sup_bound(const TrigPotential& p) {
  return std::max(p.sup_norm_bound({1, 0}), p.sup_norm_bound({0, 1}));
}

double hessian_sup_bound(const TrigPotential& p) {
  return std::max({p.sup_norm_bound({2, 0}), p.sup_norm_bound({1, 1}), p.sup_norm_bound({0, 2})});
}

TrigPolynomial1D::TrigPolynomial1D(std::vector<TrigTerm1D> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.amp) || !std::isfinite(t.phase)) {
      throw ValidationError("trigonometric term with non-finite amplitude or phase");
    }
  }
}

double TrigPolynomial1D::value(double x) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.amp * std::cos(t.k * x + t.phase);
  return sum;
}

double TrigPolynomial1D::derivative(int order, double x) const {
  if (order < 0 || order > kMaxDerivOrder) {
    throw ValidationError("derivative order " + std::to_string(order) + " outside [0,3]");
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    const double coef = t.amp * ipow(t.k, order);
    if (coef == 0.0) continue;
    const double theta = t.k * x + t.phase;
    sum += coef * cos_derivative(order, std::cos(theta), std::sin(theta));
  }
  return sum;
}

double TrigPolynomial1D::sup_norm_bound(int order) const {
  if (order < 0 || order > kMaxDerivOrder) {
    throw ValidationError("derivative order " + std::to_string(order) + " outside [0,3]");
  }
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::abs(t.amp) * ipow_abs(t.k, order);
  return sum;
}

TrigPotential TrigPolynomial1D::separable_sum() const {
  std::vector<TrigTerm> out;
  out.reserve(2 * terms_.size());
  for (const auto& t : terms_) out.push_back({t.k, 0, t.amp, t.phase});
  for (const auto& t : terms_) out.push_back({0, t.k, t.amp, t.phase});
  return TrigPotential(std::move(out));
}

double GeneratingFunction::value(Point2 p) const {
  return p.x * p.y + a_ * p.x + b_ * p.y + c_ + periodic_.value(p);
}

double GeneratingFunction::derivative(DerivOrder order, Point2 p) const {
  double d = periodic_.derivative(order, p);
  if (order.a == 0 && order.b == 0) {
    d += p.x * p.y + a_ * p.x + b_ * p.y + c_;
  } else if (order.a == 1 && order.b == 0) {
    d += p.y + a_;
  } else if (order.a == 0 && order.b == 1) {
    d += p.x + b_;
  } else if (order.a == 1 && order.b == 1) {
    d += 1.0;
  }
  return d;
}

PairJet GeneratingFunction::jet(double x, double xp) const {
  PairJet j = periodic_.jet(x, xp);
  j.v += x * xp + a_ * x + b_ * xp + c_;
  j.d1 += xp + a_;
  j.d2 += x + b_;
  j.d12 += 1.0;
  return j;
}

double twist_margin(const GeneratingFunction& h) {
  return 1.0 - h.periodic_part().sup_norm_bound({1, 1});
}

double sampled_twist_minimum(const GeneratingFunction& h, int m) {
  double lo = std::numeric_limits<double>::infinity();
  const double step = 2.0 * std::numbers::pi / m;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      lo = std::min(lo, h.jet(i * step, j * step).d12);
    }
  }
  return lo;
}

}  // namespace lattice
