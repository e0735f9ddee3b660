#pragma once

#include <span>
#include <vector>

namespace lattice {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Partial derivative order: a derivatives in the first argument, b in the
// second. Each component is capped at 3.
struct DerivOrder {
  int a = 0;
  int b = 0;
};

inline constexpr int kMaxDerivOrder = 3;

// Value and derivatives up to second order of a two-argument function at a
// point. This is everything the lattice sums need.
struct PairJet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
};

// amp * cos(k*x + l*y + phase)
struct TrigTerm {
  int k = 0;
  int l = 0;
  double amp = 0.0;
  double phase = 0.0;
};

/// Finite trigonometric polynomial on the 2-torus. Immutable.
class TrigPotential {
 public:
  TrigPotential() = default;
  explicit TrigPotential(std::vector<TrigTerm> terms);

  std::span<const TrigTerm> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double value(Point2 p) const;

  /// Exact partial derivative d^a/dx^a d^b/dy^b. Throws ValidationError
  /// when a component of the order is negative or above 3.
  double derivative(DerivOrder order, Point2 p) const;

  PairJet jet(double x, double y) const;

  /// Sum of |amp| |k|^a |l|^b over terms. Never below the true sup-norm of
  /// the corresponding derivative.
  double sup_norm_bound(DerivOrder order) const;

  /// Merges terms with the same wave vector (up to overall sign) into one
  /// term and drops those whose amplitude cancels to zero. The function
  /// represented is unchanged.
  TrigPotential simplified() const;

  TrigPotential scaled(double s) const;

  friend TrigPotential operator+(const TrigPotential& lhs, const TrigPotential& rhs);
  friend TrigPotential operator-(const TrigPotential& lhs, const TrigPotential& rhs);

 private:
  std::vector<TrigTerm> terms_;
};

/// Bound on max_i sup |d_i p| from coefficient sums.
double gradient_sup_bound(const TrigPotential& p);
/// Bound on max_{i,j} sup |d_i d_j p| from coefficient sums.
double hessian_sup_bound(const TrigPotential& p);

// amp * cos(k*x + phase)
struct TrigTerm1D {
  int k = 0;
  double amp = 0.0;
  double phase = 0.0;
};

/// Trigonometric polynomial on the circle.
class TrigPolynomial1D {
 public:
  TrigPolynomial1D() = default;
  explicit TrigPolynomial1D(std::vector<TrigTerm1D> terms);

  std::span<const TrigTerm1D> terms() const { return terms_; }

  double value(double x) const;
  double derivative(int order, double x) const;
  double sup_norm_bound(int order) const;

  // (x, y) -> h(x) + h(y)
  TrigPotential separable_sum() const;

 private:
  std::vector<TrigTerm1D> terms_;
};

/// H(x, x') = x x' + a x + b x' + c + P(x, x') with P doubly periodic.
///
/// This is exactly the family of smooth H for which d1 H - x' and d2 H - x
/// are (2 pi Z)^2-periodic, restricted to trigonometric-polynomial P.
class GeneratingFunction {
 public:
  GeneratingFunction() = default;
  GeneratingFunction(double a, double b, double c, TrigPotential periodic_part)
      : a_(a), b_(b), c_(c), periodic_(std::move(periodic_part)) {}

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  const TrigPotential& periodic_part() const { return periodic_; }

  double value(Point2 p) const;
  double derivative(DerivOrder order, Point2 p) const;
  PairJet jet(double x, double xp) const;

 private:
  double a_ = 0.0;
  double b_ = 0.0;
  double c_ = 0.0;
  TrigPotential periodic_;
};

/// 1 - sum |amp k l| over the periodic part. A positive value certifies
/// d1 d2 H > 0 on all of R^2.
double twist_margin(const GeneratingFunction& h);

/// Minimum of d1 d2 H over an m x m grid of the fundamental domain.
double sampled_twist_minimum(const GeneratingFunction& h, int m = 200);

}  // namespace lattice
