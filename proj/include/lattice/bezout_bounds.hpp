#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace lattice {

using BigInt = boost::multiprecision::cpp_int;

/// Projective model of the configuration manifold: X in P^d cut out by R
/// polynomials of the given degrees, of codimension r, with potentials of
/// degree at most N.
struct AlgebraicModel {
  int d = 0;
  int r = 0;
  int R = 0;
  std::vector<int> degrees;
  int N = 1;

  /// Throws ValidationError unless 1 <= r <= d, R >= r, R == degrees.size(),
  /// all degrees >= 1 and N >= 1.
  void validate() const;
};

/// The circle as {-X0^2 + X1^2 + X2^2 = 0}, with potential degree N.
AlgebraicModel circle_model(int N);

struct BezoutBound {
  BigInt base;      // A = max(N, degrees...)
  BigInt exponent;  // R + (r+1) C(d, r+1) C(R+1, r+1), per site
  int sites = 0;    // n + 1
  BigInt value;     // A^(exponent * sites)
};

BigInt binomial(int n, int k);

/// Upper bound (A^(R + (r+1) C(d,r+1) C(R+1,r+1)))^(n+1) on #Cr(f_n).
BezoutBound bezout_bound(const AlgebraicModel& model, int n);

/// betti_sum^(n+1)
BigInt morse_lower_bound(int betti_sum, int n);

/// lower <= observed <= upper
bool sandwich_check(const BigInt& lower, const BigInt& observed, const BigInt& upper);

/// Polynomial degree standing in for a trigonometric potential of
/// trigonometric degree m (cos kx has degree k in the circle's ambient
/// coordinates): N = 2m. A heuristic comparison only.
int trig_degree_proxy(int trig_degree);

}  // namespace lattice
