#include "lattice/bezout_bounds.hpp"

#include <algorithm>
#include <string>

#include "lattice/errors.hpp"

namespace lattice {

void AlgebraicModel::validate() const {
  if (d < 1 || r < 1 || r > d) throw ValidationError("algebraic model needs 1 <= r <= d");
  if (R < r) throw ValidationError("algebraic model needs R >= r");
  if (degrees.size() != static_cast<std::size_t>(R)) {
    throw ValidationError("algebraic model lists " + std::to_string(degrees.size()) + " degrees for R = " +
                          std::to_string(R));
  }
  for (int deg : degrees) {
    if (deg < 1) throw ValidationError("algebraic model degrees must be >= 1");
  }
  if (N < 1) throw ValidationError("algebraic model needs N >= 1");
}

AlgebraicModel circle_model(int N) { return AlgebraicModel{2, 1, 1, {2}, N}; }

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BezoutBound bezout_bound(const AlgebraicModel& model, int n) {
  model.validate();
  if (n < 1) throw ValidationError("bezout_bound needs n >= 1");
  BezoutBound b;
  int a = model.N;
  for (int deg : model.degrees) a = std::max(a, deg);
  b.base = a;
  b.exponent = BigInt(model.R) + BigInt(model.r + 1) * binomial(model.d, model.r + 1) * binomial(model.R + 1, model.r + 1);
  b.sites = n + 1;
  const BigInt total = b.exponent * b.sites;
  if (total > 100'000'000) throw ValidationError("bezout_bound exponent too large to expand");
  b.value = boost::multiprecision::pow(b.base, total.convert_to<unsigned>());
  return b;
}

BigInt morse_lower_bound(int betti_sum, int n) {
  if (betti_sum < 1) throw ValidationError("morse_lower_bound needs betti_sum >= 1");
  if (n < 1) throw ValidationError("morse_lower_bound needs n >= 1");
  return boost::multiprecision::pow(BigInt(betti_sum), static_cast<unsigned>(n + 1));
}

bool sandwich_check(const BigInt& lower, const BigInt& observed, const BigInt& upper) {
  return lower <= observed && observed <= upper;
}

int trig_degree_proxy(int trig_degree) { return std::max(1, 2 * trig_degree); }

}  // namespace lattice
