#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lattice {

/// Symmetric tridiagonal matrix: diag has size m, offdiag size m - 1.
struct TridiagHessian {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }
};

/// Number of eigenvalues strictly below t (Sturm sequence count).
std::size_t sturm_count_below(const TridiagHessian& h, double t);

/// Largest |lambda| bound from Gershgorin discs.
double gershgorin_radius(const TridiagHessian& h);

/// min |lambda| over the spectrum, by bisection on the Sturm count of the
/// interval (-t, t). Absolute accuracy better than 1e-12 * max(1, ||h||).
double min_abs_eigenvalue(const TridiagHessian& h);

/// Solves h * x = rhs by Gaussian elimination with partial pivoting
/// (banded, O(m)). Empty result when a pivot vanishes.
std::optional<std::vector<double>> tridiag_solve(const TridiagHessian& h, std::span<const double> rhs);

/// h * u
std::vector<double> tridiag_apply(const TridiagHessian& h, std::span<const double> u);

}  // namespace lattice
