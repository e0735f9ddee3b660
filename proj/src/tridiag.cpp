#include "lattice/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lattice {

std::size_t sturm_count_below(const TridiagHessian& h, double t) {
  const std::size_t m = h.diag.size();
  if (m == 0) return 0;
  double max_e2 = 1.0;
  for (double e : h.offdiag) max_e2 = std::max(max_e2, e * e);
  const double pivmin = std::numeric_limits<double>::min() * max_e2;

  std::size_t count = 0;
  double q = h.diag[0] - t;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < m; ++i) {
    const double e = h.offdiag[i - 1];
    q = h.diag[i] - t - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double gershgorin_radius(const TridiagHessian& h) {
  const std::size_t m = h.diag.size();
  double r = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = std::abs(h.diag[i]);
    if (i > 0) row += std::abs(h.offdiag[i - 1]);
    if (i + 1 < m) row += std::abs(h.offdiag[i]);
    r = std::max(r, row);
  }
  return r;
}

double min_abs_eigenvalue(const TridiagHessian& h) {
  if (h.diag.empty()) return 0.0;
  const double radius = gershgorin_radius(h);
  const double scale = std::max(1.0, radius);
  double lo = 0.0;
  double hi = radius + 1.0;
  // eigenvalues in [-t, t) as the Sturm counts see them
  auto inside = [&](double t) { return sturm_count_below(h, t) - sturm_count_below(h, -t); };
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * scale; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (inside(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<std::vector<double>> tridiag_solve(const TridiagHessian& h, std::span<const double> rhs) {
  const std::size_t m = h.diag.size();
  if (m == 0 || rhs.size() != m) return std::nullopt;
  std::vector<double> d(h.diag);
  std::vector<double> b(rhs.begin(), rhs.end());
  if (m == 1) {
    if (d[0] == 0.0) return std::nullopt;
    b[0] /= d[0];
    return b;
  }
  std::vector<double> du(h.offdiag);
  std::vector<double> dl(h.offdiag);  // subdiagonal, reused for the second superdiagonal fill

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) return std::nullopt;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      dl[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < m) {
        dl[i] = du[i + 1];
        du[i + 1] = -fact * dl[i];
      } else {
        dl[i] = 0.0;
      }
      du[i] = temp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  if (d[m - 1] == 0.0) return std::nullopt;

  b[m - 1] /= d[m - 1];
  b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
  for (std::size_t k = m - 2; k-- > 0;) {
    b[k] = (b[k] - du[k] * b[k + 1] - dl[k] * b[k + 2]) / d[k];
  }
  for (double v : b) {
    if (!std::isfinite(v)) return std::nullopt;
  }
  return b;
}

std::vector<double> tridiag_apply(const TridiagHessian& h, std::span<const double> u) {
  const std::size_t m = h.diag.size();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s = h.diag[i] * u[i];
    if (i > 0) s += h.offdiag[i - 1] * u[i - 1];
    if (i + 1 < m) s += h.offdiag[i] * u[i + 1];
    out[i] = s;
  }
  return out;
}

}  // namespace lattice
