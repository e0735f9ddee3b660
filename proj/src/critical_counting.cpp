#include "lattice/critical_counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "lattice/parallel.hpp"

namespace lattice {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroProfile = 1e-12;  // |y_n| treated as an exact zero of the profile

// ---------------------------------------------------------------------------
// Newton machinery shared by the torus and line searches

template <PairPotential P>
bool damped_newton(const P& pot, std::vector<double>& x, int max_iterations) {
  std::vector<double> g;
  TridiagHessian h;
  gradient_and_hessian(pot, x, g, h);
  auto sq = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return s;
  };
  double gn2 = sq(g);
  std::vector<double> trial(x.size());
  for (int it = 0; it < max_iterations; ++it) {
    if (max_abs(g) <= 1e-12) return true;
    for (auto& c : g) c = -c;
    auto step = tridiag_solve(h, g);
    if (!step) return false;
    auto& d = *step;
    const double dmax = max_abs(d);
    if (dmax > 1.0) {
      for (auto& c : d) c /= dmax;
    }
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> gt;
    for (int ls = 0; ls < 30; ++ls) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * d[i];
      gt = gradient(pot, trial);
      if (sq(gt) <= (1.0 - 1e-4 * alpha) * gn2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // stalled at round-off level
      gradient_and_hessian(pot, x, g, h);
      return max_abs(g) <= 1e-11;
    }
    x.swap(trial);
    gradient_and_hessian(pot, x, g, h);
    gn2 = sq(g);
    if (alpha * max_abs(d) <= 1e-15 * (1.0 + max_abs(x))) return max_abs(g) <= 1e-11;
  }
  return max_abs(g) <= 1e-11;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// uniform in [0, 1), a pure function of (seed, a, b)
double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t z = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Collects distinct points; deterministic given insertion order.
class PointSet {
 public:
  PointSet(bool torus, double tol) : torus_(torus), tol_(tol) {}

  // Returns true when the point was new.
  bool insert(const std::vector<double>& p) {
    auto key = quantize(p);
    if (index_.contains(key)) return false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (distance(points_[i], p) <= tol_) {
        index_.emplace(std::move(key), i);
        return false;
      }
    }
    index_.emplace(std::move(key), points_.size());
    points_.push_back(p);
    return true;
  }

  const std::vector<std::vector<double>>& points() const { return points_; }

 private:
  std::vector<long long> quantize(const std::vector<double>& p) const {
    std::vector<long long> key(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) key[i] = std::llround(p[i] / (10.0 * tol_));
    return key;
  }

  double distance(const std::vector<double>& a, const std::vector<double>& b) const {
    if (torus_) return torus_distance(a, b);
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  }

  bool torus_;
  double tol_;
  std::map<std::vector<long long>, std::size_t> index_;
  std::vector<std::vector<double>> points_;
};

std::size_t ipow_size(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Runs Newton from `total` starts produced by start(i, x) and merges the
// converged points into `into` in start order. Returns the number of new
// points added.
template <PairPotential P, typename StartFn, typename Keep>
std::size_t multistart(const P& pot, int m, std::size_t total, StartFn start, Keep keep, bool torus,
                       int max_iterations, PointSet& into) {
  const std::size_t chunks = std::min<std::size_t>(total, 256);
  std::vector<std::vector<std::vector<double>>> found(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * total / chunks;
    const std::size_t end = (c + 1) * total / chunks;
    PointSet local(torus, kDedupDistance);
    std::vector<double> x(static_cast<std::size_t>(m));
    for (std::size_t i = begin; i < end; ++i) {
      start(i, x);
      if (!damped_newton(pot, x, max_iterations)) continue;
      if (max_abs(gradient(pot, x)) > kPolishTolerance) continue;
      if (torus) {
        for (auto& v : x) v = wrap_angle(v);
      }
      if (!keep(x)) continue;
      local.insert(x);
    }
    found[c] = local.points();
  });
  std::size_t added = 0;
  for (const auto& chunk : found) {
    for (const auto& p : chunk) added += into.insert(p) ? 1 : 0;
  }
  return added;
}

template <PairPotential P>
CriticalPoint classify(const P& pot, std::vector<double> x, LatticeMode mode) {
  CriticalPoint cp{LatticeConfig(std::move(x), mode), 0.0, std::nullopt, 0.0, std::nullopt};
  cp.grad_norm = max_abs(gradient(pot, cp.config.coords()));
  const auto h = hessian(pot, cp.config.coords());
  cp.min_abs_eig = min_abs_eigenvalue(h);
  if (cp.min_abs_eig > 1e-10) cp.morse_index = static_cast<int>(sturm_count_below(h, 0.0));
  return cp;
}

void sort_points(std::vector<CriticalPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    const auto ca = a.config.coords();
    const auto cb = b.config.coords();
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  });
}

// ---------------------------------------------------------------------------
// shooting

struct Sample {
  double x;
  double y;
  double dy;
};

bool needs_refinement(const Sample& a, const Sample& b) {
  if (a.dy * b.dy < 0.0) return true;
  const double h = b.x - a.x;
  return std::min(std::abs(a.y), std::abs(b.y)) < 10.0 * h * std::max(std::abs(a.dy), std::abs(b.dy));
}

std::size_t sign_changes(const std::vector<Sample>& s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].y == 0.0) ++count;
    if (i + 1 < s.size() && s[i].y * s[i + 1].y < 0.0) ++count;
  }
  return count;
}

}  // namespace

std::string to_string(CountMethod m) { return m == CountMethod::shooting ? "shooting" : "newton"; }

ShootingProfile shooting_profile(const TwistMap& map, int n, double x0) {
  if (n < 1) throw ValidationError("shooting_profile needs n >= 1");
  Point2 p{x0, 0.0};
  double vx = 1.0;
  double vy = 0.0;
  Matrix2 jac{};
  for (int j = 0; j < n; ++j) {
    p = map.forward(p, jac);
    const double nx = jac[0][0] * vx + jac[0][1] * vy;
    const double ny = jac[1][0] * vx + jac[1][1] * vy;
    vx = nx;
    vy = ny;
  }
  return {p.y, vy};
}

std::vector<double> shooting_orbit(const TwistMap& map, int n, double x0) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n) + 1);
  Point2 p{x0, 0.0};
  xs.push_back(p.x);
  for (int j = 0; j < n; ++j) {
    p = map.forward(p);
    xs.push_back(p.x);
  }
  return xs;
}

CountReport count_by_shooting(const TwistMap& map, int n, Window window, const ShootingOptions& options) {
  if (n < 1) throw ValidationError("count_by_shooting needs n >= 1");
  if (!(window.hi > window.lo) || !std::isfinite(window.lo) || !std::isfinite(window.hi)) {
    throw ValidationError("count_by_shooting needs a finite window with lo < hi");
  }
  if (options.samples_init < 2) throw ValidationError("count_by_shooting needs samples_init >= 2");

  CountReport report;
  report.n = n;
  report.method = CountMethod::shooting;

  auto eval = [&](double x) {
    const auto p = shooting_profile(map, n, x);
    ++report.samples;
    return Sample{x, p.y_n, p.dy_dx0};
  };

  const double width = window.hi - window.lo;
  const double pad = 1e-6 * width;
  const double lo = window.lo - pad;
  const double hi = window.hi + pad;
  const double min_width = 1e-12 * std::max(1.0, width);

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(options.samples_init) + 1);
  for (int k = 0; k <= options.samples_init; ++k) {
    samples.push_back(eval(lo + (hi - lo) * k / options.samples_init));
  }

  auto check_family = [&] {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const auto& a = samples[i];
      const auto& b = samples[i + 1];
      if (std::abs(a.y) <= kZeroProfile && std::abs(b.y) <= kZeroProfile &&
          std::abs(a.dy) <= kDegeneracyThreshold && std::abs(b.dy) <= kDegeneracyThreshold) {
        report.degenerate_flag = true;
        report.resolution = (hi - lo) / options.samples_init;
        std::ostringstream msg;
        msg << "y_" << n << " vanishes on [" << a.x << ", " << b.x
            << "]: the axis is mapped into itself, critical points form a continuum";
        throw DegenerateFamily(msg.str(), report);
      }
    }
  };
  check_family();

  std::size_t previous = sign_changes(samples);
  int stable = 0;
  for (int level = 0; level < options.max_levels; ++level) {
    std::vector<Sample> refined;
    refined.reserve(samples.size() * 2);
    bool inserted = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      refined.push_back(samples[i]);
      if (i + 1 == samples.size()) break;
      const auto& a = samples[i];
      const auto& b = samples[i + 1];
      if (b.x - a.x > min_width && needs_refinement(a, b)) {
        refined.push_back(eval(0.5 * (a.x + b.x)));
        inserted = true;
      }
    }
    if (!inserted) {
      report.saturated = true;
      break;
    }
    samples.swap(refined);
    report.refinement_levels = level + 1;
    check_family();
    const std::size_t now = sign_changes(samples);
    if (now == previous) {
      if (++stable >= 2) {
        report.saturated = true;
        break;
      }
    } else {
      stable = 0;
    }
    previous = now;
  }

  double finest = hi - lo;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) finest = std::min(finest, samples[i + 1].x - samples[i].x);
  report.resolution = finest;

  // Safeguarded Newton on a sign-changing bracket.
  auto polish = [&](Sample a, Sample b) {
    Sample best = std::abs(a.y) < std::abs(b.y) ? a : b;
    double t = a.dy != 0.0 ? a.x - a.y / a.dy : 0.5 * (a.x + b.x);
    for (int it = 0; it < 200; ++it) {
      if (!(t > a.x && t < b.x)) t = 0.5 * (a.x + b.x);
      const Sample s = eval(t);
      if (std::abs(s.y) < std::abs(best.y)) best = s;
      if (s.y == 0.0 || std::abs(s.y) <= 1e-15) break;
      if ((s.y < 0.0) == (a.y < 0.0)) {
        a = s;
      } else {
        b = s;
      }
      if (b.x - a.x <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) break;
      t = s.dy != 0.0 ? s.x - s.y / s.dy : 0.5 * (a.x + b.x);
    }
    return best;
  };

  // Extremum of y_n inside [a, b] when dy changes sign, by bisection on dy.
  auto extremum = [&](Sample a, Sample b) {
    Sample mid = a;
    for (int it = 0; it < 80 && b.x - a.x > min_width * 1e-3; ++it) {
      mid = eval(0.5 * (a.x + b.x));
      if ((mid.dy < 0.0) == (a.dy < 0.0)) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return mid;
  };

  std::vector<Sample> zeros;
  std::vector<Sample> tangential;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& a = samples[i];
    if (a.y == 0.0) zeros.push_back(a);
    if (i + 1 == samples.size()) break;
    const Sample& b = samples[i + 1];
    if (a.y * b.y < 0.0) {
      zeros.push_back(polish(a, b));
    } else if (a.y * b.y > 0.0 && a.dy * b.dy < 0.0) {
      const Sample e = extremum(a, b);
      if (e.y * a.y < 0.0) {
        zeros.push_back(polish(a, e));
        zeros.push_back(polish(e, b));
      } else if (std::abs(e.y) <= 1e-10) {
        tangential.push_back(e);
      }
    }
  }
  std::sort(zeros.begin(), zeros.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });
  std::vector<Sample> unique;
  for (const auto& z : zeros) {
    if (!unique.empty() && std::abs(z.x - unique.back().x) <= 1e-10) continue;
    unique.push_back(z);
  }
  for (const auto& z : tangential) unique.push_back(z);

  for (const auto& z : unique) {
    if (!window.contains(z.x)) continue;
    CriticalPoint cp = classify(map.source(), shooting_orbit(map, n, z.x), LatticeMode::line);
    cp.transversality = std::abs(z.dy);
    const bool transverse = std::abs(z.dy) > kDegeneracyThreshold;
    if (!transverse) report.degenerate_flag = true;
    if (transverse && cp.grad_norm <= kPolishTolerance) ++report.count;
    report.points.push_back(std::move(cp));
  }
  sort_points(report.points);
  return report;
}

CountReport count_by_newton(const TrigPotential& f, int n, const NewtonOptions& options) {
  if (n < 1) throw ValidationError("count_by_newton needs n >= 1");
  if (options.starts_per_dim < 4) throw ValidationError("count_by_newton needs starts_per_dim >= 4");

  const int m = n + 1;
  const auto s = static_cast<std::size_t>(options.starts_per_dim);
  const std::size_t total = ipow_size(s, m);
  const double step = kTwoPi / static_cast<double>(s);

  CountReport report;
  report.n = n;
  report.method = CountMethod::newton;
  report.resolution = step;

  PointSet points(true, kDedupDistance);
  auto keep_all = [](const std::vector<double>&) { return true; };

  auto grid_start = [&](std::size_t idx, std::vector<double>& x) {
    for (int d = 0; d < m; ++d) {
      x[static_cast<std::size_t>(d)] = (static_cast<double>(idx % s) + 0.5) * step;
      idx /= s;
    }
  };
  multistart(f, m, total, grid_start, keep_all, true, options.max_iterations, points);
  report.samples = total;

  if (options.jitter_pass) {
    std::vector<double> offset(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) offset[static_cast<std::size_t>(d)] = hashed_uniform(options.seed, 0, static_cast<std::uint64_t>(d)) * step;
    auto jitter_start = [&](std::size_t idx, std::vector<double>& x) {
      const std::size_t id = idx;
      for (int d = 0; d < m; ++d) {
        const double jitter = 0.7 * (hashed_uniform(options.seed, id + 1, static_cast<std::uint64_t>(d)) - 0.5);
        x[static_cast<std::size_t>(d)] = (static_cast<double>(idx % s) + jitter) * step + offset[static_cast<std::size_t>(d)];
        idx /= s;
      }
    };
    const std::size_t added =
        multistart(f, m, total, jitter_start, keep_all, true, options.max_iterations, points);
    report.samples += total;
    report.saturated = added == 0;
  }

  for (const auto& p : points.points()) {
    CriticalPoint cp = classify(f, p, LatticeMode::torus);
    if (!cp.nondegenerate()) report.degenerate_flag = true;
    if (cp.grad_norm <= kPolishTolerance && cp.nondegenerate()) ++report.count;
    report.points.push_back(std::move(cp));
  }
  sort_points(report.points);
  return report;
}

CountReport count_by_newton_line(const GeneratingFunction& h, int n, const LineNewtonOptions& options) {
  if (n < 1) throw ValidationError("count_by_newton_line needs n >= 1");
  if (options.x0_starts < 1 || options.starts_per_dim < 1) {
    throw ValidationError("count_by_newton_line needs positive start counts");
  }
  const Window w = options.window;
  const int m = n + 1;
  const auto s0 = static_cast<std::size_t>(options.x0_starts);
  const auto s = static_cast<std::size_t>(options.starts_per_dim);
  const std::size_t total = s0 * ipow_size(s, n);
  const double step0 = (w.hi - w.lo) / static_cast<double>(s0);
  const double step = 2.0 * options.half_width / static_cast<double>(s);

  CountReport report;
  report.n = n;
  report.method = CountMethod::newton;
  report.resolution = std::max(step0, step);

  PointSet points(false, kDedupDistance);
  auto keep = [&](const std::vector<double>& x) { return w.contains(x[0]); };

  auto make_start = [&](bool jitter) {
    return [&, jitter](std::size_t idx, std::vector<double>& x) {
      const std::size_t id = idx;
      auto j = [&](int d) {
        return jitter ? 0.7 * (hashed_uniform(options.seed, id + 1, static_cast<std::uint64_t>(d)) - 0.5) : 0.0;
      };
      x[0] = w.lo + (static_cast<double>(idx % s0) + 0.5 + j(0)) * step0;
      idx /= s0;
      for (int d = 1; d < m; ++d) {
        x[static_cast<std::size_t>(d)] = -options.half_width + (static_cast<double>(idx % s) + 0.5 + j(d)) * step;
        idx /= s;
      }
    };
  };
  multistart(h, m, total, make_start(false), keep, false, options.max_iterations, points);
  report.samples = total;
  if (options.jitter_pass) {
    const std::size_t added = multistart(h, m, total, make_start(true), keep, false, options.max_iterations, points);
    report.samples += total;
    report.saturated = added == 0;
  }

  for (const auto& p : points.points()) {
    CriticalPoint cp = classify(h, p, LatticeMode::line);
    if (!cp.nondegenerate()) report.degenerate_flag = true;
    if (cp.grad_norm <= kPolishTolerance && cp.nondegenerate()) ++report.count;
    report.points.push_back(std::move(cp));
  }
  sort_points(report.points);
  return report;
}

int morse_index(const TridiagHessian& h) {
  const double lam = min_abs_eigenvalue(h);
  if (lam <= 1e-10) {
    std::ostringstream msg;
    msg << "Hessian is degenerate: min |eigenvalue| = " << lam;
    throw Degenerate(msg.str());
  }
  return static_cast<int>(sturm_count_below(h, 0.0));
}

double growth_rate(std::span<const int> ns, std::span<const double> counts) {
  if (ns.size() != counts.size()) throw ValidationError("growth_rate: mismatched inputs");
  if (ns.size() < 3) throw InsufficientData("growth_rate needs at least three counts");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i > 0 && ns[i] <= ns[i - 1]) throw InsufficientData("growth_rate needs strictly increasing n");
    if (!(counts[i] >= 1.0)) throw InsufficientData("growth_rate needs positive counts");
  }
  const double k = static_cast<double>(ns.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += ns[i] + 1.0;
    my += std::log(counts[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double dx = ns[i] + 1.0 - mx;
    sxy += dx * (std::log(counts[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double growth_rate(std::span<const CountReport> reports) {
  std::vector<int> ns;
  std::vector<double> counts;
  for (const auto& r : reports) {
    if (r.degenerate_flag) throw InsufficientData("growth_rate: report for n = " + std::to_string(r.n) + " is degenerate");
    ns.push_back(r.n);
    counts.push_back(static_cast<double>(r.count));
  }
  return growth_rate(ns, counts);
}

}  // namespace lattice
