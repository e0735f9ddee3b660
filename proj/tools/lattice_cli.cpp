// Command-line front end: loads JSON inputs, runs counts, certificates and
// the tangency lab, and writes a JSON summary plus optional CSV detail.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lattice/bezout_bounds.hpp"
#include "lattice/critical_counting.hpp"
#include "lattice/errors.hpp"
#include "lattice/io.hpp"
#include "lattice/stability_certificate.hpp"
#include "lattice/tangency_lab.hpp"
#include "lattice/twist_map.hpp"

namespace {

using namespace lattice;
using io::json;

struct NRange {
  int lo = 1;
  int hi = 1;
};

NRange parse_range(const std::string& s) {
  NRange r;
  try {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } else {
      const std::string a = s.substr(0, dots);
      const std::string b = s.substr(dots + 2);
      r.lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(s);
      r.hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw ValidationError("--n expects N or LO..HI, got \"" + s + "\"");
  }
  if (r.lo < 1 || r.hi < r.lo) throw ValidationError("--n range must satisfy 1 <= LO <= HI");
  return r;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be positive");
}

struct Common {
  std::string json_path;
  std::string csv_path;
  std::uint64_t seed = 1;
};

void emit_json(const Common& c, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (c.json_path.empty() || c.json_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.json_path);
  if (!out) throw ValidationError("cannot write " + c.json_path);
  out << text;
}

void emit_csv(const Common& c, const std::string& text) {
  if (c.csv_path.empty()) return;
  std::ofstream out(c.csv_path);
  if (!out) throw ValidationError("cannot write " + c.csv_path);
  out << text;
}

json run_header(const char* command, const Common& c) {
  return {{"command", command}, {"seed", c.seed}};
}

// count / growth

struct CountArgs {
  std::string pot;
  std::string n = "1";
  std::string method = "newton";
  int starts_per_dim = 4;
  int x0_starts = 50;
  int line_starts = 12;
  int samples_init = 64;
  double window_lo = 0.0;
  double window_hi = 2.0 * std::numbers::pi;
};

struct LoadedPotential {
  std::optional<TrigPotential> torus;
  std::optional<GeneratingFunction> gen;
  json source;
};

LoadedPotential load_potential(const std::string& path) {
  LoadedPotential p;
  const json j = io::load_json_file(path);
  if (io::is_generating_function(j)) {
    p.gen = io::generating_from_json(j);
    p.source = io::to_json(*p.gen);
  } else {
    p.torus = io::potential_from_json(j);
    p.source = io::to_json(*p.torus);
  }
  return p;
}

void validate(const CountArgs& a) {
  if (a.method != "newton" && a.method != "shooting" && a.method != "both") {
    throw ValidationError("--method must be shooting, newton or both");
  }
  if (a.starts_per_dim < 4) throw ValidationError("--starts must be >= 4");
  if (a.x0_starts < 1 || a.line_starts < 1 || a.samples_init < 2) throw ValidationError("sample counts too small");
  if (!(a.window_hi > a.window_lo)) throw ValidationError("window must satisfy lo < hi");
}

std::vector<CountReport> run_counts(const LoadedPotential& p, const CountArgs& a, const NRange& r,
                                    std::uint64_t seed, json& notes) {
  std::vector<CountReport> reports;
  const Window window{a.window_lo, a.window_hi};
  if (p.torus) {
    if (a.method != "newton") throw ValidationError("shooting needs a generating function (fields a, b, c)");
    NewtonOptions opt;
    opt.starts_per_dim = a.starts_per_dim;
    opt.seed = seed;
    for (int n = r.lo; n <= r.hi; ++n) reports.push_back(count_by_newton(*p.torus, n, opt));
    return reports;
  }
  const TwistMap map(*p.gen);
  notes["twist_margin"] = map.twist_margin();
  notes["window"] = {window.lo, window.hi};
  ShootingOptions sopt;
  sopt.samples_init = a.samples_init;
  LineNewtonOptions lopt;
  lopt.window = window;
  lopt.x0_starts = a.x0_starts;
  lopt.starts_per_dim = a.line_starts;
  lopt.seed = seed;
  json agreement = json::array();
  for (int n = r.lo; n <= r.hi; ++n) {
    std::optional<std::size_t> shoot_count;
    if (a.method != "newton") {
      reports.push_back(count_by_shooting(map, n, window, sopt));
      shoot_count = reports.back().count;
    }
    if (a.method != "shooting") {
      reports.push_back(count_by_newton_line(*p.gen, n, lopt));
      if (shoot_count) agreement.push_back({{"n", n}, {"agree", *shoot_count == reports.back().count}});
    }
  }
  if (a.method == "both") notes["agreement"] = agreement;
  return reports;
}

void add_count_options(CLI::App* sub, CountArgs& a, bool with_method) {
  sub->add_option("--pot", a.pot, "potential or generating function JSON")->required();
  sub->add_option("--n", a.n, "N or LO..HI");
  if (with_method) sub->add_option("--method", a.method, "shooting|newton|both");
  sub->add_option("--starts", a.starts_per_dim, "torus Newton starts per dimension (>= 4)");
  sub->add_option("--x0-starts", a.x0_starts, "line Newton starts along x_0");
  sub->add_option("--line-starts", a.line_starts, "line Newton starts along the other coordinates");
  sub->add_option("--samples", a.samples_init, "initial shooting samples");
  sub->add_option("--window-lo", a.window_lo, "x_0 window start");
  sub->add_option("--window-hi", a.window_hi, "x_0 window end (exclusive)");
}

int cmd_count(const CountArgs& a, const Common& c) {
  validate(a);
  const NRange r = parse_range(a.n);
  const LoadedPotential p = load_potential(a.pot);
  json out = run_header("count", c);
  out["input"] = p.source;
  json notes = json::object();
  std::vector<CountReport> reports;
  try {
    reports = run_counts(p, a, r, c.seed, notes);
  } catch (const DegenerateFamily& e) {
    out["error"] = e.what();
    out["partial"] = io::to_json(e.partial());
    emit_json(c, out);
    throw;
  }
  json rs = json::array();
  for (const CountReport& rep : reports) rs.push_back(io::to_json(rep));
  out["reports"] = rs;
  for (auto& [k, v] : notes.items()) out[k] = v;
  emit_json(c, out);
  std::ostringstream csv;
  io::write_points_csv(csv, reports);
  emit_csv(c, csv.str());
  return 0;
}

int cmd_growth(const CountArgs& a, const Common& c) {
  validate(a);
  const NRange r = parse_range(a.n);
  if (r.hi - r.lo < 2) throw ValidationError("growth needs at least three values of n");
  const LoadedPotential p = load_potential(a.pot);
  CountArgs args = a;
  args.method = p.torus ? "newton" : "shooting";
  json notes = json::object();
  const std::vector<CountReport> reports = run_counts(p, args, r, c.seed, notes);
  json out = run_header("growth", c);
  out["input"] = p.source;
  json rows = json::array();
  for (const CountReport& rep : reports) {
    json row = {{"n", rep.n}, {"count", rep.count}, {"saturated", rep.saturated}, {"resolution", rep.resolution}};
    if (p.torus) {
      const BigInt lower = morse_lower_bound(2, rep.n);
      row["morse_lower_bound"] = io::big_to_string(lower);
      row["above_lower_bound"] = BigInt(rep.count) >= lower;
    }
    rows.push_back(row);
  }
  out["counts"] = rows;
  out["method"] = args.method;
  out["growth_rate"] = growth_rate(reports);
  out["tolerances"] = io::tolerances_json();
  emit_json(c, out);
  std::ostringstream csv;
  io::write_points_csv(csv, reports);
  emit_csv(c, csv.str());
  return 0;
}

// certify

struct CertifyArgs {
  std::string pot;
  std::string base;
  std::string n;
  int grid_points = 1 << 16;
  int starts_per_dim = 4;
};

int cmd_certify(const CertifyArgs& a, const Common& c) {
  if (a.grid_points < 16) throw ValidationError("--grid must be >= 16");
  if (a.starts_per_dim < 4) throw ValidationError("--starts must be >= 4");
  const TrigPotential f = io::potential_from_json(io::load_json_file(a.pot));
  const TrigPolynomial1D h = io::base_from_json(io::load_json_file(a.base));
  std::optional<NRange> r;
  if (!a.n.empty()) r = parse_range(a.n);
  const BaseMorse base = analyze_base(h, a.grid_points);
  const MorseCertificate cert = certify(f, base);
  json out = run_header("certify", c);
  out["input"] = io::to_json(f);
  out["certificate"] = io::to_json(cert);
  std::vector<CountReport> reports;
  if (r) {
    NewtonOptions opt;
    opt.starts_per_dim = a.starts_per_dim;
    opt.seed = c.seed;
    json checks = json::array();
    for (int n = r->lo; n <= r->hi; ++n) {
      reports.push_back(count_by_newton(f, n, opt));
      const BigInt predicted = cert.predicted_count(n);
      checks.push_back({{"n", n},
                        {"predicted", io::big_to_string(predicted)},
                        {"count", reports.back().count},
                        {"saturated", reports.back().saturated},
                        {"match", BigInt(reports.back().count) == predicted}});
    }
    out["counts"] = checks;
  }
  emit_json(c, out);
  std::ostringstream csv;
  io::write_points_csv(csv, reports);
  emit_csv(c, csv.str());
  return 0;
}

// tangency

struct TangencyArgs {
  double delta = 1.0 / 6.0;
  double T = 0.05;
  int curve_samples = 200;
  int n_max = 3;
  int window_samples = 1600;
  double fd_step = 1e-4;
};

int cmd_tangency(const TangencyArgs& a, const Common& c) {
  require_positive(a.fd_step, "--fd-step");
  if (a.n_max < 1) throw ValidationError("--n-max must be >= 1");
  if (a.window_samples < 10) throw ValidationError("--window-samples must be >= 10");
  const ConstructionParams params = ConstructionParams::with_delta(a.delta, a.T);
  params.validate();
  json out = run_header("tangency", c);
  out["params"] = {{"delta", params.delta}, {"T", params.T}, {"blend_width", params.blend_width}};
  out["flow_tolerance"] = FlowOptions{}.tolerance;
  out["hyperbolicity"] = io::to_json(hyperbolicity_report(params, a.fd_step));
  const CurveCheckReport curve = homoclinic_curve_check(params, a.curve_samples);
  out["curve"] = io::to_json(curve);
  const double radius = 2.0 + params.delta;
  json lambdas = json::array();
  // F0^2 is -Id outside the support of G, so even n give a degenerate family.
  for (int n = 1; n <= a.n_max; n += 2) {
    json entry = io::to_json(lambda_n_count(F0_map(params), radius, n, a.window_samples));
    entry["radius"] = radius;
    entry["window_samples"] = a.window_samples;
    lambdas.push_back(entry);
  }
  out["lambda_counts"] = lambdas;
  emit_json(c, out);

  std::ostringstream csv;
  csv << "kind,index,x,y\n";
  auto row = [&csv](const char* kind, std::size_t i, Point2 p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g\n", kind, i, p.x, p.y);
    csv << buf;
  };
  const std::vector<Point2> samples = homoclinic_curve_samples(params, a.curve_samples);
  for (std::size_t i = 0; i < samples.size(); ++i) row("curve", i, samples[i]);
  const std::vector<Point2> wu = manifold_segment(params, true);
  for (std::size_t i = 0; i < wu.size(); ++i) row("unstable", i, wu[i]);
  const std::vector<Point2> ws = manifold_segment(params, false);
  for (std::size_t i = 0; i < ws.size(); ++i) row("stable", i, ws[i]);
  if (!samples.empty()) {
    FlowState s{samples.front(), 0.0};
    row("orbit", 0, s.point);
    for (std::size_t i = 1; i <= 100; ++i) {
      s = flow(params, s, 0.01);
      row("orbit", i, s.point);
    }
  }
  emit_csv(c, csv.str());
  return 0;
}

// bounds

struct BoundsArgs {
  std::string model;
  int n = 1;
  int betti_sum = 2;
  std::optional<long long> observed;
};

int cmd_bounds(const BoundsArgs& a, const Common& c) {
  const AlgebraicModel m = io::model_from_json(io::load_json_file(a.model));
  const BezoutBound b = bezout_bound(m, a.n);
  const BigInt lower = morse_lower_bound(a.betti_sum, a.n);
  json out = run_header("bounds", c);
  out["n"] = a.n;
  out["bezout"] = io::to_json(b);
  out["morse_lower_bound"] = io::big_to_string(lower);
  if (a.observed) {
    if (*a.observed < 0) throw ValidationError("--observed must be >= 0");
    out["observed"] = *a.observed;
    out["sandwich"] = sandwich_check(lower, BigInt(*a.observed), b.value);
  }
  emit_json(c, out);
  return 0;
}

// roundtrip

struct RoundtripArgs {
  std::string gen;
  int grid = 50;
  int det_points = 1000;
  RecoverOptions options;
};

int cmd_roundtrip(const RoundtripArgs& a, const Common& c) {
  require_positive(a.options.closedness_tolerance, "--closedness-tol");
  require_positive(a.options.panel_tolerance, "--panel-tol");
  require_positive(a.options.fd_step, "--fd-step");
  if (a.grid < 2) throw ValidationError("--grid must be >= 2");
  if (a.det_points < 1) throw ValidationError("--det-points must be >= 1");
  const json j = io::load_json_file(a.gen);
  if (!io::is_generating_function(j)) throw ValidationError("roundtrip needs a generating function (fields a, b, c)");
  const GeneratingFunction h = io::generating_from_json(j);
  const TwistMap map(h);
  const GridSpec spec{-std::numbers::pi, std::numbers::pi, a.grid};
  const RecoveredTable t = recover_generating(map.as_planar_map(), h.value({0.0, 0.0}), spec, a.options);
  double max_err = 0.0;
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    for (std::size_t k = 0; k < t.xps.size(); ++k) {
      max_err = std::max(max_err, std::abs(t.at(i, k) - h.value({t.xs[i], t.xps[k]})));
    }
  }
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double max_det = 0.0;
  for (int i = 0; i < a.det_points; ++i) {
    const Point2 p{u(rng), u(rng)};
    max_det = std::max(max_det, std::abs(det(map.jacobian(p)) - 1.0));
  }
  json out = run_header("roundtrip", c);
  out["input"] = io::to_json(h);
  out["twist_margin"] = map.twist_margin();
  out["grid"] = {{"lo", spec.lo}, {"hi", spec.hi}, {"points", spec.points}};
  out["tolerances"] = {{"closedness", a.options.closedness_tolerance},
                       {"panel", a.options.panel_tolerance},
                       {"fd_step", a.options.fd_step}};
  out["max_abs_error"] = max_err;
  out["quadrature_error"] = t.quadrature_error;
  out["max_closedness_residual"] = t.max_closedness_residual;
  out["det_points"] = a.det_points;
  out["max_det_deviation"] = max_det;
  emit_json(c, out);
  std::ostringstream csv;
  csv << "x,xp,recovered,exact\n";
  char buf[128];
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    for (std::size_t k = 0; k < t.xps.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t.xs[i], t.xps[k], t.at(i, k),
                    h.value({t.xs[i], t.xps[k]}));
      csv << buf;
    }
  }
  emit_csv(c, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points of lattice energies and twist maps"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--json", common.json_path, "JSON summary path (default stdout)");
    sub->add_option("--csv", common.csv_path, "CSV detail path");
    sub->add_option("--seed", common.seed, "seed for sampling");
  };

  CountArgs count_args;
  auto* count = app.add_subcommand("count", "count critical points of f_n or H_n");
  add_count_options(count, count_args, true);
  add_common(count);

  CountArgs growth_args;
  auto* growth = app.add_subcommand("growth", "growth rate of the critical-point counts");
  add_count_options(growth, growth_args, false);
  add_common(growth);

  CertifyArgs certify_args;
  auto* cert = app.add_subcommand("certify", "Morse stability certificate against a separable base");
  cert->add_option("--pot", certify_args.pot, "potential JSON")->required();
  cert->add_option("--base", certify_args.base, "base function JSON")->required();
  cert->add_option("--n", certify_args.n, "optionally count for N or LO..HI and compare");
  cert->add_option("--grid", certify_args.grid_points, "grid points for the bound on K");
  cert->add_option("--starts", certify_args.starts_per_dim, "Newton starts per dimension");
  add_common(cert);

  TangencyArgs tangency_args;
  auto* tan = app.add_subcommand("tangency", "homoclinic tangency construction");
  tan->add_option("--delta", tangency_args.delta, "delta");
  tan->add_option("--T", tangency_args.T, "flow time T");
  tan->add_option("--curve-samples", tangency_args.curve_samples, "x values on the homoclinic curve");
  tan->add_option("--n-max", tangency_args.n_max, "largest n for the window counts (odd n only)");
  tan->add_option("--window-samples", tangency_args.window_samples, "axis samples for the window counts");
  tan->add_option("--fd-step", tangency_args.fd_step, "finite-difference step for D(F0^4)");
  add_common(tan);

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Bezout upper and Morse lower bounds");
  bounds->add_option("--model", bounds_args.model, "algebraic model JSON")->required();
  bounds->add_option("--n", bounds_args.n, "n");
  bounds->add_option("--betti-sum", bounds_args.betti_sum, "sum of Betti numbers of the factor");
  bounds->add_option("--observed", bounds_args.observed, "observed count for the sandwich check");
  add_common(bounds);

  RoundtripArgs roundtrip_args;
  auto* rt = app.add_subcommand("roundtrip", "generating function -> twist map -> generating function");
  rt->add_option("--gen", roundtrip_args.gen, "generating function JSON")->required();
  rt->add_option("--grid", roundtrip_args.grid, "grid points per axis");
  rt->add_option("--det-points", roundtrip_args.det_points, "random points for the determinant check");
  rt->add_option("--closedness-tol", roundtrip_args.options.closedness_tolerance, "closedness tolerance");
  rt->add_option("--panel-tol", roundtrip_args.options.panel_tolerance, "quadrature panel tolerance");
  rt->add_option("--fd-step", roundtrip_args.options.fd_step, "finite-difference step for closedness");
  add_common(rt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*count) return cmd_count(count_args, common);
    if (*growth) return cmd_growth(growth_args, common);
    if (*cert) return cmd_certify(certify_args, common);
    if (*tan) return cmd_tangency(tangency_args, common);
    if (*bounds) return cmd_bounds(bounds_args, common);
    if (*rt) return cmd_roundtrip(roundtrip_args, common);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
