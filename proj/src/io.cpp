#include "lattice/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <string>

#include "lattice/errors.hpp"

namespace lattice::io {

namespace {

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ValidationError(what + ": unknown key \"" + key + "\"");
  }
}

double number_field(const json& j, const char* key, const std::string& what, bool required = true) {
  if (!j.contains(key)) {
    if (required) throw ValidationError(what + ": missing \"" + key + "\"");
    return 0.0;
  }
  const json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(what + ": \"" + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(what + ": \"" + key + "\" must be finite");
  return d;
}

int int_field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ValidationError(what + ": missing \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(what + ": \"" + key + "\" must be an integer");
  const auto i = v.get<long long>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw ValidationError(what + ": \"" + key + "\" out of range");
  }
  return static_cast<int>(i);
}

const json& terms_array(const json& j, const std::string& what) {
  if (!j.contains("terms")) throw ValidationError(what + ": missing \"terms\"");
  const json& t = j.at("terms");
  if (!t.is_array()) throw ValidationError(what + ": \"terms\" must be an array");
  return t;
}

std::vector<TrigTerm> trig_terms(const json& j, const std::string& what) {
  std::vector<TrigTerm> out;
  std::size_t i = 0;
  for (const json& t : terms_array(j, what)) {
    const std::string w = what + " term " + std::to_string(i++);
    require_object(t, w);
    reject_unknown(t, {"k", "l", "amp", "phase"}, w);
    out.push_back({int_field(t, "k", w), int_field(t, "l", w), number_field(t, "amp", w),
                   number_field(t, "phase", w, false)});
  }
  return out;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json matrix_json(const Matrix2& m) { return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})}); }

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

bool is_generating_function(const json& j) {
  return j.is_object() && (j.contains("a") || j.contains("b") || j.contains("c"));
}

TrigPotential potential_from_json(const json& j) {
  const std::string what = "potential";
  require_object(j, what);
  reject_unknown(j, {"terms"}, what);
  return TrigPotential(trig_terms(j, what));
}

GeneratingFunction generating_from_json(const json& j) {
  const std::string what = "generating function";
  require_object(j, what);
  reject_unknown(j, {"terms", "a", "b", "c"}, what);
  return GeneratingFunction(number_field(j, "a", what, false), number_field(j, "b", what, false),
                            number_field(j, "c", what, false), TrigPotential(trig_terms(j, what)));
}

TrigPolynomial1D base_from_json(const json& j) {
  const std::string what = "base function";
  require_object(j, what);
  reject_unknown(j, {"terms"}, what);
  std::vector<TrigTerm1D> out;
  std::size_t i = 0;
  for (const json& t : terms_array(j, what)) {
    const std::string w = what + " term " + std::to_string(i++);
    require_object(t, w);
    reject_unknown(t, {"k", "amp", "phase"}, w);
    out.push_back({int_field(t, "k", w), number_field(t, "amp", w), number_field(t, "phase", w, false)});
  }
  return TrigPolynomial1D(std::move(out));
}

AlgebraicModel model_from_json(const json& j) {
  const std::string what = "algebraic model";
  require_object(j, what);
  reject_unknown(j, {"d", "r", "R", "degrees", "N"}, what);
  AlgebraicModel m;
  m.d = int_field(j, "d", what);
  m.r = int_field(j, "r", what);
  m.R = int_field(j, "R", what);
  m.N = int_field(j, "N", what);
  if (!j.contains("degrees") || !j.at("degrees").is_array()) {
    throw ValidationError(what + ": \"degrees\" must be an array");
  }
  for (const json& d : j.at("degrees")) {
    if (!d.is_number_integer()) throw ValidationError(what + ": degrees must be integers");
    m.degrees.push_back(d.get<int>());
  }
  m.validate();
  return m;
}

json to_json(const TrigPotential& p) {
  json terms = json::array();
  for (const TrigTerm& t : p.terms()) terms.push_back({{"k", t.k}, {"l", t.l}, {"amp", t.amp}, {"phase", t.phase}});
  return {{"terms", terms}};
}

json to_json(const GeneratingFunction& h) {
  json j = to_json(h.periodic_part());
  j["a"] = h.a();
  j["b"] = h.b();
  j["c"] = h.c();
  return j;
}

json tolerances_json() {
  return {{"polish", kPolishTolerance}, {"degeneracy", kDegeneracyThreshold}, {"dedup", kDedupDistance}};
}

json to_json(const CountReport& r) {
  json j = {{"n", r.n},
            {"method", to_string(r.method)},
            {"count", r.count},
            {"resolution", r.resolution},
            {"degenerate_flag", r.degenerate_flag},
            {"saturated", r.saturated},
            {"samples", r.samples},
            {"refinement_levels", r.refinement_levels}};
  int alternating = 0;
  bool indices_known = true;
  for (const CriticalPoint& p : r.points) {
    if (!p.morse_index) {
      indices_known = false;
      continue;
    }
    alternating += (*p.morse_index % 2 == 0) ? 1 : -1;
  }
  j["alternating_index_sum"] = indices_known ? json(alternating) : json(nullptr);
  j["tolerances"] = tolerances_json();
  return j;
}

std::string big_to_string(const BigInt& v) { return v.str(); }

json to_json(const MorseCertificate& c) {
  json crit = json::array();
  for (double x : c.base.critical_points) crit.push_back(x);
  return {{"base",
           {{"d", c.base.crit_count},
            {"K_lower", c.base.k_lower},
            {"K_sample_min", c.base.k_sample_min},
            {"slack", c.base.slack},
            {"grid_points", c.base.grid_points},
            {"critical_points", crit}}},
          {"gradient_bound", c.gradient_bound},
          {"hessian_bound", c.hessian_bound},
          {"bound", c.bound},
          {"gap", c.gap},
          {"valid", c.valid},
          {"sampled_bound", c.sampled_bound},
          {"predicted", std::to_string(c.base.crit_count) + "^(n+1)"}};
}

json to_json(const HyperbolicityReport& h) {
  return {{"jacobian", matrix_json(h.jacobian)},
          {"lambda", h.lambda},
          {"lambda_inv", h.lambda_inv},
          {"product", h.product},
          {"predicted_lambda", h.predicted_lambda},
          {"unstable_direction", point_json(h.unstable_direction)},
          {"stable_direction", point_json(h.stable_direction)},
          {"fd_step", h.fd_step}};
}

json to_json(const CurveCheckReport& c) {
  json off = json::array();
  for (Point2 p : c.off_level_points) off.push_back(point_json(p));
  return {{"samples", c.samples},
          {"flow_time", c.flow_time},
          {"max_level_residual", c.max_level_residual},
          {"max_invariance_residual", c.max_invariance_residual},
          {"meets_axis", c.meets_axis},
          {"axis_crossing", point_json(c.axis_crossing)},
          {"axis_crossing_slope", c.axis_crossing_slope},
          {"off_level_points", off}};
}

json to_json(const LambdaCount& l) {
  return {{"n", l.n},
          {"count", l.count},
          {"coarse_count", l.coarse_count},
          {"stable", l.stable},
          {"zeros", l.zeros}};
}

json to_json(const BezoutBound& b) {
  return {{"base", big_to_string(b.base)},
          {"exponent", big_to_string(b.exponent)},
          {"sites", b.sites},
          {"value", big_to_string(b.value)}};
}

void write_points_csv(std::ostream& os, std::span<const CountReport> reports) {
  int width = 0;
  for (const CountReport& r : reports) width = std::max(width, r.n + 1);
  os << "n,method";
  for (int i = 0; i < width; ++i) os << ",x_" << i;
  os << ",grad_norm,index,min_abs_eig\n";
  for (const CountReport& r : reports) {
    for (const CriticalPoint& p : r.points) {
      os << r.n << ',' << to_string(r.method);
      const auto v = p.config.coords();
      for (int i = 0; i < width; ++i) {
        os << ',';
        if (static_cast<std::size_t>(i) < v.size()) write_double(os, v[i]);
      }
      os << ',';
      write_double(os, p.grad_norm);
      os << ',';
      if (p.morse_index) os << *p.morse_index;
      os << ',';
      write_double(os, p.min_abs_eig);
      os << '\n';
    }
  }
}

}  // namespace lattice::io
