#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "json.hpp"
#include "lattice/bezout_bounds.hpp"
#include "lattice/critical_counting.hpp"
#include "lattice/potentials.hpp"
#include "lattice/stability_certificate.hpp"
#include "lattice/tangency_lab.hpp"

namespace lattice::io {

using json = nlohmann::ordered_json;

/// Parses a file; malformed JSON becomes a ValidationError.
json load_json_file(const std::filesystem::path& path);

// Schema:
//   potential:            {"terms": [{"k": int, "l": int, "amp": num, "phase": num}, ...]}
//   generating function:  the same plus "a", "b", "c" (numbers)
//   base function h:      {"terms": [{"k": int, "amp": num, "phase": num}, ...]}
//   algebraic model:      {"d": int, "r": int, "R": int, "degrees": [int...], "N": int}
// Unknown keys are rejected.

bool is_generating_function(const json& j);
TrigPotential potential_from_json(const json& j);
GeneratingFunction generating_from_json(const json& j);
TrigPolynomial1D base_from_json(const json& j);
AlgebraicModel model_from_json(const json& j);

json to_json(const TrigPotential& p);
json to_json(const GeneratingFunction& h);
json to_json(const CountReport& r);
json to_json(const MorseCertificate& c);
json to_json(const HyperbolicityReport& h);
json to_json(const CurveCheckReport& c);
json to_json(const LambdaCount& l);
json to_json(const BezoutBound& b);

json tolerances_json();

std::string big_to_string(const BigInt& v);

/// One row per critical point: n, method, x_0..x_N (padded), grad_norm,
/// index, min_abs_eig. Doubles are written with 17 significant digits.
void write_points_csv(std::ostream& os, std::span<const CountReport> reports);

}  // namespace lattice::io
