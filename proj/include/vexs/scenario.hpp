#pragma once

// JSON scenarios: strict parsing of fields, exponents and quadrature specs,
// and a single executor shared by the command line and the Python module.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "vexs/convergence.hpp"
#include "vexs/exponents.hpp"
#include "vexs/fields.hpp"
#include "vexs/quadrature_spec.hpp"

namespace vexs {

using json = nlohmann::json;

inline constexpr const char* kSchema = "vexs/1";

// Each parser rejects unknown keys and wrong types with ConfigError.
ScalarField field_from_json(const json& j);
ExponentField exponent_from_json(const json& j);
QuadratureSpec quadrature_from_json(const json& j);

json to_json(const QuadratureSpec& q);
json to_json(const FunctionalValue& v);
json to_json(const SweepReport& r);

// "parameter value" lines preceded by a "# target <value>" line.
std::string plot_data(const SweepReport& r);

struct ScenarioOutput {
  std::string name;
  json report;
  std::string summary;
  // Tabular results (header row first), when the operation produces a table.
  std::optional<std::string> csv;
  std::optional<std::string> plot;
};

// Operations: constants, modular, norm, fracnorm, nguyen, eps, bbm, sweep,
// lemma41, maximal, counterexample, bmo, diagnose-exponent, keyineq,
// luxnorm, uniform-bound. Numerical failures propagate as DivergenceError.
ScenarioOutput run_scenario(const json& scenario);

// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Reads and parses a JSON file; ConfigError if missing or malformed.
json load_json_file(const std::filesystem::path& path);

}  // namespace vexs
