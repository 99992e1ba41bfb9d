#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gouldrn/integral.hpp"
#include "gouldrn/set_function.hpp"

namespace gouldrn {

using Json = nlohmann::ordered_json;

struct NamedMeasure {
  std::string generator;                        ///< "tabulated" or "additive-from-atoms"
  std::variant<ScalarSetFn, MultiSetFn> fn;
  Flags flags;                                  ///< computed at load
  std::map<std::string, bool> claims;           ///< declared flags, checked by the classify task

  bool is_scalar() const { return std::holds_alternative<ScalarSetFn>(fn); }
  const ScalarSetFn& scalar() const;
  const MultiSetFn& multi() const;
};

struct Task {
  std::string op;
  Json params;  ///< the whole task object
};

struct Config {
  double tolerance = 1e-9;
  Rational tolerance_exact{1, 1000000000};
  Guards guards;
  std::uint64_t seed = 1;
};

struct Scenario {
  FiniteSpace space;
  std::map<std::string, NamedMeasure> measures;
  std::map<std::string, Integrand> integrands;
  std::vector<Task> tasks;
  Config config;

  const NamedMeasure& measure(const std::string& name) const;
  const Integrand& integrand(const std::string& name) const;
};

/// Parses and validates a scenario document. Syntax errors raise ParseError
/// with the line; schema errors raise ParseError naming the field; set
/// function axioms raise InvariantError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

Json scenario_to_json(const Scenario& scenario);

// Field-level conversions, shared with reports.

Rational rational_from_json(const Json& j, const std::string& field);
Json rational_to_json(const Rational& q);
ConvexBody body_from_json(const Json& j, const std::string& field);
Json body_to_json(const ConvexBody& b);
/// Atom-index set from an array [0,2] or a key such as "{0,2}".
AtomSet set_from_json(const Json& j, const std::string& field);
AtomSet set_from_key(const std::string& key, const std::string& field);
Json set_to_json(AtomSet s);
/// Text form of a body for report cells.
std::string body_text(const ConvexBody& b);

}  // namespace gouldrn
