#include "gouldrn/scenario.hpp"

#include <fstream>
#include <sstream>

namespace gouldrn {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field " + field + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) field_error(field + "." + key, "missing");
  return j.at(key);
}

std::size_t index_from_json(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) field_error(field, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

FiniteSpace space_from_json(const Json& j) {
  const Json& pts = require(j, "points", "space");
  const Json& atoms = require(j, "atoms", "space");
  if (!pts.is_array()) field_error("space.points", "expected an array of names");
  if (!atoms.is_array()) field_error("space.atoms", "expected an array of point-index arrays");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_string()) field_error("space.points[" + std::to_string(i) + "]", "expected a string");
    names.push_back(pts[i].get<std::string>());
  }
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    std::string f = "space.atoms[" + std::to_string(a) + "]";
    if (!atoms[a].is_array()) field_error(f, "expected an array of point indices");
    blocks.emplace_back();
    for (std::size_t k = 0; k < atoms[a].size(); ++k) {
      blocks.back().push_back(index_from_json(atoms[a][k], f + "[" + std::to_string(k) + "]"));
    }
  }
  return FiniteSpace(std::move(names), std::move(blocks));
}

template <class V, class Parse>
SetFunction<V> table_from_json(const Json& values, const std::string& generator, std::size_t atoms, const V& zero,
                               const std::string& field, Parse&& parse) {
  if (!values.is_object()) field_error(field, "expected an object keyed by atom sets");
  if (generator == "additive-from-atoms") {
    std::vector<std::optional<V>> given(atoms);
    for (auto it = values.begin(); it != values.end(); ++it) {
      std::string f = field + "[" + it.key() + "]";
      AtomSet s = set_from_key(it.key(), f);
      if (s.size() != 1 || s.lowest() >= atoms) field_error(f, "additive generator takes single atoms only");
      given[s.lowest()] = parse(it.value(), f);
    }
    std::vector<V> atom_values;
    for (std::size_t a = 0; a < atoms; ++a) {
      if (!given[a]) field_error(field, "no value for atom " + std::to_string(a));
      atom_values.push_back(*given[a]);
    }
    return SetFunction<V>::additive_from_atoms(atom_values, zero);
  }
  if (generator != "tabulated") field_error(field, "unknown generator '" + generator + "'");
  std::vector<std::optional<V>> table(std::size_t{1} << atoms);
  for (auto it = values.begin(); it != values.end(); ++it) {
    std::string f = field + "[" + it.key() + "]";
    AtomSet s = set_from_key(it.key(), f);
    if (!s.subset_of(AtomSet::first_n(atoms))) field_error(f, "names atoms outside the space");
    table[s.bits] = parse(it.value(), f);
  }
  std::vector<V> out;
  for (std::size_t s = 0; s < table.size(); ++s) {
    if (!table[s]) {
      if (s == 0) {
        out.push_back(zero);
        continue;
      }
      field_error(field, "no value for " + AtomSet{static_cast<std::uint32_t>(s)}.str());
    }
    out.push_back(*table[s]);
  }
  return SetFunction<V>(atoms, std::move(out));
}

NamedMeasure measure_from_json(const Json& j, std::size_t atoms, const std::string& field) {
  const Json& kind = require(j, "kind", field);
  std::string generator = j.contains("generator") ? j.at("generator").get<std::string>() : "tabulated";
  const Json& values = require(j, "values", field);
  NamedMeasure out{generator, ScalarSetFn(0, {Rational(0)}), {}, {}};
  if (kind == "scalar") {
    out.fn = table_from_json<Rational>(values, generator, atoms, Rational(0), field + ".values",
                                       [](const Json& v, const std::string& f) { return rational_from_json(v, f); });
    out.flags = classify(std::get<ScalarSetFn>(out.fn));
  } else if (kind == "multi") {
    // the dimension comes from the first listed value
    int dim = 1;
    for (auto it = values.begin(); it != values.end(); ++it) {
      dim = body_from_json(it.value(), field + ".values[" + it.key() + "]").dim();
      break;
    }
    out.fn = table_from_json<ConvexBody>(values, generator, atoms, ConvexBody::zero(dim), field + ".values",
                                         [](const Json& v, const std::string& f) { return body_from_json(v, f); });
    out.flags = classify(std::get<MultiSetFn>(out.fn));
  } else {
    field_error(field + ".kind", "expected \"scalar\" or \"multi\"");
  }
  if (j.contains("claims")) {
    const Json& c = j.at("claims");
    if (!c.is_object()) field_error(field + ".claims", "expected an object of booleans");
    for (auto it = c.begin(); it != c.end(); ++it) {
      if (it.key() != "monotone" && it.key() != "subadditive" && it.key() != "additive") {
        field_error(field + ".claims." + it.key(), "unknown flag");
      }
      if (!it.value().is_boolean()) field_error(field + ".claims." + it.key(), "expected a boolean");
      out.claims[it.key()] = it.value().get<bool>();
    }
  }
  return out;
}

Integrand integrand_from_json(const Json& j, const FiniteSpace& space, const std::string& field) {
  const Json& values = require(j, "values", field);
  Integrand f = Integrand::constant(space.point_count(), 0);
  if (values.is_array()) {
    if (values.size() != space.point_count()) field_error(field + ".values", "expected one value per point");
    for (std::size_t p = 0; p < values.size(); ++p) {
      f.values[p] = rational_from_json(values[p], field + ".values[" + std::to_string(p) + "]");
    }
    return f;
  }
  if (!values.is_object()) field_error(field + ".values", "expected an array or an object keyed by point name");
  const auto& names = space.point_names();
  std::vector<bool> seen(names.size(), false);
  for (auto it = values.begin(); it != values.end(); ++it) {
    auto pos = std::find(names.begin(), names.end(), it.key());
    if (pos == names.end()) field_error(field + ".values." + it.key(), "unknown point");
    std::size_t p = static_cast<std::size_t>(pos - names.begin());
    f.values[p] = rational_from_json(it.value(), field + ".values." + it.key());
    seen[p] = true;
  }
  for (std::size_t p = 0; p < names.size(); ++p) {
    if (!seen[p]) field_error(field + ".values", "no value for point " + names[p]);
  }
  return f;
}

Config config_from_json(const Json& j) {
  Config c;
  if (j.contains("tolerance")) {
    c.tolerance_exact = rational_from_json(j.at("tolerance"), "config.tolerance");
    if (c.tolerance_exact <= 0) throw Error(ErrorKind::InvariantError, "config.tolerance must be positive");
    c.tolerance = to_double(c.tolerance_exact);
  }
  if (j.contains("max_atoms")) {
    c.guards.max_atoms = index_from_json(j.at("max_atoms"), "config.max_atoms");
    if (c.guards.max_atoms == 0) throw Error(ErrorKind::InvariantError, "config.max_atoms must be positive");
  }
  if (j.contains("max_tag_choices")) {
    c.guards.max_tag_choices = index_from_json(j.at("max_tag_choices"), "config.max_tag_choices");
    if (c.guards.max_tag_choices == 0) throw Error(ErrorKind::InvariantError, "config.max_tag_choices must be positive");
  }
  if (j.contains("seed")) c.seed = index_from_json(j.at("seed"), "config.seed");
  return c;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

const ScalarSetFn& NamedMeasure::scalar() const {
  if (!is_scalar()) throw Error(ErrorKind::InvariantError, "expected a scalar set function");
  return std::get<ScalarSetFn>(fn);
}

const MultiSetFn& NamedMeasure::multi() const {
  if (is_scalar()) throw Error(ErrorKind::InvariantError, "expected a set-valued set function");
  return std::get<MultiSetFn>(fn);
}

const NamedMeasure& Scenario::measure(const std::string& name) const {
  auto it = measures.find(name);
  if (it == measures.end()) throw Error(ErrorKind::InvariantError, "unknown measure '" + name + "'");
  return it->second;
}

const Integrand& Scenario::integrand(const std::string& name) const {
  auto it = integrands.find(name);
  if (it == integrands.end()) throw Error(ErrorKind::InvariantError, "unknown integrand '" + name + "'");
  return it->second;
}

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      field_error(field, "not a rational: \"" + j.get<std::string>() + "\"");
    }
  }
  if (j.is_number()) return parse_rational(j.dump());
  field_error(field, "expected a rational string such as \"3/4\"");
}

Json rational_to_json(const Rational& q) { return to_string(q); }

ConvexBody body_from_json(const Json& j, const std::string& field) {
  const Json& dim = require(j, "dim", field);
  if (dim == 1) {
    Rational lo = rational_from_json(require(j, "lo", field), field + ".lo");
    Rational hi = rational_from_json(require(j, "hi", field), field + ".hi");
    return ConvexBody::interval(lo, hi);
  }
  if (dim == 2) {
    const Json& vs = require(j, "vertices", field);
    if (!vs.is_array()) field_error(field + ".vertices", "expected an array of [x, y] pairs");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      std::string f = field + ".vertices[" + std::to_string(i) + "]";
      if (!vs[i].is_array() || vs[i].size() != 2) field_error(f, "expected [x, y]");
      pts.push_back({rational_from_json(vs[i][0], f + "[0]"), rational_from_json(vs[i][1], f + "[1]")});
    }
    return ConvexBody::hull(pts);
  }
  field_error(field + ".dim", "expected 1 or 2");
}

Json body_to_json(const ConvexBody& b) {
  Json j;
  j["dim"] = b.dim();
  if (b.dim() == 1) {
    j["lo"] = to_string(b.lo());
    j["hi"] = to_string(b.hi());
  } else {
    Json vs = Json::array();
    for (const auto& v : b.vertices()) vs.push_back(Json::array({to_string(v.x), to_string(v.y)}));
    j["vertices"] = vs;
  }
  return j;
}

std::string body_text(const ConvexBody& b) {
  if (b.dim() == 1) return "[" + to_string(b.lo()) + "," + to_string(b.hi()) + "]";
  std::string s = "conv{";
  for (std::size_t i = 0; i < b.vertices().size(); ++i) {
    if (i) s += ";";
    s += "(" + to_string(b.vertices()[i].x) + "," + to_string(b.vertices()[i].y) + ")";
  }
  return s + "}";
}

AtomSet set_from_key(const std::string& key, const std::string& field) {
  AtomSet s;
  std::string digits;
  auto flush = [&] {
    if (digits.empty()) return;
    std::size_t a = std::stoul(digits);
    if (a >= FiniteSpace::kMaxAtoms) field_error(field, "atom index " + digits + " out of range");
    s = s | AtomSet::single(a);
    digits.clear();
  };
  for (char c : key) {
    if (c >= '0' && c <= '9') {
      digits += c;
    } else if (c == ',' || c == ' ' || c == '{' || c == '}' || c == '[' || c == ']') {
      flush();
    } else {
      field_error(field, "bad atom set key \"" + key + "\"");
    }
  }
  flush();
  return s;
}

AtomSet set_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) return set_from_key(j.get<std::string>(), field);
  if (!j.is_array()) field_error(field, "expected an array of atom indices");
  AtomSet s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::size_t a = index_from_json(j[i], field + "[" + std::to_string(i) + "]");
    if (a >= FiniteSpace::kMaxAtoms) field_error(field, "atom index out of range");
    s = s | AtomSet::single(a);
  }
  return s;
}

Json set_to_json(AtomSet s) {
  Json j = Json::array();
  for (std::size_t a : s.atoms()) j.push_back(a);
  return j;
}

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "line 1: scenario must be a JSON object");
  try {
    Scenario sc{space_from_json(require(doc, "space", "scenario")), {}, {}, {}, {}};
    if (doc.contains("config")) sc.config = config_from_json(doc.at("config"));
    if (doc.contains("measures")) {
      const Json& ms = doc.at("measures");
      if (!ms.is_object()) field_error("measures", "expected an object keyed by name");
      for (auto it = ms.begin(); it != ms.end(); ++it) {
        sc.measures.emplace(it.key(), measure_from_json(it.value(), sc.space.atom_count(), "measures." + it.key()));
      }
    }
    if (doc.contains("integrands")) {
      const Json& fs = doc.at("integrands");
      if (!fs.is_object()) field_error("integrands", "expected an object keyed by name");
      for (auto it = fs.begin(); it != fs.end(); ++it) {
        sc.integrands.emplace(it.key(), integrand_from_json(it.value(), sc.space, "integrands." + it.key()));
      }
    }
    if (doc.contains("tasks")) {
      const Json& ts = doc.at("tasks");
      if (!ts.is_array()) field_error("tasks", "expected an array");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        std::string f = "tasks[" + std::to_string(i) + "]";
        const Json& op = require(ts[i], "op", f);
        if (!op.is_string()) field_error(f + ".op", "expected a string");
        for (const char* ref : {"measure", "gamma", "M", "reduced"}) {
          if (ts[i].contains(ref) && !sc.measures.contains(ts[i].at(ref).get<std::string>())) {
            throw Error(ErrorKind::InvariantError, f + " references undeclared measure '" +
                                                       ts[i].at(ref).get<std::string>() + "'");
          }
        }
        if (ts[i].contains("integrand") && !sc.integrands.contains(ts[i].at("integrand").get<std::string>())) {
          throw Error(ErrorKind::InvariantError,
                      f + " references undeclared integrand '" + ts[i].at("integrand").get<std::string>() + "'");
        }
        sc.tasks.push_back(Task{op.get<std::string>(), ts[i]});
      }
    }
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("schema: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Json scenario_to_json(const Scenario& sc) {
  Json doc;
  Json space;
  space["points"] = sc.space.point_names();
  space["atoms"] = sc.space.atoms();
  doc["space"] = space;
  Json ms = Json::object();
  for (const auto& [name, m] : sc.measures) {
    Json j;
    j["kind"] = m.is_scalar() ? "scalar" : "multi";
    j["generator"] = "tabulated";
    Json values = Json::object();
    const std::size_t sets = std::size_t{1} << sc.space.atom_count();
    for (std::size_t s = 0; s < sets; ++s) {
      AtomSet e{static_cast<std::uint32_t>(s)};
      values[e.str()] = m.is_scalar() ? rational_to_json(m.scalar()(e)) : body_to_json(m.multi()(e));
    }
    j["values"] = values;
    if (!m.claims.empty()) {
      Json c = Json::object();
      for (const auto& [k, v] : m.claims) c[k] = v;
      j["claims"] = c;
    }
    ms[name] = j;
  }
  doc["measures"] = ms;
  Json fs = Json::object();
  for (const auto& [name, f] : sc.integrands) {
    Json vals = Json::array();
    for (const auto& v : f.values) vals.push_back(to_string(v));
    fs[name] = Json{{"values", vals}};
  }
  doc["integrands"] = fs;
  Json ts = Json::array();
  for (const auto& t : sc.tasks) ts.push_back(t.params);
  doc["tasks"] = ts;
  Json cfg;
  cfg["tolerance"] = to_string(sc.config.tolerance_exact);
  cfg["max_atoms"] = sc.config.guards.max_atoms;
  cfg["max_tag_choices"] = sc.config.guards.max_tag_choices;
  cfg["seed"] = sc.config.seed;
  doc["config"] = cfg;
  return doc;
}

}  // namespace gouldrn
