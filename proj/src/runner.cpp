#include "gouldrn/runner.hpp"

#include <fstream>

namespace gouldrn {

namespace {

std::string value_text(const Rational& q) { return to_string(q); }
std::string value_text(const ConvexBody& b) { return body_text(b); }
std::string value_text(const SupportFn& f) {
  if (f.is_body()) return "U" + body_text(f.body());
  return "U" + body_text(f.plus()) + "-U" + body_text(f.minus());
}
std::string value_text(bool b) { return b ? "true" : "false"; }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Accumulates rows for one task; ids are prefixed with the task index.
class TaskRows {
 public:
  TaskRows(Report& report, std::size_t index, const std::string& op)
      : report_(report), prefix_("t" + std::to_string(index) + "/" + op + "/") {}

  void add(const std::string& id, const std::string& ref, bool passed, const std::string& value, double residual = 0.0,
           double tol = 0.0) {
    report_.rows.push_back(Check{prefix_ + id, ref, passed, value, residual, tol});
  }

  void merge(const std::vector<Check>& checks) {
    for (Check c : checks) {
      c.id = prefix_ + c.id;
      report_.rows.push_back(std::move(c));
    }
  }

 private:
  Report& report_;
  std::string prefix_;
};

AtomSet task_set(const Scenario& sc, const Json& t, const char* key = "set") {
  if (!t.contains(key)) return sc.space.all();
  AtomSet s = set_from_json(t.at(key), key);
  sc.space.require_set(s);
  return s;
}

PointSet task_points(const Scenario& sc, const Json& t) {
  PointSet out;
  if (!t.contains("points")) return out;
  const auto& names = sc.space.point_names();
  for (const Json& p : t.at("points")) {
    if (p.is_string()) {
      auto pos = std::find(names.begin(), names.end(), p.get<std::string>());
      if (pos == names.end()) throw Error(ErrorKind::InvariantError, "unknown point " + p.get<std::string>());
      out.insert(static_cast<std::size_t>(pos - names.begin()));
    } else {
      std::size_t i = p.get<std::size_t>();
      if (i >= sc.space.point_count()) throw Error(ErrorKind::InvariantError, "point index out of range");
      out.insert(i);
    }
  }
  return out;
}

std::string measure_name(const Json& t) {
  if (t.contains("measure")) return t.at("measure").get<std::string>();
  if (t.contains("M")) return t.at("M").get<std::string>();
  throw Error(ErrorKind::InvariantError, "task names no measure");
}

Rational task_rational(const Json& t, const char* key, const Rational& fallback) {
  return t.contains(key) ? rational_from_json(t.at(key), key) : fallback;
}

bool flag(const Json& t, const char* key) { return t.contains(key) && t.at(key).get<bool>(); }

/// Calls fn with the task's measure as ScalarSetFn, MultiSetFn, or (when
/// "embedded" is set on a multi measure) its EmbeddedSetFn.
template <class Fn>
void with_measure(const Scenario& sc, const Json& t, Fn&& fn) {
  const NamedMeasure& m = sc.measure(measure_name(t));
  if (m.is_scalar()) {
    fn(m.scalar(), m.flags);
  } else if (flag(t, "embedded")) {
    EmbeddedSetFn um = embed(m.multi());
    fn(um, classify(um));
  } else {
    fn(m.multi(), m.flags);
  }
}

bool zero_or_within(const Real& r, double tol) { return r.is_exact() ? r == Real(0) : r.value() <= tol; }

void task_classify(const Scenario& sc, const Json& t, TaskRows& rows) {
  const NamedMeasure& m = sc.measure(measure_name(t));
  auto witness = [](const std::optional<SetPair>& p) {
    return p ? " (" + p->first.str() + ", " + p->second.str() + ")" : std::string();
  };
  const std::pair<const char*, std::pair<bool, std::string>> flags[] = {
      {"monotone", {m.flags.monotone, witness(m.flags.monotone_violation)}},
      {"subadditive", {m.flags.subadditive, witness(m.flags.subadditive_violation)}},
      {"additive", {m.flags.additive, witness(m.flags.additive_violation)}},
  };
  for (const auto& [name, info] : flags) {
    auto claim = m.claims.find(name);
    bool ok = claim == m.claims.end() || claim->second == info.first;
    rows.add(name, "set-function-classification", ok, value_text(info.first) + info.second);
  }
}

void task_variation(const Scenario& sc, const Json& t, TaskRows& rows) {
  AtomSet e = task_set(sc, t);
  with_measure(sc, t, [&](const auto& m, const Flags& flags) {
    Real v = variation(m, e, flags.subadditive, sc.config.guards);
    rows.add("variation" + e.str(), "variation", true, v.str());
    rows.add("dominates" + e.str(), "variation-properties", magnitude(m(e)) <= v || near(magnitude(m(e)), v, 1e-12),
             magnitude(m(e)).str() + " <= " + v.str());
    if (flags.subadditive && e.size() <= sc.config.guards.max_atoms) {
      Real brute = variation_by_enumeration(m, e, sc.config.guards);
      Real gap = abs(brute - v);
      rows.add("fast-path" + e.str(), "variation-additivity", zero_or_within(gap, sc.config.tolerance), brute.str(),
               gap.value(), sc.config.tolerance);
    }
  });
}

void task_semivariation(const Scenario& sc, const Json& t, TaskRows& rows) {
  PointSet pts = task_points(sc, t);
  with_measure(sc, t, [&](const auto& m, const Flags&) {
    Real star = semivariation(m, sc.space, pts);
    Real tilde = mu_tilde(m, sc.space, pts, sc.config.guards);
    rows.add("semivariation", "semivariation", true, star.str());
    rows.add("mu-tilde", "outer-variation", true, tilde.str());
    rows.add("semivariation-below-variation", "semivariation", star <= tilde || near(star, tilde, 1e-12),
             star.str() + " <= " + tilde.str());
  });
}

template <class V>
void expect_value(const Json& t, const V& value, double tol, TaskRows& rows) {
  if (!t.contains("expect") || !t.at("expect").contains("value")) return;
  const Json& ev = t.at("expect").at("value");
  if constexpr (std::is_same_v<V, Rational>) {
    Rational want = rational_from_json(ev, "expect.value");
    rows.add("expected-value", "integral-value", want == value, value_text(value), to_double(abs(Rational(want - value))));
  } else if constexpr (std::is_same_v<V, ConvexBody>) {
    ConvexBody want = body_from_json(ev, "expect.value");
    Real gap = hausdorff(want, value);
    rows.add("expected-value", "integral-value", zero_or_within(gap, tol), value_text(value), gap.value(), tol);
  } else {
    ConvexBody want = body_from_json(ev, "expect.value");
    Real gap = sup_norm(embed(want) - value);
    rows.add("expected-value", "integral-value", zero_or_within(gap, tol), value_text(value), gap.value(), tol);
  }
}

void task_integrate(const Scenario& sc, const Json& t, TaskRows& rows) {
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  AtomSet e = task_set(sc, t);
  with_measure(sc, t, [&](const auto& m, const Flags&) {
    auto r = integrate(sc.space, f, m, e, sc.config.guards);
    bool ok = true;
    if (t.contains("expect") && t.at("expect").contains("integrable")) {
      ok = t.at("expect").at("integrable").get<bool>() == r.integrable;
    }
    rows.add("integrable" + e.str(), "finite-integrability-criterion", ok && (r.integrable == (r.tag_spread == Real(0))),
             value_text(r.integrable) + " spread=" + r.tag_spread.str());
    rows.add("integral" + e.str(), "finite-gould-integral", true, value_text(r.value));
    expect_value(t, r.value, sc.config.tolerance, rows);
  });
}

void task_integral_function(const Scenario& sc, const Json& t, TaskRows& rows) {
  with_measure(sc, t, [&](const auto& m, const Flags& flags) {
    auto lambda = integral_function(m);
    Flags lf = classify(lambda);
    rows.add("additive", "integral-function-additivity", lf.additive,
             lf.additive ? "additive" : "fails on " + lf.additive_violation->first.str());
    if (flags.additive) {
      bool same = true;
      for (std::size_t s = 0; s < m.table().size(); ++s) {
        if (!value_equal(m.table()[s], lambda.table()[s])) same = false;
      }
      rows.add("equals-measure", "additive-iff-integral-function", same, value_text(same));
    }
  });
}

void task_integrate_multimeasure(const Scenario& sc, const Json& t, TaskRows& rows) {
  const MultiSetFn& m = sc.measure(measure_name(t)).multi();
  MultimeasureIntegral r = integrate_multimeasure(m, sc.config.guards);
  double tol = sc.config.tolerance;
  rows.add("value", "multisubmeasure-integral", true, body_text(r.value));
  rows.add("sums-bounded", "multisubmeasure-integral", r.sums_bounded, std::to_string(r.partitions) + " partitions");
  rows.add("closure-of-sums", "multisubmeasure-integral", zero_or_within(r.gap, tol), body_text(r.hull_of_sums),
           r.gap.value(), tol);
}

void task_equivalence(const Scenario& sc, const Json& t, TaskRows& rows) {
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  AtomSet e = task_set(sc, t);
  const NamedMeasure& nm = sc.measure(measure_name(t));
  const NamedMeasure* reduced = t.contains("reduced") ? &sc.measure(t.at("reduced").get<std::string>()) : nullptr;
  double tol = sc.config.tolerance;
  if (nm.is_scalar()) {
    rows.merge(equivalence_suite(sc.space, f, nm.scalar(), e, tol, sc.config.guards,
                                 reduced ? &reduced->scalar() : nullptr));
  } else if (flag(t, "embedded")) {
    EmbeddedSetFn um = embed(nm.multi());
    std::optional<EmbeddedSetFn> ur;
    if (reduced) ur = embed(reduced->multi());
    rows.merge(equivalence_suite(sc.space, f, um, e, tol, sc.config.guards, ur ? &*ur : nullptr));
  } else {
    rows.merge(equivalence_suite(sc.space, f, nm.multi(), e, tol, sc.config.guards,
                                 reduced ? &reduced->multi() : nullptr));
  }
}

void task_variation_of_integral(const Scenario& sc, const Json& t, TaskRows& rows) {
  VariationOfIntegral r = variation_of_integral(sc.measure(measure_name(t)).multi(), sc.config.tolerance,
                                                sc.config.guards);
  rows.add("variation-equal", "integral-preserves-variation", r.variation_equal,
           r.first_variation_failure ? "fails on " + r.first_variation_failure->str() : "all sets", r.max_gap.value(),
           sc.config.tolerance);
  rows.add("inclusion", "measure-inside-integral-function", r.inclusion,
           r.first_inclusion_failure ? "fails on " + r.first_inclusion_failure->str() : "all sets");
}

void task_totally_measurable(const Scenario& sc, const Json& t, TaskRows& rows) {
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  Rational eps = task_rational(t, "eps", pow2(-10));
  with_measure(sc, t, [&](const auto& m, const Flags&) {
    TotalMeasurability r = totally_measurable(sc.space, f, m, eps, sc.config.guards);
    bool ok = !t.contains("expect") || t.at("expect").get<bool>() == r.holds;
    rows.add("eps=" + to_string(eps), "total-measurability", ok,
             value_text(r.holds) + " bad=" + r.bad.str() + " v=" + r.bad_variation.str());
  });
}

void task_simple_approx(const Scenario& sc, const Json& t, TaskRows& rows) {
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  int steps = t.contains("steps") ? t.at("steps").get<int>() : 20;
  with_measure(sc, t, [&](const auto& m, const Flags&) {
    SimpleApproximation r = simple_approx(sc.space, f, m, steps, sc.config.guards);
    for (std::size_t n = 0; n < r.epsilons.size(); ++n) {
      bool ok = r.exceptional_mu_tilde[n] < Real(r.epsilons[n]);
      rows.add("n=" + std::to_string(n + 1), "simple-approximation", ok, r.exceptional_mu_tilde[n].str());
    }
  });
}

void task_ob(const Scenario& sc, const Json& t, TaskRows& rows) {
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  AtomSet e = task_set(sc, t);
  with_measure(sc, t, [&](const auto& m, const Flags&) {
    auto r = integrate(sc.space, f, m, e, sc.config.guards);
    Partition atoms = Partition::atoms(e);
    Real total = ob_sum(sc.space, f, m, atoms, sc.config.guards);
    rows.add("ob-sum" + e.str(), "oscillation-bound", !r.integrable || total == Real(0), total.str());
    if (r.integrable) {
      TaggedPartition tp{atoms, {}};
      for (AtomSet b : atoms.blocks) tp.tags.push_back(sc.space.atom_points(b.lowest()).back());
      Real dev = block_deviation_sum(sc.space, f, m, tp, sc.config.guards);
      rows.add("block-deviation" + e.str(), "block-deviation-bound", zero_or_within(dev, sc.config.tolerance), dev.str(),
               dev.value(), sc.config.tolerance);
    }
  });
}

void task_chain(const Scenario& sc, const Json& t, TaskRows& rows) {
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  std::vector<Partition> chain;
  for (const Json& level : t.at("chain")) {
    std::vector<AtomSet> blocks;
    for (const Json& b : level) blocks.push_back(set_from_json(b, "chain"));
    AtomSet carrier;
    for (AtomSet b : blocks) carrier = carrier | b;
    chain.push_back(Partition::of(carrier, std::move(blocks)));
  }
  with_measure(sc, t, [&](const auto& m, const Flags&) {
    ChainEnvelopes env = chain_estimator(sc.space, f, m, chain);
    rows.add("nested", "chain-envelopes", env.nested, value_text(env.nested));
    rows.add("widths-non-increasing", "chain-envelopes", env.widths_non_increasing,
             value_text(env.widths_non_increasing));
    if (!chain.empty()) {
      Rational last = env.levels.back().max_width;
      bool integrable = integrate(sc.space, f, m, chain.back().carrier, sc.config.guards).integrable;
      rows.add("final-width", "chain-envelopes", !integrable || last == 0, to_string(last));
    }
  });
}

void task_series(const Scenario& sc, const Json& t, TaskRows& rows) {
  std::vector<Rational> coeffs;
  for (const Json& c : t.at("coeffs")) coeffs.push_back(rational_from_json(c, "coeffs"));
  std::vector<AtomSet> sets;
  for (const Json& s : t.at("sets")) sets.push_back(set_from_json(s, "sets"));
  with_measure(sc, t, [&](const auto& m, const Flags& flags) {
    auto r = series_integral(sc.space, coeffs, sets, m, flags, sc.config.guards);
    rows.add("series", "step-function-integral", r.agree, value_text(r.value));
  });
}

void task_strong_ac(const Scenario& sc, const Json& t, TaskRows& rows) {
  const MultiSetFn& gamma = sc.measure(t.at("gamma").get<std::string>()).multi();
  const MultiSetFn& m = sc.measure(measure_name(t)).multi();
  AdditiveMeasure v = variation_measure(m, sc.config.guards);
  Real b = strong_ac_constant(gamma, v);
  Real b0 = strong_ac_constant(gamma, variation_measure(integral_function(m), sc.config.guards));
  rows.add("b", "strong-absolute-continuity", true, b.str());
  rows.add("b-transfers", "strong-absolute-continuity", near(b, b0, 1e-9), b0.str());
}

Json range_json(const ApproxRange& r) {
  Json j;
  j["empty"] = r.empty;
  if (!r.empty) {
    j["lo"] = r.lo.str();
    j["hi"] = r.hi ? r.hi->str() : "inf";
  }
  return j;
}

std::string range_text(const ApproxRange& r) {
  if (r.empty) return "empty";
  return "[" + r.lo.str() + ", " + (r.hi ? r.hi->str() : "inf") + "]";
}

void task_approximate_range(const Scenario& sc, const Json& t, TaskRows& rows, Json& details) {
  const MultiSetFn& gamma = sc.measure(t.at("gamma").get<std::string>()).multi();
  const MultiSetFn& m = sc.measure(measure_name(t)).multi();
  AtomSet e = task_set(sc, t);
  Rational alpha = task_rational(t, "alpha", Rational(1, 4));
  AdditiveMeasure v = variation_measure(m, sc.config.guards);
  ApproxRange r = approximate_range(gamma, m, v, e, alpha);
  bool ok = !t.contains("expect_empty") || t.at("expect_empty").get<bool>() == r.empty;
  rows.add("range" + e.str(), "approximate-range", ok, range_text(r));
  if (!r.empty) {
    Rational pick = r.pick();
    bool transfers = in_range(gamma, integral_function(m), v, e, alpha, pick);
    rows.add("transfer" + e.str(), "approximate-range-transfer", transfers, to_string(pick));
  }
  details["range"] = range_json(r);
}

void task_exhaustion(const Scenario& sc, const Json& t, TaskRows& rows) {
  const MultiSetFn& gamma = sc.measure(t.at("gamma").get<std::string>()).multi();
  const MultiSetFn& m = sc.measure(measure_name(t)).multi();
  AtomSet e = task_set(sc, t);
  Rational alpha = task_rational(t, "alpha", Rational(1, 4));
  AdditiveMeasure v = variation_measure(m, sc.config.guards);
  std::vector<AtomSet> ex = check_exhaustive_hypothesis(gamma, m, v, alpha, e);
  std::string text;
  for (AtomSet b : ex) text += b.str();
  rows.add("exhaustion" + e.str(), "exhaustive-hypothesis", is_exhaustion(ex, e, v), text);
}

void add_rn_rows(const RnResult& r, double tol, TaskRows& rows) {
  rows.add("r-bound", "stage-value-bound", r.r_bound_ok, r.max_abs_r.str() + " <= " + r.r_bound.str());
  rows.add("cauchy", "stage-cauchy-bound", r.cauchy_ok, r.max_cauchy_gap.str());
  rows.add("transfer", "approximate-range-transfer", r.transfer_ok, value_text(r.transfer_ok));
  const auto& v = r.verification;
  for (std::size_t s = 0; s < v.residuals.size(); ++s) {
    AtomSet e{static_cast<std::uint32_t>(s)};
    bool bad = std::find(v.violations.begin(), v.violations.end(), e) != v.violations.end() ||
               std::find(v.not_integrable.begin(), v.not_integrable.end(), e) != v.not_integrable.end();
    rows.add("residual" + e.str(), "derivative-reproduces-gamma", !bad, v.residuals[s].str(), v.residuals[s].value(), tol);
  }
  rows.add("embedded-residual", "derivative-reproduces-gamma-embedded", v.max_embedded_residual.value() <= tol,
           v.max_embedded_residual.str(), v.max_embedded_residual.value(), tol);
}

void task_rn(const Scenario& sc, const Json& t, TaskRows& rows, Json& details) {
  const MultiSetFn& gamma = sc.measure(t.at("gamma").get<std::string>()).multi();
  const MultiSetFn& m = sc.measure(measure_name(t)).multi();
  Rational tol = task_rational(t, "tol", sc.config.tolerance_exact);
  RnResult r = rn_derive(sc.space, gamma, m, tol, sc.config.guards);
  std::string f;
  for (std::size_t a = 0; a < r.atom_values.size(); ++a) f += (a ? " " : "") + to_string(r.atom_values[a]);
  rows.add("derivative", "radon-nikodym", true, f);
  add_rn_rows(r, to_double(tol), rows);
  details["rn"] = rn_transcript(r);
}

void task_verify_rn(const Scenario& sc, const Json& t, TaskRows& rows) {
  const MultiSetFn& gamma = sc.measure(t.at("gamma").get<std::string>()).multi();
  const MultiSetFn& m = sc.measure(measure_name(t)).multi();
  const Integrand& f = sc.integrand(t.at("integrand").get<std::string>());
  double tol = to_double(task_rational(t, "tol", sc.config.tolerance_exact));
  RnVerification v = verify_rn(sc.space, gamma, m, f, tol, sc.config.guards);
  for (std::size_t s = 0; s < v.residuals.size(); ++s) {
    AtomSet e{static_cast<std::uint32_t>(s)};
    bool bad = std::find(v.violations.begin(), v.violations.end(), e) != v.violations.end() ||
               std::find(v.not_integrable.begin(), v.not_integrable.end(), e) != v.not_integrable.end();
    rows.add("residual" + e.str(), "derivative-reproduces-gamma", !bad, v.residuals[s].str(), v.residuals[s].value(), tol);
  }
}

void task_hausdorff(const Scenario& sc, const Json& t, TaskRows& rows) {
  ConvexBody a = body_from_json(t.at("a"), "a");
  ConvexBody b = body_from_json(t.at("b"), "b");
  Real h = hausdorff(a, b);
  Real iso = sup_norm(embed(a) - embed(b));
  double tol = sc.config.tolerance;
  rows.add("excess-ab", "excess", true, excess(a, b).str());
  rows.add("excess-ba", "excess", true, excess(b, a).str());
  rows.add("hausdorff", "hausdorff", true, h.str());
  Real gap = abs(h - iso);
  rows.add("embedding-isometry", "hausdorff-embedding-isometry", zero_or_within(gap, tol), iso.str(), gap.value(), tol);
}

}  // namespace

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Check& c) { return !c.passed; }));
}

Json Report::to_json() const {
  Json j;
  j["source"] = source;
  j["passed"] = passed();
  j["checks"] = rows.size();
  j["failed"] = failures();
  Json rs = Json::array();
  for (const Check& c : rows) {
    Json r;
    r["id"] = c.id;
    r["ref"] = c.ref;
    r["status"] = c.passed ? "pass" : "fail";
    r["value"] = c.value;
    r["tolerance"] = format_double(c.tolerance);
    r["residual"] = format_double(c.residual);
    rs.push_back(r);
  }
  j["rows"] = rs;
  j["details"] = details;
  return j;
}

std::string Report::to_csv() const {
  std::string out = "id,ref,status,value,tolerance,residual\n";
  for (const Check& c : rows) {
    out += csv_cell(c.id) + "," + csv_cell(c.ref) + "," + (c.passed ? "pass" : "fail") + "," + csv_cell(c.value) + "," +
           format_double(c.tolerance) + "," + format_double(c.residual) + "\n";
  }
  return out;
}

void Report::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream js(dir / "report.json");
  js << to_json().dump(2) << "\n";
  std::ofstream csv(dir / "report.csv");
  csv << to_csv();
  if (!js || !csv) throw std::runtime_error("cannot write reports into " + dir.string());
}

Json rn_transcript(const RnResult& r) {
  Json j;
  j["b"] = r.b.str();
  j["r_bound"] = r.r_bound.str();
  j["max_abs_r"] = r.max_abs_r.str();
  j["max_cauchy_ratio"] = r.max_cauchy_gap.str();
  j["stop_bound"] = to_string(r.stop_bound);
  Json f = Json::array();
  for (const auto& q : r.atom_values) f.push_back(to_string(q));
  j["derivative"] = f;
  Json stages = Json::array();
  for (const auto& st : r.stages) {
    Json s;
    s["n"] = st.n;
    s["alpha"] = to_string(st.alpha);
    Json blocks = Json::array();
    for (std::size_t i = 0; i < st.blocks.size(); ++i) {
      Json b;
      b["set"] = set_to_json(st.blocks[i]);
      b["parent"] = st.parents[i];
      b["r"] = to_string(st.r[i]);
      b["range"] = range_json(st.ranges[i]);
      blocks.push_back(b);
    }
    s["blocks"] = blocks;
    stages.push_back(s);
  }
  j["stages"] = stages;
  j["diagnostics"] = r.diagnostics;
  j["max_residual"] = r.verification.max_residual.str();
  return j;
}

Report run_tasks(const Scenario& sc, std::optional<Rational> tolerance) {
  Scenario local = sc;
  if (tolerance) {
    if (*tolerance <= 0) throw Error(ErrorKind::InvariantError, "tolerance must be positive");
    local.config.tolerance_exact = *tolerance;
    local.config.tolerance = to_double(*tolerance);
    // the override also beats per-task tolerances
    for (Task& task : local.tasks) {
      task.params.erase("tol");
      task.params.erase("tolerance");
    }
  }
  Report report;
  for (std::size_t i = 0; i < local.tasks.size(); ++i) {
    const Task& task = local.tasks[i];
    TaskRows rows(report, i, task.op);
    Json details;
    details["task"] = i;
    details["op"] = task.op;
    const Json& t = task.params;
    try {
      if (task.op == "classify") {
        task_classify(local, t, rows);
      } else if (task.op == "variation") {
        task_variation(local, t, rows);
      } else if (task.op == "semivariation") {
        task_semivariation(local, t, rows);
      } else if (task.op == "integrate") {
        task_integrate(local, t, rows);
      } else if (task.op == "integral_function") {
        task_integral_function(local, t, rows);
      } else if (task.op == "integrate_multimeasure") {
        task_integrate_multimeasure(local, t, rows);
      } else if (task.op == "equivalence_suite") {
        task_equivalence(local, t, rows);
      } else if (task.op == "variation_of_integral") {
        task_variation_of_integral(local, t, rows);
      } else if (task.op == "totally_measurable") {
        task_totally_measurable(local, t, rows);
      } else if (task.op == "simple_approx") {
        task_simple_approx(local, t, rows);
      } else if (task.op == "ob_bound") {
        task_ob(local, t, rows);
      } else if (task.op == "chain_estimator") {
        task_chain(local, t, rows);
      } else if (task.op == "series_integral") {
        task_series(local, t, rows);
      } else if (task.op == "strong_ac") {
        task_strong_ac(local, t, rows);
      } else if (task.op == "approximate_range") {
        task_approximate_range(local, t, rows, details);
      } else if (task.op == "exhaustion") {
        task_exhaustion(local, t, rows);
      } else if (task.op == "rn") {
        task_rn(local, t, rows, details);
      } else if (task.op == "verify_rn") {
        task_verify_rn(local, t, rows);
      } else if (task.op == "hausdorff") {
        task_hausdorff(local, t, rows);
      } else {
        rows.add("op", "task", false, "unknown op '" + task.op + "'");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InternalError) throw;
      rows.add("error", "task", false, e.what());
      details["error"] = e.what();
    } catch (const nlohmann::json::exception& e) {
      rows.add("error", "task", false, std::string("malformed task: ") + e.what());
    }
    report.details.push_back(details);
  }
  return report;
}

int run(const Scenario& scenario, const std::filesystem::path& out_dir, std::optional<Rational> tolerance) {
  Report report = run_tasks(scenario, tolerance);
  report.write(out_dir);
  return report.passed() ? 0 : 1;
}

}  // namespace gouldrn
