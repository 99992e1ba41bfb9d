#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gouldrn/audit.hpp"
#include "gouldrn/runner.hpp"
#include "gouldrn/scenario.hpp"

using namespace gouldrn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("gouldrn-unit-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind load_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  return ErrorKind::InternalError;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1e-9") == Rational(1, 1000000000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(Rational(-3)) == "-3");
}

TEST_CASE("minimal scenario") {
  Scenario sc = load_scenario("docs/examples/minimal.json");
  CHECK(sc.space.atom_count() == 1);
  CHECK(sc.tasks.empty());
  fs::path out = scratch("minimal");
  CHECK(run(sc, out) == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(slurp(out / "report.csv") == "id,ref,status,value,tolerance,residual\n");
  Json report = Json::parse(slurp(out / "report.json"));
  CHECK(report["rows"].empty());
  CHECK(report["passed"] == true);
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(load_scenario("docs/examples/invalid-empty-set.json"), Error);
  std::string msg;
  CHECK(load_error(slurp("docs/examples/invalid-empty-set.json"), &msg) == ErrorKind::InvariantError);
  CHECK(msg.find("M(∅)") != std::string::npos);

  CHECK(load_error("{\n  \"space\": {\n    \"points\": [\"a\",\n  }\n}", &msg) == ErrorKind::ParseError);
  CHECK(msg.find("line 4") != std::string::npos);

  CHECK(load_error(R"({"space": {"points": ["a"], "atoms": [[0]]}, "measures": {"m": {"kind": "scalar", "values": {"{0}": "x"}}}})",
                   &msg) == ErrorKind::ParseError);
  CHECK(msg.find("field") != std::string::npos);

  // negative scalar values violate the set-function axioms
  CHECK(load_error(R"({"space": {"points": ["a"], "atoms": [[0]]}, "measures": {"m": {"kind": "scalar", "values": {"{0}": "-1"}}}})") ==
        ErrorKind::InvariantError);
  // a task that names a missing measure is rejected at load
  CHECK(load_error(R"({"space": {"points": ["a"], "atoms": [[0]]}, "tasks": [{"op": "classify", "measure": "nope"}]})") ==
        ErrorKind::InvariantError);
  CHECK_THROWS_AS(load_scenario("docs/examples/does-not-exist.json"), Error);
}

TEST_CASE("scenario round trip") {
  for (const char* name : {"minimal", "integration-tour", "rn-golden", "adversarial-rn", "mutation-equivalence"}) {
    Scenario sc = load_scenario(std::string("docs/examples/") + name + ".json");
    Json once = scenario_to_json(sc);
    Json twice = scenario_to_json(parse_scenario(once.dump()));
    CHECK(once == twice);
  }
}

TEST_CASE("shipped scenarios") {
  CHECK(run(load_scenario("docs/examples/integration-tour.json"), scratch("tour")) == 0);

  Report mutated = run_tasks(load_scenario("docs/examples/mutation-equivalence.json"));
  CHECK_FALSE(mutated.passed());
  bool named = false;
  for (const auto& row : mutated.rows) {
    if (!row.passed) named = named || row.id.find("integral-agrees") != std::string::npos;
  }
  CHECK(named);
  CHECK(run(load_scenario("docs/examples/mutation-equivalence.json"), scratch("mutation")) == 1);

  Scenario golden = load_scenario("docs/examples/rn-golden.json");
  Report r = run_tasks(golden);
  CHECK(r.passed());
  std::size_t residual_rows = 0;
  for (const auto& row : r.rows) {
    if (row.id.find("/residual") == std::string::npos) continue;
    ++residual_rows;
    CHECK(row.residual <= 1e-6);
  }
  CHECK(residual_rows >= 16);

  Report adv = run_tasks(load_scenario("docs/examples/adversarial-rn.json"));
  CHECK_FALSE(adv.passed());
  CHECK(adv.rows.back().value.find("range-empty") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  Scenario sc = load_scenario("docs/examples/integration-tour.json");
  CHECK(run_tasks(sc).to_json().dump() == run_tasks(sc).to_json().dump());
  std::string csv = run_tasks(sc).to_csv();
  CHECK(csv.rfind("id,ref,status,value,tolerance,residual\n", 0) == 0);
}

TEST_CASE("tolerance override") {
  Scenario sc = load_scenario("docs/examples/rn-golden.json");
  Report r = run_tasks(sc, Rational(1, 1000));
  CHECK(r.passed());
  for (const auto& row : r.rows) {
    if (row.id.find("/residual") != std::string::npos) CHECK(row.tolerance == doctest::Approx(1e-3));
  }
}

TEST_CASE("audit at small size") {
  AuditOptions opts;
  opts.max_atoms = 3;
  opts.seed = 1;
  AuditResult a = audit(opts);
  CHECK(a.report.passed());
  CHECK(a.counterexamples.empty());
  CHECK(a.report.rows.size() > 20);
  AuditResult b = audit(opts);
  CHECK(a.report.to_json().dump() == b.report.to_json().dump());

  fs::path d1 = scratch("audit-1"), d2 = scratch("audit-2");
  CHECK(run_audit(opts, d1) == 0);
  CHECK(run_audit(opts, d2) == 0);
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));

  opts.max_atoms = 11;
  CHECK_THROWS_AS(audit(opts), Error);
}

TEST_CASE("audit catches a mislabelled measure") {
  AuditOptions opts;
  opts.max_atoms = 3;
  opts.inject_mislabel = true;
  fs::path out = scratch("audit-inject");
  CHECK(run_audit(opts, out) == 1);
  fs::path cex = out / "counterexample-classification.json";
  REQUIRE(fs::exists(cex));
  Scenario replay = load_scenario(cex);
  CHECK(replay.space.atom_count() <= 3);
  CHECK_FALSE(run_tasks(replay).passed());
}

TEST_CASE("restricting a scenario to some atoms") {
  Scenario sc = load_scenario("docs/examples/integration-tour.json");
  AtomSet keep = AtomSet::single(0) | AtomSet::single(2);
  Scenario small = restrict_atoms(sc, keep);
  CHECK(small.space.atom_count() == 2);
  CHECK(small.space.point_count() == sc.space.atom_points(0).size() + sc.space.atom_points(2).size());
  const auto& before = sc.measure("mu").scalar();
  const auto& after = small.measure("mu").scalar();
  CHECK(after(AtomSet::single(1)) == before(AtomSet::single(2)));
  CHECK(after(AtomSet::first_n(2)) == before(keep));
}
