#include <CLI11.hpp>

#include <iostream>

#include "gouldrn/audit.hpp"
#include "gouldrn/rn.hpp"
#include "gouldrn/runner.hpp"
#include "gouldrn/scenario.hpp"

using namespace gouldrn;

namespace {

std::optional<Rational> parse_tol(const std::string& text) {
  if (text.empty()) return std::nullopt;
  Rational tol = parse_rational(text);
  if (tol <= 0) throw Error(ErrorKind::InvariantError, "--tol must be positive");
  return tol;
}

int rn_command(const std::string& path, const std::string& gamma, const std::string& measure, const std::string& tol_text,
               const std::string& out) {
  Scenario sc = load_scenario(path);
  Rational tol = parse_tol(tol_text).value_or(sc.config.tolerance_exact);
  const MultiSetFn& g = sc.measure(gamma).multi();
  const MultiSetFn& m = sc.measure(measure).multi();
  Json doc;
  int status = 0;
  try {
    RnResult r = rn_derive(sc.space, g, m, tol, sc.config.guards);
    doc = rn_transcript(r);
    bool ok = r.verification.passed && r.r_bound_ok && r.cauchy_ok && r.transfer_ok;
    doc["passed"] = ok;
    status = ok ? 0 : 1;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HypothesisFailed) throw;
    doc["passed"] = false;
    doc["error"] = e.what();
    status = 1;
  }
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::filesystem::create_directories(out);
    std::ofstream(std::filesystem::path(out) / "rn.json") << doc.dump(2) << "\n";
    if (doc.contains("error")) std::cerr << doc["error"].get<std::string>() << "\n";
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gould integrals and Radon-Nikodym derivatives for set-valued measures on finite spaces"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, tol_text;
  auto* run_cmd = app.add_subcommand("run", "execute a scenario's tasks and write report.json / report.csv");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "report directory")->required();
  run_cmd->add_option("--tol", tol_text, "override the scenario tolerance (e.g. 1/1000000)");

  AuditOptions audit_opts;
  std::string audit_out;
  auto* audit_cmd = app.add_subcommand("audit", "run every property suite on seeded random scenarios");
  audit_cmd->add_option("--max-atoms", audit_opts.max_atoms, "largest atom count (at most 10)")->check(CLI::Range(1, 10));
  audit_cmd->add_option("--seed", audit_opts.seed, "random seed");
  audit_cmd->add_option("--cases", audit_opts.cases, "scenarios per property and atom count");
  audit_cmd->add_flag("--inject-mislabel", audit_opts.inject_mislabel,
                      "plant a non-subadditive measure labelled subadditive");
  audit_cmd->add_option("--out", audit_out, "report directory")->required();

  std::string rn_path, gamma, measure, rn_tol, rn_out;
  auto* rn_cmd = app.add_subcommand("rn", "derive f with Gamma(E) = integral of f over E against M");
  rn_cmd->add_option("scenario", rn_path, "scenario JSON file")->required();
  rn_cmd->add_option("--gamma", gamma, "name of Gamma")->required();
  rn_cmd->add_option("--measure", measure, "name of M")->required();
  rn_cmd->add_option("--tol", rn_tol, "target accuracy");
  rn_cmd->add_option("--out", rn_out, "write rn.json here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return run(load_scenario(scenario_path), out_dir, parse_tol(tol_text));
    if (*audit_cmd) return run_audit(audit_opts, audit_out);
    if (*rn_cmd) return rn_command(rn_path, gamma, measure, rn_tol, rn_out);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
