#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "gouldrn/runner.hpp"
#include "gouldrn/scenario.hpp"

namespace gouldrn {

struct AuditOptions {
  std::size_t max_atoms = 4;
  std::uint64_t seed = 1;
  std::size_t cases = 8;          ///< random scenarios per property and atom count
  bool inject_mislabel = false;   ///< plant a non-subadditive M that claims to be subadditive
};

struct AuditResult {
  Report report;
  /// Minimized failing scenario per property name.
  std::map<std::string, Scenario> counterexamples;
};

/// Runs every property suite on seeded random scenarios with 1..max_atoms
/// atoms. Throws InvariantError when max_atoms is 0 or above 10.
AuditResult audit(const AuditOptions& options);

/// audit, then writes report.json, report.csv and one
/// counterexample-<property>.json per failing property. Returns 0 or 1.
int run_audit(const AuditOptions& options, const std::filesystem::path& out_dir);

/// The scenario restricted to the atoms in `keep` (points, set functions
/// and integrands); tasks are copied unchanged.
Scenario restrict_atoms(const Scenario& scenario, AtomSet keep);

}  // namespace gouldrn
