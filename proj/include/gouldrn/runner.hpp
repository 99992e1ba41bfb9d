#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gouldrn/integral.hpp"
#include "gouldrn/rn.hpp"
#include "gouldrn/scenario.hpp"

namespace gouldrn {

/// Rows of checks plus per-task details, serialized in a stable order.
struct Report {
  std::string source;
  std::vector<Check> rows;
  Json details = Json::array();

  bool passed() const;
  std::size_t failures() const;
  Json to_json() const;
  /// id,ref,status,value,tolerance,residual
  std::string to_csv() const;
  void write(const std::filesystem::path& dir) const;
};

/// Executes every task of the scenario in order. A task that throws a
/// domain error becomes a failing row; InternalError propagates.
Report run_tasks(const Scenario& scenario, std::optional<Rational> tolerance = std::nullopt);

/// run_tasks, then writes report.json and report.csv into out_dir.
/// Returns 0 when every check passed and 1 otherwise.
int run(const Scenario& scenario, const std::filesystem::path& out_dir, std::optional<Rational> tolerance = std::nullopt);

/// JSON transcript of an RN construction.
Json rn_transcript(const RnResult& result);

}  // namespace gouldrn
