#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "microasp/strategies.hpp"

namespace microasp {

std::string status_name(SolveStatus s);  // SATISFIABLE / UNSATISFIABLE / TIMEOUT
int exit_code(SolveStatus s);            // 10 / 20 / 30

nlohmann::ordered_json stats_json(const SolverStats& s);

struct RunInfo {
  std::string input;
  std::string strategy;  // may be "portfolio:<chosen>"
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> conflict_budget;
  std::optional<double> time_budget_s;
};

/// Machine-readable report. Contains no wall-clock values, so equal inputs
/// give byte-identical output.
nlohmann::ordered_json report_json(const SolveResult& r, const RunInfo& info);

}  // namespace microasp
