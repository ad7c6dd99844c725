#include "microasp/report.hpp"

namespace microasp {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Satisfiable: return "SATISFIABLE";
    case SolveStatus::Unsatisfiable: return "UNSATISFIABLE";
    case SolveStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Satisfiable: return 10;
    case SolveStatus::Unsatisfiable: return 20;
    case SolveStatus::Timeout: return 30;
  }
  return 1;
}

nlohmann::ordered_json stats_json(const SolverStats& s) {
  return {
      {"decisions", s.decisions},
      {"conflicts", s.conflicts},
      {"restarts", s.restarts},
      {"learned", s.learned},
      {"deleted", s.deleted},
      {"propagations", s.propagations},
      {"invalidations", s.invalidations},
      {"lazy_added", s.lazy_added},
      {"lazy_iterations", s.lazy_iterations},
      {"propagator_calls", s.propagator_calls},
      {"propagator_nogoods", s.propagator_nogoods},
      {"loop_nogoods", s.loop_nogoods},
  };
}

nlohmann::ordered_json report_json(const SolveResult& r, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["input"] = info.input;
  j["strategy"] = info.strategy;
  j["seed"] = info.seed;
  j["conflict_budget"] = info.conflict_budget ? nlohmann::ordered_json(*info.conflict_budget)
                                              : nlohmann::ordered_json(nullptr);
  j["time_budget_s"] = info.time_budget_s ? nlohmann::ordered_json(*info.time_budget_s)
                                          : nlohmann::ordered_json(nullptr);
  j["status"] = status_name(r.status);
  j["model"] = r.model;
  j["ground"] = {{"atoms", r.ground_atoms}, {"rules", r.ground_rules}};
  j["stats"] = stats_json(r.stats);
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [rule, n] : r.lazy_added_by_constraint) per[std::to_string(rule)] = n;
  j["lazy_added_by_rule"] = per;
  return j;
}

}  // namespace microasp
