#pragma once

// The four ways of handling the deferred constraints of a program:
//   full  - ground them like every other rule
//   lazy  - solve without them, add violated instances, re-solve
//   eager - propagate their instances as literals become true
//   post  - check them once unit propagation has reached a fixpoint

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "microasp/constraint_index.hpp"
#include "microasp/grounder.hpp"
#include "microasp/solver.hpp"
#include "microasp/syntax.hpp"

namespace microasp {

enum class StrategyKind { Full, Lazy, Eager, Post };

inline constexpr StrategyKind kAllStrategies[] = {StrategyKind::Full, StrategyKind::Lazy,
                                                  StrategyKind::Eager, StrategyKind::Post};

std::string to_string(StrategyKind k);
std::optional<StrategyKind> parse_strategy(std::string_view s);

struct StrategyOptions {
  SolverOptions solver;
  /// Cap on violated instances added per lazy check (unlimited if unset).
  std::optional<std::size_t> max_lazy_per_check;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unsatisfiable;
  std::vector<std::string> model;  // true atoms, sorted
  SolverStats stats;
  std::size_t ground_atoms = 0;
  std::size_t ground_rules = 0;
  /// Instances added by the lazy loop, per deferred rule index.
  std::map<std::size_t, std::uint64_t> lazy_added_by_constraint;
};

/// A prepared solve: grounding done once, search resumable so that several
/// models can be enumerated.
class StrategyRun {
 public:
  StrategyRun(const Program& p, StrategyKind kind, const StrategyOptions& options = {});
  ~StrategyRun();
  StrategyRun(const StrategyRun&) = delete;
  StrategyRun& operator=(const StrategyRun&) = delete;

  /// Searches for the next model. After a model, the next call excludes it.
  SolveStatus next();

  StrategyKind kind() const { return kind_; }
  const GroundProgram& ground() const { return gp_; }
  const Solver& solver() const { return *solver_; }
  std::vector<AtomId> model_ids() const;
  std::vector<std::string> model() const;
  SolveResult result(SolveStatus status) const;

 private:
  class Propagator;
  SolveStatus lazy_loop();

  StrategyKind kind_;
  StrategyOptions options_;
  std::vector<std::size_t> deferred_;
  GroundProgram gp_;
  std::unique_ptr<ConstraintIndex> index_;
  std::unique_ptr<Solver> solver_;
  std::unique_ptr<Propagator> propagator_;
  std::map<std::size_t, std::uint64_t> lazy_added_;
  bool have_model_ = false;
};

/// One model (or UNSAT / timeout) of `p` under strategy `kind`.
SolveResult solve(const Program& p, StrategyKind kind, const StrategyOptions& options = {});

/// Up to `limit` models (0 = all), each as sorted atom strings, in the order
/// found. `status` tells whether enumeration was complete.
struct Enumeration {
  std::vector<std::vector<std::string>> models;
  SolveStatus status = SolveStatus::Unsatisfiable;  // Unsatisfiable = exhausted
  SolverStats stats;
};
Enumeration enumerate_models(const Program& p, StrategyKind kind, std::size_t limit = 0,
                             const StrategyOptions& options = {});

}  // namespace microasp
