#pragma once

// Conflict-driven nogood learning over a ground program: unit propagation
// on rule nogoods and the Clark completion, first-UIP learning, VSIDS,
// Luby restarts, learned-nogood deletion, and an unfounded-set check on
// total candidates for non-tight programs. Extension points for the
// deferred-constraint strategies are exposed through SolverCallbacks.

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "microasp/ground.hpp"

namespace microasp {

using Var = std::uint32_t;

/// Solver literal: variable plus sign, packed as 2*var + negated.
class Lit {
 public:
  constexpr Lit() = default;
  static constexpr Lit positive(Var v) { return Lit(2 * v); }
  static constexpr Lit negative(Var v) { return Lit(2 * v + 1); }
  static constexpr Lit from_code(std::uint32_t code) { return Lit(code); }
  static Lit of(GroundLiteral l) { return l.negated ? negative(l.atom) : positive(l.atom); }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negated() const { return code_ & 1u; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return Lit(code_ ^ 1u); }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  explicit constexpr Lit(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

using ClauseId = std::uint32_t;
constexpr ClauseId kNoReason = static_cast<ClauseId>(-1);

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learned = 0;        // learned nogoods created
  std::uint64_t deleted = 0;        // learned nogoods removed by deletion
  std::uint64_t deletion_rounds = 0;
  std::uint64_t propagations = 0;   // trail literals processed
  std::uint64_t invalidations = 0;  // total candidates vetoed by a strategy
  std::uint64_t lazy_added = 0;     // ground instances added by lazy checks
  std::uint64_t lazy_iterations = 0;
  std::uint64_t propagator_calls = 0;
  std::uint64_t propagator_nogoods = 0;
  std::uint64_t loop_nogoods = 0;   // unfounded-set vetoes

  friend bool operator==(const SolverStats&, const SolverStats&) = default;
};

struct SolverOptions {
  std::uint64_t seed = 0;
  /// Maximum number of conflicts; exceeding it ends the search with Timeout.
  std::optional<std::uint64_t> conflict_budget;
  /// Wall-clock budget, checked at restarts.
  std::optional<double> time_budget_s;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  std::uint32_t restart_unit = 32;
  bool restarts = true;
  bool deletion = true;
  std::uint32_t deletion_base = 4000;
  std::uint32_t deletion_step = 500;
};

enum class SolveStatus { Satisfiable, Unsatisfiable, Timeout };

class Solver;

/// Hooks for deferred constraints. Hooks only append nogoods to `out`; the
/// solver adds them (in order, stopping at the first conflict and queueing
/// the rest for the next propagation call).
class SolverCallbacks {
 public:
  virtual ~SolverCallbacks() = default;
  virtual bool wants_literal_events() const { return false; }
  virtual bool wants_fixpoint_events() const { return false; }
  /// Called for every literal when it becomes true, interleaved with unit
  /// propagation.
  virtual void on_literal_true(Lit, const Solver&, std::vector<std::vector<Lit>>& /*out*/) {}
  /// Called when unit propagation reaches a fixpoint without conflict.
  virtual void on_propagation_fixpoint(const Solver&, std::vector<std::vector<Lit>>& /*out*/) {}
  /// Called on a total, stable candidate. Returning nogoods vetoes it.
  virtual void on_total_candidate(const Solver&, std::vector<std::vector<Lit>>& /*out*/) {}
};

/// Result of conflict analysis.
struct Learned {
  bool unsat = false;
  std::vector<Lit> nogood;  // literals that must not all be true; [0] is the UIP
  std::uint32_t backjump_level = 0;
};

class Solver {
 public:
  /// Plain nogood solver over `num_vars` variables.
  explicit Solver(std::size_t num_vars, SolverOptions options = {});
  /// Solver for a ground program; variables [0, atoms) are the atoms, the
  /// rest are auxiliary body variables.
  explicit Solver(const GroundProgram& gp, SolverOptions options = {});

  std::size_t num_vars() const { return values_.size(); }
  std::size_t num_atoms() const { return num_atoms_; }

  void set_callbacks(SolverCallbacks* cb) { callbacks_ = cb; }

  /// Adds a nogood at any point of the search. Restores consistency if the
  /// nogood is violated or unit at a lower decision level. Returns the
  /// conflicting clause if the nogood is violated after that.
  enum class NogoodKind { Static, Learned };
  std::optional<ClauseId> add_nogood(std::span<const Lit> nogood, NogoodKind kind = NogoodKind::Static);

  /// Queues a nogood; it is added at the start of the next propagation.
  void queue_nogood(std::vector<Lit> nogood) { pending_.push_back(std::move(nogood)); }

  /// Runs (or resumes) the search.
  SolveStatus solve();

  // Step interface, used by tests and by the search loop.
  void decide(Lit l);
  /// Unit propagation plus hooks to fixpoint; returns the first conflict.
  std::optional<ClauseId> propagate();
  Learned analyze(ClauseId conflict);
  /// Backjumps and asserts a learned nogood.
  void learn(const Learned& learned);
  void backtrack(std::uint32_t level);
  Lit choose_literal();

  Truth value(Var v) const { return values_[v]; }
  Truth value(Lit l) const;
  bool is_true(Lit l) const { return value(l) == Truth::True; }
  std::uint32_t level(Var v) const { return levels_[v]; }
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lims_.size()); }
  const std::vector<Lit>& trail() const { return trail_; }
  ClauseId reason(Var v) const { return reasons_[v]; }
  /// Nogood form of a stored clause.
  std::vector<Lit> nogood(ClauseId id) const;
  bool is_learned(ClauseId id) const { return clauses_[id].learned; }
  bool is_deleted(ClauseId id) const { return clauses_[id].deleted; }
  std::size_t num_learned() const { return learned_live_; }
  bool inconsistent() const { return unsat_; }
  /// False if the positive dependency graph of the program has a cycle.
  bool tight() const { return tight_; }

  /// True atoms of the current (total) assignment.
  std::vector<AtomId> model() const;
  Truth atom_value(AtomId a) const { return values_[a]; }

  const SolverStats& stats() const { return stats_; }
  SolverStats& mutable_stats() { return stats_; }
  double activity(Var v) const { return activity_[v]; }
  void bump_activity(Var v);

  /// Luby sequence value for index i >= 1 (1,1,2,1,1,2,4,...).
  static std::uint64_t luby(std::uint64_t i);
  /// Learned-nogood deletion, applied when the learned count exceeds the
  /// current limit. Returns true if a deletion round ran.
  bool delete_constraints_if_needed();
  /// Restart if the Luby schedule says so. Returns true on restart.
  bool restart_if_needed();
  std::uint64_t conflicts_until_restart() const;

 private:
  struct Clause {
    std::vector<Lit> lits;  // disjunction; lits[0], lits[1] watched
    bool learned = false;
    bool deleted = false;
    std::uint32_t lbd = 0;
    double activity = 0;
  };

  struct RuleInfo {
    AtomId head;
    Lit body;  // literal standing for the whole body
    std::vector<AtomId> positive;
  };

  void init(std::size_t num_vars);
  void encode(const GroundProgram& gp);
  Var new_var();
  ClauseId attach(std::vector<Lit> lits, bool learned);
  void assign(Lit l, ClauseId reason);
  std::optional<ClauseId> propagate_watches(Lit p);
  std::optional<ClauseId> drain_pending();
  std::size_t push_loop_nogoods();
  bool locked(ClauseId id) const;
  std::uint32_t compute_lbd(std::span<const Lit> lits);
  void bump_clause(ClauseId id);
  void heap_insert(Var v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_less(Var a, Var b) const;
  bool budget_exhausted() const;
  bool time_exhausted() const;

  SolverOptions options_;
  std::size_t num_atoms_ = 0;
  std::vector<Truth> values_;
  std::vector<std::uint32_t> levels_;
  std::vector<ClauseId> reasons_;
  std::vector<char> saved_phase_;  // 1 = positive
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lims_;
  std::size_t qhead_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::vector<ClauseId>> watches_;  // by literal code
  std::deque<std::vector<Lit>> pending_;        // nogoods waiting to be added
  SolverCallbacks* callbacks_ = nullptr;
  bool unsat_ = false;

  // VSIDS
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<Var> heap_;
  std::vector<std::int64_t> heap_pos_;
  std::vector<char> seen_;

  // restarts / deletion
  std::uint64_t luby_index_ = 1;
  std::uint64_t conflicts_since_restart_ = 0;
  std::size_t learned_live_ = 0;
  std::chrono::steady_clock::time_point start_;

  // program structure for the unfounded-set check
  bool tight_ = true;
  std::vector<RuleInfo> rules_;
  std::vector<std::vector<std::uint32_t>> rules_by_head_;
  std::vector<char> fact_atoms_;

  SolverStats stats_;
};

std::string to_string(Lit l);

}  // namespace microasp
