#include "microasp/strategies.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "microasp/constraint_index.hpp"

namespace microasp {

std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::Full: return "full";
    case StrategyKind::Lazy: return "lazy";
    case StrategyKind::Eager: return "eager";
    case StrategyKind::Post: return "post";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view s) {
  for (auto k : kAllStrategies) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

namespace {

std::vector<Lit> to_lits(const GroundRule& c) {
  std::vector<Lit> out;
  for (const auto& l : c.body) out.push_back(Lit::of(l));
  return out;
}

TruthOf truth_of(const Solver& s) {
  return [&s](AtomId a) { return s.atom_value(a); };
}

}  // namespace

class StrategyRun::Propagator : public SolverCallbacks {
 public:
  Propagator(const ConstraintIndex& index, bool eager) : index_(index), eager_(eager) {}

  bool wants_literal_events() const override { return eager_; }
  bool wants_fixpoint_events() const override { return !eager_; }

  void on_literal_true(Lit lit, const Solver& s, std::vector<std::vector<Lit>>& out) override {
    if (lit.var() >= s.num_atoms() || !index_.watches(lit.var())) return;
    for (auto& v : index_.triggered_by({lit.var(), lit.negated()}, truth_of(s))) emit(v, out);
  }

  void on_propagation_fixpoint(const Solver& s, std::vector<std::vector<Lit>>& out) override {
    for (auto& v : index_.violations(truth_of(s))) emit(v, out);
  }

  void on_total_candidate(const Solver& s, std::vector<std::vector<Lit>>& out) override {
    for (auto& v : index_.violations(truth_of(s))) {
      emitted_.insert(v.instance.body);
      out.push_back(to_lits(v.instance));
    }
  }

 private:
  void emit(const DeferredViolation& v, std::vector<std::vector<Lit>>& out) {
    if (emitted_.insert(v.instance.body).second) out.push_back(to_lits(v.instance));
  }

  const ConstraintIndex& index_;
  bool eager_;
  std::set<std::vector<GroundLiteral>> emitted_;
};

StrategyRun::StrategyRun(const Program& p, StrategyKind kind, const StrategyOptions& options)
    : kind_(kind), options_(options), deferred_(p.deferred.begin(), p.deferred.end()) {
  bool full = kind == StrategyKind::Full || deferred_.empty();
  gp_ = ground_program(p, GroundOptions{full});
  solver_ = std::make_unique<Solver>(gp_, options_.solver);
  if (full) return;
  index_ = std::make_unique<ConstraintIndex>(p, deferred_, gp_.atoms);
  if (kind == StrategyKind::Eager || kind == StrategyKind::Post) {
    propagator_ = std::make_unique<Propagator>(*index_, kind == StrategyKind::Eager);
    solver_->set_callbacks(propagator_.get());
  }
}

StrategyRun::~StrategyRun() = default;

SolveStatus StrategyRun::lazy_loop() {
  for (;;) {
    SolveStatus st = solver_->solve();
    ++solver_->mutable_stats().lazy_iterations;
    if (st != SolveStatus::Satisfiable) return st;
    std::size_t limit = options_.max_lazy_per_check.value_or(std::numeric_limits<std::size_t>::max());
    auto violated = index_->violations(truth_of(*solver_), limit);
    if (violated.empty()) return st;
    auto& stats = solver_->mutable_stats();
    ++stats.invalidations;
    stats.lazy_added += violated.size();
    for (auto& v : violated) {
      ++lazy_added_[v.constraint];
      solver_->queue_nogood(to_lits(v.instance));
    }
  }
}

SolveStatus StrategyRun::next() {
  if (have_model_) {
    std::vector<Lit> block;
    for (AtomId a = 0; a < gp_.atoms.size(); ++a) {
      block.push_back(solver_->atom_value(a) == Truth::True ? Lit::positive(a) : Lit::negative(a));
    }
    solver_->queue_nogood(std::move(block));
    have_model_ = false;
  }
  SolveStatus st = kind_ == StrategyKind::Lazy && index_ ? lazy_loop() : solver_->solve();
  have_model_ = st == SolveStatus::Satisfiable;
  return st;
}

std::vector<AtomId> StrategyRun::model_ids() const { return solver_->model(); }

std::vector<std::string> StrategyRun::model() const {
  std::vector<std::string> out;
  for (AtomId a : solver_->model()) out.push_back(to_string(gp_.atoms.atom(a)));
  std::sort(out.begin(), out.end());
  return out;
}

SolveResult StrategyRun::result(SolveStatus status) const {
  SolveResult r;
  r.status = status;
  if (status == SolveStatus::Satisfiable) r.model = model();
  r.stats = solver_->stats();
  r.ground_atoms = gp_.atoms.size();
  r.ground_rules = gp_.rules.size();
  r.lazy_added_by_constraint = lazy_added_;
  return r;
}

SolveResult solve(const Program& p, StrategyKind kind, const StrategyOptions& options) {
  StrategyRun run(p, kind, options);
  return run.result(run.next());
}

Enumeration enumerate_models(const Program& p, StrategyKind kind, std::size_t limit,
                             const StrategyOptions& options) {
  StrategyRun run(p, kind, options);
  Enumeration e;
  for (;;) {
    SolveStatus st = run.next();
    if (st != SolveStatus::Satisfiable) {
      e.status = st;
      break;
    }
    e.models.push_back(run.model());
    if (limit && e.models.size() >= limit) {
      e.status = SolveStatus::Satisfiable;
      break;
    }
  }
  e.stats = run.solver().stats();
  return e;
}

}  // namespace microasp
