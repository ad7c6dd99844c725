#include "microasp/solver.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>

namespace microasp {

std::string to_string(Lit l) {
  return (l.negated() ? "-" : "") + std::to_string(l.var());
}

Solver::Solver(std::size_t num_vars, SolverOptions options) : options_(options) {
  init(num_vars);
  num_atoms_ = num_vars;
  for (Var v = 0; v < num_vars; ++v) heap_insert(v);
}

Solver::Solver(const GroundProgram& gp, SolverOptions options) : options_(options) {
  init(gp.atoms.size());
  num_atoms_ = gp.atoms.size();
  encode(gp);
  if (options_.seed != 0) {
    // Tiny activity jitter: breaks ties differently per seed while any
    // conflict bump still dominates.
    std::mt19937_64 rng(options_.seed);
    for (auto& a : activity_) a = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 1e-3;
  }
  for (Var v = 0; v < num_vars(); ++v) heap_insert(v);
}

void Solver::init(std::size_t num_vars) {
  values_.assign(num_vars, Truth::Undefined);
  levels_.assign(num_vars, 0);
  reasons_.assign(num_vars, kNoReason);
  saved_phase_.assign(num_vars, 0);
  activity_.assign(num_vars, 0.0);
  heap_pos_.assign(num_vars, -1);
  seen_.assign(num_vars, 0);
  watches_.assign(2 * num_vars, {});
  start_ = std::chrono::steady_clock::now();
}

Var Solver::new_var() {
  auto v = static_cast<Var>(values_.size());
  values_.push_back(Truth::Undefined);
  levels_.push_back(0);
  reasons_.push_back(kNoReason);
  saved_phase_.push_back(0);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  return v;
}

void Solver::encode(const GroundProgram& gp) {
  std::vector<std::vector<Lit>> supports(num_atoms_);
  std::vector<char> is_fact(num_atoms_, 0);
  std::map<std::vector<GroundLiteral>, Lit> body_lits;
  rules_by_head_.assign(num_atoms_, {});

  auto add_static = [&](std::vector<Lit> ng) { add_nogood(ng, NogoodKind::Static); };

  for (const auto& rule : gp.rules) {
    std::vector<Lit> body;
    for (const auto& l : rule.body) body.push_back(Lit::of(l));
    if (rule.is_constraint()) {
      add_static(body);
      continue;
    }
    AtomId h = *rule.head;
    if (body.empty()) {
      is_fact[h] = 1;
      add_static({Lit::negative(h)});
      continue;
    }
    std::vector<Lit> ng = body;
    ng.push_back(Lit::negative(h));
    add_static(ng);

    Lit beta;
    if (body.size() == 1) {
      beta = body[0];
    } else {
      std::vector<GroundLiteral> key = rule.body;
      std::sort(key.begin(), key.end());
      key.erase(std::unique(key.begin(), key.end()), key.end());
      auto it = body_lits.find(key);
      if (it != body_lits.end()) {
        beta = it->second;
      } else {
        beta = Lit::positive(new_var());
        body_lits.emplace(std::move(key), beta);
        for (Lit l : body) add_static({beta, ~l});
        std::vector<Lit> all = body;
        all.push_back(~beta);
        add_static(all);
      }
    }
    supports[h].push_back(beta);
    RuleInfo info{h, beta, {}};
    for (const auto& l : rule.body) {
      if (!l.negated) info.positive.push_back(l.atom);
    }
    rules_by_head_[h].push_back(static_cast<std::uint32_t>(rules_.size()));
    rules_.push_back(std::move(info));
  }

  // Completion: a true atom needs some true body.
  for (AtomId a = 0; a < num_atoms_; ++a) {
    if (is_fact[a]) continue;
    std::vector<Lit> ng{Lit::positive(a)};
    for (Lit b : supports[a]) ng.push_back(~b);
    add_static(ng);
  }

  // Tightness: no cycle in the positive atom dependency graph.
  std::vector<std::uint8_t> color(num_atoms_, 0);
  tight_ = true;
  for (AtomId root = 0; root < num_atoms_ && tight_; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<AtomId, std::size_t>> stack{{root, 0}};
    std::vector<AtomId> succ_buf;
    color[root] = 1;
    while (!stack.empty() && tight_) {
      auto& [a, next] = stack.back();
      // successors: positive body atoms of a's rules, enumerated lazily
      std::size_t k = next;
      std::optional<AtomId> child;
      for (std::uint32_t ri : rules_by_head_[a]) {
        if (k < rules_[ri].positive.size()) {
          child = rules_[ri].positive[k];
          break;
        }
        k -= rules_[ri].positive.size();
      }
      if (!child) {
        color[a] = 2;
        stack.pop_back();
        continue;
      }
      ++next;
      if (color[*child] == 1) {
        tight_ = false;
      } else if (color[*child] == 0) {
        color[*child] = 1;
        stack.push_back({*child, 0});
      }
    }
  }
  fact_atoms_ = std::move(is_fact);
}

Truth Solver::value(Lit l) const {
  Truth t = values_[l.var()];
  if (t == Truth::Undefined || !l.negated()) return t;
  return t == Truth::True ? Truth::False : Truth::True;
}

void Solver::assign(Lit l, ClauseId reason) {
  Var v = l.var();
  values_[v] = l.negated() ? Truth::False : Truth::True;
  levels_[v] = decision_level();
  reasons_[v] = reason;
  trail_.push_back(l);
}

ClauseId Solver::attach(std::vector<Lit> lits, bool learned) {
  auto id = static_cast<ClauseId>(clauses_.size());
  Clause c;
  c.lits = std::move(lits);
  c.learned = learned;
  if (c.lits.size() >= 2) {
    watches_[c.lits[0].code()].push_back(id);
    watches_[c.lits[1].code()].push_back(id);
  }
  clauses_.push_back(std::move(c));
  if (learned) {
    ++learned_live_;
    ++stats_.learned;
  }
  return id;
}

std::optional<ClauseId> Solver::add_nogood(std::span<const Lit> nogood, NogoodKind kind) {
  if (unsat_) return std::nullopt;
  std::vector<Lit> lits;
  lits.reserve(nogood.size());
  for (Lit l : nogood) lits.push_back(~l);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i] == ~lits[i - 1]) return std::nullopt;  // tautology
  }
  bool learned = kind == NogoodKind::Learned;
  if (lits.empty()) {
    unsat_ = true;
    return std::nullopt;
  }
  if (lits.size() == 1) {
    Lit l = lits[0];
    if (value(l) == Truth::True && level(l.var()) == 0) return std::nullopt;
    backtrack(0);
    if (value(l) == Truth::False) {
      unsat_ = true;
      return std::nullopt;
    }
    ClauseId id = attach(lits, learned);
    if (value(l) == Truth::Undefined) assign(l, id);
    return std::nullopt;
  }
  // Non-false literals first (true before undefined), then false ones by
  // decreasing level.
  auto rank = [&](Lit l) {
    Truth t = value(l);
    return t == Truth::True ? 0 : t == Truth::Undefined ? 1 : 2;
  };
  std::stable_sort(lits.begin(), lits.end(), [&](Lit a, Lit b) {
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb;
    if (ra == 2) return level(a.var()) > level(b.var());
    return false;
  });
  std::size_t nonfalse = 0;
  while (nonfalse < lits.size() && value(lits[nonfalse]) != Truth::False) ++nonfalse;
  if (nonfalse >= 2 || (nonfalse == 1 && value(lits[0]) == Truth::True)) {
    attach(std::move(lits), learned);
    return std::nullopt;
  }
  if (nonfalse == 1) {
    std::uint32_t lvl = level(lits[1].var());
    backtrack(lvl);
    Lit implied = lits[0];
    ClauseId id = attach(std::move(lits), learned);
    assign(implied, id);
    return std::nullopt;
  }
  std::uint32_t lvl = level(lits[0].var());
  if (lvl == 0) {
    unsat_ = true;
    return std::nullopt;
  }
  backtrack(lvl);
  return attach(std::move(lits), learned);
}

std::optional<ClauseId> Solver::drain_pending() {
  while (!pending_.empty() && !unsat_) {
    std::vector<Lit> ng = std::move(pending_.front());
    pending_.pop_front();
    if (auto c = add_nogood(ng, NogoodKind::Static)) return c;
  }
  return std::nullopt;
}

std::optional<ClauseId> Solver::propagate_watches(Lit p) {
  Lit false_lit = ~p;
  auto& ws = watches_[false_lit.code()];
  std::size_t i = 0, j = 0;
  while (i < ws.size()) {
    ClauseId id = ws[i++];
    Clause& c = clauses_[id];
    if (c.deleted) continue;
    if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
    if (value(c.lits[0]) == Truth::True) {
      ws[j++] = id;
      continue;
    }
    bool moved = false;
    for (std::size_t k = 2; k < c.lits.size(); ++k) {
      if (value(c.lits[k]) != Truth::False) {
        std::swap(c.lits[1], c.lits[k]);
        watches_[c.lits[1].code()].push_back(id);
        moved = true;
        break;
      }
    }
    if (moved) continue;
    ws[j++] = id;
    if (value(c.lits[0]) == Truth::False) {
      while (i < ws.size()) ws[j++] = ws[i++];
      ws.resize(j);
      qhead_ = trail_.size();
      return id;
    }
    assign(c.lits[0], id);
  }
  ws.resize(j);
  return std::nullopt;
}

std::optional<ClauseId> Solver::propagate() {
  using Batch = std::vector<std::vector<Lit>>;
  for (;;) {
    if (auto c = drain_pending()) return c;
    if (unsat_) return std::nullopt;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      ++stats_.propagations;
      if (auto c = propagate_watches(p)) return c;
      if (callbacks_ && callbacks_->wants_literal_events()) {
        Batch out;
        callbacks_->on_literal_true(p, *this, out);
        ++stats_.propagator_calls;
        stats_.propagator_nogoods += out.size();
        for (auto& ng : out) pending_.push_back(std::move(ng));
        if (auto c = drain_pending()) return c;
        if (unsat_) return std::nullopt;
      }
    }
    if (!callbacks_ || !callbacks_->wants_fixpoint_events()) return std::nullopt;
    Batch out;
    callbacks_->on_propagation_fixpoint(*this, out);
    ++stats_.propagator_calls;
    if (out.empty()) return std::nullopt;
    stats_.propagator_nogoods += out.size();
    for (auto& ng : out) pending_.push_back(std::move(ng));
    if (auto c = drain_pending()) return c;
    if (unsat_ || qhead_ >= trail_.size()) return std::nullopt;
  }
}

void Solver::decide(Lit l) {
  trail_lims_.push_back(trail_.size());
  assign(l, kNoReason);
  ++stats_.decisions;
}

void Solver::backtrack(std::uint32_t lvl) {
  if (decision_level() <= lvl) return;
  std::size_t stop = trail_lims_[lvl];
  for (std::size_t i = trail_.size(); i-- > stop;) {
    Var v = trail_[i].var();
    saved_phase_[v] = values_[v] == Truth::True;
    values_[v] = Truth::Undefined;
    reasons_[v] = kNoReason;
    heap_insert(v);
  }
  trail_.resize(stop);
  trail_lims_.resize(lvl);
  qhead_ = std::min(qhead_, trail_.size());
}

std::uint32_t Solver::compute_lbd(std::span<const Lit> lits) {
  std::vector<std::uint32_t> lv;
  for (Lit l : lits) lv.push_back(level(l.var()));
  std::sort(lv.begin(), lv.end());
  return static_cast<std::uint32_t>(std::unique(lv.begin(), lv.end()) - lv.begin());
}

Learned Solver::analyze(ClauseId conflict) {
  Learned out;
  if (decision_level() == 0) {
    out.unsat = true;
    return out;
  }
  std::vector<Lit> clause{Lit()};  // slot 0 for the asserting literal
  int path = 0;
  std::optional<Lit> p;
  std::size_t idx = trail_.size();
  ClauseId cid = conflict;
  for (;;) {
    assert(cid != kNoReason);
    if (clauses_[cid].learned) bump_clause(cid);
    for (Lit q : clauses_[cid].lits) {
      Var v = q.var();
      if (p && v == p->var()) continue;
      if (seen_[v] || level(v) == 0) continue;
      seen_[v] = 1;
      bump_activity(v);
      if (level(v) >= decision_level()) {
        ++path;
      } else {
        clause.push_back(q);
      }
    }
    while (!seen_[trail_[--idx].var()]) {
    }
    p = trail_[idx];
    seen_[p->var()] = 0;
    if (--path == 0) break;
    cid = reasons_[p->var()];
  }
  clause[0] = ~*p;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < clause.size(); ++i) {
    seen_[clause[i].var()] = 0;
    if (level(clause[i].var()) > level(clause[max_i].var())) max_i = i;
  }
  if (clause.size() > 1) {
    std::swap(clause[1], clause[max_i]);
    out.backjump_level = level(clause[1].var());
  }
  out.nogood.reserve(clause.size());
  for (Lit l : clause) out.nogood.push_back(~l);
  return out;
}

void Solver::learn(const Learned& learned) {
  if (learned.unsat) {
    unsat_ = true;
    return;
  }
  std::vector<Lit> clause;
  for (Lit l : learned.nogood) clause.push_back(~l);
  std::uint32_t lbd = compute_lbd(clause);
  backtrack(learned.backjump_level);
  ClauseId id = attach(clause, true);
  clauses_[id].lbd = lbd;
  bump_clause(id);
  assign(clause[0], id);
}

void Solver::bump_activity(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::bump_clause(ClauseId id) {
  clauses_[id].activity += clause_inc_;
  if (clauses_[id].activity > 1e20) {
    for (auto& c : clauses_) {
      if (c.learned) c.activity *= 1e-20;
    }
    clause_inc_ *= 1e-20;
  }
}

bool Solver::heap_less(Var a, Var b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;
}

void Solver::heap_insert(Var v) {
  if (heap_pos_[v] >= 0) return;
  heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int64_t>(i);
}

void Solver::heap_down(std::size_t i) {
  Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int64_t>(i);
}

Lit Solver::choose_literal() {
  while (!heap_.empty()) {
    Var v = heap_[0];
    if (values_[v] == Truth::Undefined) {
      return saved_phase_[v] ? Lit::positive(v) : Lit::negative(v);
    }
    heap_pos_[v] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) heap_down(0);
  }
  for (Var v = 0; v < num_vars(); ++v) {
    if (values_[v] == Truth::Undefined) return Lit::negative(v);
  }
  return Lit();
}

std::uint64_t Solver::luby(std::uint64_t i) {
  // Finite subsequence containing index i, then descend into it.
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  std::uint64_t x = i - 1;  // zero-based
  while (size - 1 != x) {
    size = (size - 1) / 2;
    --seq;
    x = x % size;
  }
  return std::uint64_t{1} << seq;
}

std::uint64_t Solver::conflicts_until_restart() const {
  std::uint64_t limit = luby(luby_index_) * options_.restart_unit;
  return limit > conflicts_since_restart_ ? limit - conflicts_since_restart_ : 0;
}

bool Solver::restart_if_needed() {
  if (!options_.restarts || conflicts_until_restart() > 0) return false;
  backtrack(0);
  ++luby_index_;
  conflicts_since_restart_ = 0;
  ++stats_.restarts;
  return true;
}

bool Solver::locked(ClauseId id) const {
  const Clause& c = clauses_[id];
  for (std::size_t i = 0; i < std::min<std::size_t>(2, c.lits.size()); ++i) {
    Lit l = c.lits[i];
    if (reasons_[l.var()] == id && value(l) == Truth::True) return true;
  }
  return false;
}

bool Solver::delete_constraints_if_needed() {
  if (!options_.deletion) return false;
  std::uint64_t limit = options_.deletion_base +
                        std::uint64_t{options_.deletion_step} * stats_.deletion_rounds;
  if (learned_live_ <= limit) return false;
  std::vector<ClauseId> candidates;
  for (ClauseId id = 0; id < clauses_.size(); ++id) {
    const Clause& c = clauses_[id];
    if (!c.learned || c.deleted || c.lbd <= 2 || c.lits.size() < 2 || locked(id)) continue;
    candidates.push_back(id);
  }
  std::sort(candidates.begin(), candidates.end(), [&](ClauseId a, ClauseId b) {
    if (clauses_[a].activity != clauses_[b].activity) {
      return clauses_[a].activity < clauses_[b].activity;
    }
    return a < b;
  });
  std::size_t remove = candidates.size() / 2;
  for (std::size_t i = 0; i < remove; ++i) {
    Clause& c = clauses_[candidates[i]];
    c.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
  }
  learned_live_ -= remove;
  stats_.deleted += remove;
  ++stats_.deletion_rounds;
  return true;
}

std::vector<Lit> Solver::nogood(ClauseId id) const {
  std::vector<Lit> out;
  for (Lit l : clauses_[id].lits) out.push_back(~l);
  return out;
}

std::vector<AtomId> Solver::model() const {
  std::vector<AtomId> out;
  for (AtomId a = 0; a < num_atoms_; ++a) {
    if (values_[a] == Truth::True) out.push_back(a);
  }
  return out;
}

std::size_t Solver::push_loop_nogoods() {
  // Least model of the reduct, restricted to rules whose body is true.
  std::vector<char> derived(num_atoms_, 0);
  std::vector<std::uint32_t> missing(rules_.size(), 0);
  std::vector<std::vector<std::uint32_t>> waiting(num_atoms_);
  std::vector<AtomId> queue;
  for (AtomId a = 0; a < num_atoms_; ++a) {
    if (fact_atoms_[a]) {
      derived[a] = 1;
      queue.push_back(a);
    }
  }
  auto fire = [&](std::uint32_t ri) {
    AtomId h = rules_[ri].head;
    if (!derived[h]) {
      derived[h] = 1;
      queue.push_back(h);
    }
  };
  for (std::uint32_t ri = 0; ri < rules_.size(); ++ri) {
    if (!is_true(rules_[ri].body)) continue;
    missing[ri] = static_cast<std::uint32_t>(rules_[ri].positive.size());
    for (AtomId a : rules_[ri].positive) waiting[a].push_back(ri);
    if (missing[ri] == 0) fire(ri);
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (std::uint32_t ri : waiting[queue[qi]]) {
      if (--missing[ri] == 0) fire(ri);
    }
  }
  std::vector<char> in_u(num_atoms_, 0);
  std::vector<AtomId> unfounded;
  for (AtomId a = 0; a < num_atoms_; ++a) {
    if (values_[a] == Truth::True && !derived[a]) {
      in_u[a] = 1;
      unfounded.push_back(a);
    }
  }
  if (unfounded.empty()) return 0;
  std::vector<Lit> external;
  for (AtomId a : unfounded) {
    for (std::uint32_t ri : rules_by_head_[a]) {
      const auto& pos = rules_[ri].positive;
      bool internal = std::any_of(pos.begin(), pos.end(), [&](AtomId b) { return in_u[b]; });
      if (!internal) external.push_back(~rules_[ri].body);
    }
  }
  std::sort(external.begin(), external.end());
  external.erase(std::unique(external.begin(), external.end()), external.end());
  for (AtomId a : unfounded) {
    std::vector<Lit> ng = external;
    ng.push_back(Lit::positive(a));
    pending_.push_back(std::move(ng));
  }
  stats_.loop_nogoods += unfounded.size();
  return unfounded.size();
}

bool Solver::budget_exhausted() const {
  return options_.conflict_budget && stats_.conflicts > *options_.conflict_budget;
}

bool Solver::time_exhausted() const {
  if (!options_.time_budget_s) return false;
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  return elapsed.count() > *options_.time_budget_s;
}

SolveStatus Solver::solve() {
  for (;;) {
    if (unsat_) return SolveStatus::Unsatisfiable;
    auto conflict = propagate();
    if (unsat_) return SolveStatus::Unsatisfiable;
    if (conflict) {
      ++stats_.conflicts;
      ++conflicts_since_restart_;
      Learned l = analyze(*conflict);
      learn(l);
      if (unsat_) return SolveStatus::Unsatisfiable;
      var_inc_ /= options_.var_decay;
      clause_inc_ /= options_.clause_decay;
      if (budget_exhausted()) return SolveStatus::Timeout;
      continue;
    }
    if (!pending_.empty()) continue;
    if (trail_.size() == num_vars()) {
      if (!tight_ && push_loop_nogoods() > 0) continue;
      if (callbacks_) {
        std::vector<std::vector<Lit>> veto;
        callbacks_->on_total_candidate(*this, veto);
        if (!veto.empty()) {
          ++stats_.invalidations;
          for (auto& ng : veto) pending_.push_back(std::move(ng));
          continue;
        }
      }
      return SolveStatus::Satisfiable;
    }
    if (restart_if_needed()) {
      if (time_exhausted()) return SolveStatus::Timeout;
      continue;
    }
    delete_constraints_if_needed();
    decide(choose_literal());
  }
}

}  // namespace microasp
