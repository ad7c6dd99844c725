#include "join.hpp"

#include <algorithm>
#include <map>

namespace microasp::detail {
namespace {

Slot compile_term(const Term& t, std::map<std::string, int>& vars,
                  std::vector<std::string>& names) {
  if (!t.is_variable()) return Slot{-1, Constant::from_term(t)};
  auto [it, inserted] = vars.emplace(t.name, static_cast<int>(names.size()));
  if (inserted) names.push_back(t.name);
  return Slot{it->second, {}};
}

CompiledAtom compile_atom(const Atom& a, std::map<std::string, int>& vars,
                          std::vector<std::string>& names) {
  CompiledAtom out;
  out.name = a.predicate;
  out.key = predicate_key(a.predicate, a.args.size());
  for (const auto& t : a.args) out.args.push_back(compile_term(t, vars, names));
  return out;
}

enum class Eval { True, False, Unbound, Assigned };

[[noreturn]] void arithmetic_error(const CompiledRule& rule, const std::string& what) {
  throw GroundingError(what + " in rule at line " + std::to_string(rule.line) + ": " +
                       rule.text);
}

std::optional<Constant> eval_sum(const std::vector<Slot>& terms, const Binding& b,
                                 const CompiledRule& rule) {
  if (terms.size() == 1) {
    const Slot& s = terms[0];
    if (s.var < 0) return s.constant;
    return b[s.var];
  }
  std::int64_t sum = 0;
  for (const Slot& s : terms) {
    const Constant* c = nullptr;
    if (s.var < 0) {
      c = &s.constant;
    } else if (b[s.var]) {
      c = &*b[s.var];
    } else {
      return std::nullopt;
    }
    if (!c->is_integer()) {
      arithmetic_error(rule, "arithmetic on non-integer constant '" + c->symbol + "'");
    }
    sum += c->number;
  }
  return Constant::integer(sum);
}

bool compare(CmpOp op, const Constant& a, const Constant& b, const CompiledRule& rule) {
  if (op == CmpOp::Eq) return a == b;
  if (op == CmpOp::Ne) return a != b;
  if (!a.is_integer() || !b.is_integer()) {
    arithmetic_error(rule, "ordering comparison on non-integer constant");
  }
  switch (op) {
    case CmpOp::Lt: return a.number < b.number;
    case CmpOp::Le: return a.number <= b.number;
    case CmpOp::Gt: return a.number > b.number;
    case CmpOp::Ge: return a.number >= b.number;
    default: return false;
  }
}

Eval evaluate(const CompiledComparison& c, Binding& b, const CompiledRule& rule,
              int& assigned_var) {
  auto lhs = eval_sum(c.lhs, b, rule);
  auto rhs = eval_sum(c.rhs, b, rule);
  if (lhs && rhs) return compare(c.op, *lhs, *rhs, rule) ? Eval::True : Eval::False;
  if (c.op == CmpOp::Eq) {
    if (!lhs && rhs && c.lhs.size() == 1 && c.lhs[0].var >= 0) {
      assigned_var = c.lhs[0].var;
      b[assigned_var] = *rhs;
      return Eval::Assigned;
    }
    if (lhs && !rhs && c.rhs.size() == 1 && c.rhs[0].var >= 0) {
      assigned_var = c.rhs[0].var;
      b[assigned_var] = *lhs;
      return Eval::Assigned;
    }
  }
  return Eval::Unbound;
}

class Joiner {
 public:
  Joiner(const CompiledRule& rule, const AtomTable& table, Binding& b,
         const JoinOptions& options, const PositiveCost& pc, const NegativeCost& nc,
         const std::function<void(const JoinMatch&)>& emit)
      : rule_(rule),
        table_(table),
        b_(b),
        opt_(options),
        pc_(pc),
        nc_(nc),
        emit_(emit),
        pos_ids_(rule.positives.size(), 0),
        neg_ids_(rule.negatives.size()),
        cmp_done_(rule.comparisons.size(), 0),
        matched_(rule.positives.size(), 0) {}

  void run(const std::optional<AtomId>& skipped_positive_atom) {
    if (opt_.skip_positive >= 0 && skipped_positive_atom) {
      pos_ids_[opt_.skip_positive] = *skipped_positive_atom;
    }
    std::size_t k = 0;
    if (opt_.skip_positive >= 0) {
      matched_[opt_.skip_positive] = 1;
      k = 1;
    }
    step(k, opt_.initial_cost);
  }

 private:
  void step(std::size_t k, int cost) {
    std::vector<int> done;
    std::vector<int> bound;
    auto undo = [&] {
      for (int i : done) cmp_done_[i] = 0;
      for (int v : bound) b_[v].reset();
    };
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t i = 0; i < rule_.comparisons.size(); ++i) {
        if (cmp_done_[i]) continue;
        int var = -1;
        Eval e = evaluate(rule_.comparisons[i], b_, rule_, var);
        if (e == Eval::Unbound) continue;
        if (e == Eval::False) {
          undo();
          return;
        }
        cmp_done_[i] = 1;
        done.push_back(static_cast<int>(i));
        if (e == Eval::Assigned) {
          bound.push_back(var);
          progress = true;
        }
      }
    }
    if (k == rule_.positives.size()) {
      finish(cost);
      undo();
      return;
    }
    std::size_t pick = rule_.positives.size();
    const std::vector<AtomId>* candidates = nullptr;
    std::vector<AtomId> single;
    for (std::size_t i = 0; i < rule_.positives.size(); ++i) {
      if (matched_[i]) continue;
      const CompiledAtom& atom = rule_.positives[i].atom;
      const std::vector<AtomId>* list = &table_.by_predicate(atom.key);
      bool ground = true;
      for (std::size_t a = 0; a < atom.args.size(); ++a) {
        const Slot& s = atom.args[a];
        const Constant* c = s.var < 0 ? &s.constant : (b_[s.var] ? &*b_[s.var] : nullptr);
        if (!c) {
          ground = false;
          continue;
        }
        const auto& l = table_.by_arg(atom.key, a, *c);
        if (l.size() < list->size()) list = &l;
      }
      if (ground && list->size() > 1) {
        single.clear();
        if (auto id = table_.find(instantiate(atom, b_))) single.push_back(*id);
        list = &single;
      }
      if (!candidates || list->size() < candidates->size()) {
        pick = i;
        candidates = list;
        if (candidates->size() <= 1 || !opt_.dynamic_order) break;
      }
    }
    const CompiledAtom& atom = rule_.positives[pick].atom;
    matched_[pick] = 1;
    for (AtomId id : *candidates) {
      int c = pc_(id);
      if (c < 0 || cost + c > opt_.budget) continue;
      auto newly = unify(atom, table_.atom(id), b_);
      if (!newly) continue;
      pos_ids_[pick] = id;
      step(k + 1, cost + c);
      for (int v : *newly) b_[v].reset();
    }
    matched_[pick] = 0;
    undo();
  }

  void finish(int cost) {
    for (std::size_t i = 0; i < cmp_done_.size(); ++i) {
      if (!cmp_done_[i]) return;  // unreachable for safe rules
    }
    for (std::size_t j = 0; j < rule_.negatives.size(); ++j) {
      auto id = table_.find(instantiate(rule_.negatives[j].atom, b_));
      neg_ids_[j] = id;
      if (static_cast<int>(j) == opt_.skip_negative) continue;
      int c = nc_(id);
      if (c < 0) return;
      cost += c;
      if (cost > opt_.budget) return;
    }
    emit_(JoinMatch{b_, pos_ids_, neg_ids_, cost});
  }

  const CompiledRule& rule_;
  const AtomTable& table_;
  Binding& b_;
  const JoinOptions& opt_;
  const PositiveCost& pc_;
  const NegativeCost& nc_;
  const std::function<void(const JoinMatch&)>& emit_;
  std::vector<AtomId> pos_ids_;
  std::vector<std::optional<AtomId>> neg_ids_;
  std::vector<char> cmp_done_;
  std::vector<char> matched_;
};

}  // namespace

CompiledRule compile_rule(const Rule& rule, std::size_t source) {
  CompiledRule out;
  out.source = source;
  out.line = rule.line;
  out.text = to_string(rule);
  std::map<std::string, int> vars;
  // Positive literals first so their variables get the lowest indices.
  for (const auto& el : rule.body) {
    if (auto* lit = std::get_if<Literal>(&el); lit && !lit->negated) {
      out.positives.push_back({compile_atom(lit->atom, vars, out.var_names), false});
    }
  }
  for (const auto& el : rule.body) {
    if (auto* lit = std::get_if<Literal>(&el)) {
      if (lit->negated) {
        out.negatives.push_back({compile_atom(lit->atom, vars, out.var_names), true});
      }
    } else {
      const auto& cmp = std::get<Comparison>(el);
      CompiledComparison cc;
      cc.op = cmp.op;
      for (const auto& t : cmp.lhs.terms) cc.lhs.push_back(compile_term(t, vars, out.var_names));
      for (const auto& t : cmp.rhs.terms) cc.rhs.push_back(compile_term(t, vars, out.var_names));
      out.comparisons.push_back(std::move(cc));
    }
  }
  if (rule.head) out.head = compile_atom(*rule.head, vars, out.var_names);
  return out;
}

GroundAtom instantiate(const CompiledAtom& atom, const Binding& b) {
  GroundAtom g;
  g.predicate = atom.name;
  g.args.reserve(atom.args.size());
  for (const Slot& s : atom.args) g.args.push_back(s.var < 0 ? s.constant : *b[s.var]);
  return g;
}

std::optional<std::vector<int>> unify(const CompiledAtom& atom, const GroundAtom& ground,
                                      Binding& b) {
  std::vector<int> newly;
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const Slot& s = atom.args[i];
    const Constant& g = ground.args[i];
    bool ok = true;
    if (s.var < 0) {
      ok = s.constant == g;
    } else if (b[s.var]) {
      ok = *b[s.var] == g;
    } else {
      b[s.var] = g;
      newly.push_back(s.var);
    }
    if (!ok) {
      for (int v : newly) b[v].reset();
      return std::nullopt;
    }
  }
  return newly;
}

void join(const CompiledRule& rule, const AtomTable& table, Binding& binding,
          const JoinOptions& options, const PositiveCost& positive_cost,
          const NegativeCost& negative_cost,
          const std::function<void(const JoinMatch&)>& emit) {
  Joiner j(rule, table, binding, options, positive_cost, negative_cost, emit);
  std::optional<AtomId> skipped;
  if (options.skip_positive >= 0) {
    skipped = table.find(instantiate(rule.positives[options.skip_positive].atom, binding));
  }
  j.run(skipped);
}

}  // namespace microasp::detail
