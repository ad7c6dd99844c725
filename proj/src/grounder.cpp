#include "microasp/grounder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "join.hpp"
#include "microasp/constraint_index.hpp"

namespace microasp {
namespace {

using detail::CompiledRule;

void collect_constants(const Term& t, std::set<Constant>& out) {
  if (t.is_constant()) out.insert(Constant::from_term(t));
}

/// Strongly connected components of the predicate dependency graph, in
/// topological order (dependencies first).
std::vector<std::vector<std::string>> predicate_components(const std::vector<CompiledRule>& rules) {
  std::map<std::string, std::set<std::string>> succ;  // body pred -> head preds
  std::set<std::string> nodes;
  for (const auto& r : rules) {
    if (!r.head) continue;
    nodes.insert(r.head->key);
    for (const auto& l : r.positives) succ[l.atom.key].insert(r.head->key);
    for (const auto& l : r.negatives) succ[l.atom.key].insert(r.head->key);
  }
  for (const auto& [k, _] : succ) nodes.insert(k);

  // Tarjan; emits components in reverse topological order of `succ`.
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> comps;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : succ[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      comps.push_back(std::move(comp));
    }
  };
  for (const auto& v : nodes) {
    if (!index.count(v)) visit(v);
  }
  std::reverse(comps.begin(), comps.end());
  return comps;
}

class Grounder {
 public:
  explicit Grounder(GroundProgram& gp) : gp_(gp) {}

  void run(std::vector<CompiledRule> rules) {
    std::vector<const CompiledRule*> constraints;
    std::map<std::string, std::vector<const CompiledRule*>> by_head;
    for (const auto& r : rules) {
      if (!r.head) {
        constraints.push_back(&r);
      } else if (r.positives.empty() && r.negatives.empty() && r.comparisons.empty()) {
        detail::Binding b(r.var_names.size());
        add_fact(gp_.atoms.intern(detail::instantiate(*r.head, b)));
      } else {
        by_head[r.head->key].push_back(&r);
      }
    }
    for (const auto& comp : predicate_components(rules)) {
      std::vector<const CompiledRule*> scc_rules;
      for (const auto& key : comp) {
        auto it = by_head.find(key);
        if (it != by_head.end()) scc_rules.insert(scc_rules.end(), it->second.begin(), it->second.end());
      }
      std::sort(scc_rules.begin(), scc_rules.end(),
                [](const CompiledRule* a, const CompiledRule* b) { return a->source < b->source; });
      if (scc_rules.empty()) continue;
      saturate(scc_rules);
      for (const auto* r : scc_rules) emit_instances(*r);
    }
    for (const auto* c : constraints) emit_instances(*c);
  }

 private:
  bool is_fact(AtomId a) const { return a < fact_.size() && fact_[a]; }

  void add_fact(AtomId a) {
    if (fact_.size() <= a) fact_.resize(gp_.atoms.size(), 0);
    if (fact_[a]) return;
    fact_[a] = 1;
    emit(GroundRule{a, {}});
  }

  void emit(GroundRule rule) {
    std::vector<GroundLiteral> key = rule.body;
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    long head = rule.head ? static_cast<long>(*rule.head) : -1;
    if (emitted_.emplace(head, std::move(key)).second) gp_.rules.push_back(std::move(rule));
  }

  // Derives every head atom reachable within one component (positive
  // bodies only; negative literals over facts block a match).
  void saturate(const std::vector<const CompiledRule*>& rules) {
    detail::PositiveCost pc = [](AtomId) { return 0; };
    detail::NegativeCost nc = [&](std::optional<AtomId> a) { return a && is_fact(*a) ? -1 : 0; };
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto* r : rules) {
        std::vector<GroundAtom> heads;
        detail::Binding b(r->var_names.size());
        detail::join(*r, gp_.atoms, b, {}, pc, nc, [&](const detail::JoinMatch& m) {
          heads.push_back(detail::instantiate(*r->head, m.binding));
        });
        for (const auto& h : heads) {
          if (!gp_.atoms.find(h)) {
            gp_.atoms.intern(h);
            changed = true;
          }
        }
      }
    }
  }

  void emit_instances(const CompiledRule& r) {
    detail::PositiveCost pc = [](AtomId) { return 0; };
    detail::NegativeCost nc = [&](std::optional<AtomId> a) { return a && is_fact(*a) ? -1 : 0; };
    std::vector<GroundRule> out;
    detail::Binding b(r.var_names.size());
    detail::join(r, gp_.atoms, b, {}, pc, nc, [&](const detail::JoinMatch& m) {
      GroundRule g;
      if (r.head) {
        auto h = gp_.atoms.find(detail::instantiate(*r.head, m.binding));
        if (!h || is_fact(*h)) return;
        g.head = *h;
      }
      for (AtomId a : m.positives) {
        if (!is_fact(a)) g.body.push_back({a, false});
      }
      for (const auto& n : m.negatives) {
        if (n) g.body.push_back({*n, true});
      }
      out.push_back(std::move(g));
    });
    for (auto& g : out) {
      bool contradictory = std::any_of(g.body.begin(), g.body.end(), [&](GroundLiteral l) {
        return std::find(g.body.begin(), g.body.end(), ~l) != g.body.end();
      });
      if (contradictory) continue;
      if (g.head && is_fact(*g.head)) continue;
      if (g.head && g.body.empty()) {
        add_fact(*g.head);
      } else {
        emit(std::move(g));
      }
    }
  }

  GroundProgram& gp_;
  std::vector<char> fact_;
  std::set<std::pair<long, std::vector<GroundLiteral>>> emitted_;
};

}  // namespace

std::set<Constant> herbrand_universe(const Program& p) {
  std::set<Constant> out;
  for (const auto& r : p.rules) {
    if (r.head) {
      for (const auto& t : r.head->args) collect_constants(t, out);
    }
    for (const auto& el : r.body) {
      if (auto* lit = std::get_if<Literal>(&el)) {
        for (const auto& t : lit->atom.args) collect_constants(t, out);
      } else {
        const auto& c = std::get<Comparison>(el);
        for (const auto& t : c.lhs.terms) collect_constants(t, out);
        for (const auto& t : c.rhs.terms) collect_constants(t, out);
      }
    }
  }
  return out;
}

std::vector<GroundRule> ground_rule(const Rule& r, AtomTable& domain) {
  auto compiled = detail::compile_rule(r, 0);
  struct Match {
    std::optional<GroundAtom> head;
    std::vector<AtomId> positives;
    std::vector<GroundAtom> negatives;
  };
  std::vector<Match> matches;
  detail::Binding b(compiled.var_names.size());
  detail::PositiveCost pc = [](AtomId) { return 0; };
  detail::NegativeCost nc = [](std::optional<AtomId>) { return 0; };
  detail::join(compiled, domain, b, {}, pc, nc, [&](const detail::JoinMatch& m) {
    Match match;
    if (compiled.head) match.head = detail::instantiate(*compiled.head, m.binding);
    match.positives = m.positives;
    for (const auto& n : compiled.negatives) match.negatives.push_back(detail::instantiate(n.atom, m.binding));
    matches.push_back(std::move(match));
  });
  std::vector<GroundRule> out;
  std::set<std::pair<long, std::vector<GroundLiteral>>> seen;
  for (const auto& m : matches) {
    GroundRule g;
    if (m.head) g.head = domain.intern(*m.head);
    for (AtomId a : m.positives) g.body.push_back({a, false});
    for (const auto& n : m.negatives) g.body.push_back({domain.intern(n), true});
    std::vector<GroundLiteral> key = g.body;
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    if (seen.emplace(g.head ? static_cast<long>(*g.head) : -1, key).second) out.push_back(std::move(g));
  }
  return out;
}

GroundProgram ground_program(const Program& p, const GroundOptions& options) {
  std::vector<CompiledRule> rules;
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    if (!options.include_deferred && p.deferred.count(i)) continue;
    rules.push_back(detail::compile_rule(p.rules[i], i));
  }
  GroundProgram gp;
  Grounder(gp).run(std::move(rules));
  return gp;
}

std::vector<DeferredViolation> ground_deferred_violations(
    const Program& p, const std::vector<std::size_t>& constraints, const AtomTable& atoms,
    const Interpretation& m) {
  ConstraintIndex index(p, constraints, atoms);
  return index.violations([&](AtomId a) { return m.value(a); });
}

}  // namespace microasp
