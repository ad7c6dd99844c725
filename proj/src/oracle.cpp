#include "microasp/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "microasp/grounder.hpp"

namespace microasp {

GroundProgram reduct(const GroundProgram& gp, const Interpretation& x) {
  GroundProgram out;
  out.atoms = gp.atoms;
  for (const auto& r : gp.rules) {
    bool keep = true;
    GroundRule pos{r.head, {}};
    for (const auto& l : r.body) {
      if (!l.negated) {
        pos.body.push_back(l);
      } else if (x.value(l.atom) == Truth::True) {
        keep = false;
        break;
      }
    }
    if (keep) out.rules.push_back(std::move(pos));
  }
  return out;
}

std::vector<AtomId> least_model(const GroundProgram& positive) {
  std::vector<char> in(positive.atoms.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : positive.rules) {
      if (!r.head || in[*r.head]) continue;
      bool fire = std::all_of(r.body.begin(), r.body.end(),
                              [&](const GroundLiteral& l) { return !l.negated && in[l.atom]; });
      if (fire) {
        in[*r.head] = 1;
        changed = true;
      }
    }
  }
  std::vector<AtomId> out;
  for (AtomId a = 0; a < in.size(); ++a) {
    if (in[a]) out.push_back(a);
  }
  return out;
}

bool is_model(const GroundProgram& gp, const Interpretation& x) {
  for (const auto& r : gp.rules) {
    bool body = std::all_of(r.body.begin(), r.body.end(),
                            [&](const GroundLiteral& l) { return x.is_true(l); });
    if (body && !(r.head && x.value(*r.head) == Truth::True)) return false;
  }
  return true;
}

bool is_stable_model(const GroundProgram& gp, const Interpretation& x) {
  if (!is_model(gp, x)) return false;
  GroundProgram red = reduct(gp, x);
  auto lm = least_model(red);
  if (lm != x.true_atoms()) return false;
  auto m = Interpretation::total(gp.atoms.size(), lm);
  return std::none_of(red.rules.begin(), red.rules.end(), [&](const GroundRule& r) {
    return r.is_constraint() && is_violated(r, m);
  });
}

std::vector<std::vector<AtomId>> enumerate_stable_models(const GroundProgram& gp) {
  const std::size_t n = gp.atoms.size();
  if (n > kOracleMaxAtoms) {
    throw OracleLimitError("oracle: " + std::to_string(n) + " atoms exceed the limit of " +
                           std::to_string(kOracleMaxAtoms));
  }
  std::vector<std::vector<AtomId>> out;
  std::vector<AtomId> t;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    t.clear();
    for (AtomId a = 0; a < n; ++a) {
      if (mask >> a & 1) t.push_back(a);
    }
    if (is_stable_model(gp, Interpretation::total(n, t))) out.push_back(t);
  }
  return out;
}

std::vector<std::vector<std::string>> named_models(const AtomTable& atoms,
                                                   const std::vector<std::vector<AtomId>>& models) {
  std::vector<std::vector<std::string>> out;
  for (const auto& m : models) {
    std::vector<std::string> names;
    for (AtomId a : m) names.push_back(to_string(atoms.atom(a)));
    std::sort(names.begin(), names.end());
    out.push_back(std::move(names));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

using Subst = std::map<std::string, Constant>;

Constant value_of(const Term& t, const Subst& s) {
  return t.is_variable() ? s.at(t.name) : Constant::from_term(t);
}

std::optional<Constant> eval(const Expr& e, const Subst& s) {
  if (e.terms.size() == 1) return value_of(e.terms[0], s);
  std::int64_t sum = 0;
  for (const auto& t : e.terms) {
    Constant c = value_of(t, s);
    if (!c.is_integer()) return std::nullopt;
    sum += c.number;
  }
  return Constant::integer(sum);
}

bool holds(const Comparison& c, const Subst& s) {
  auto l = eval(c.lhs, s), r = eval(c.rhs, s);
  if (!l || !r) throw GroundingError("arithmetic on a symbolic constant");
  switch (c.op) {
    case CmpOp::Eq: return *l == *r;
    case CmpOp::Ne: return !(*l == *r);
    default: break;
  }
  if (!l->is_integer() || !r->is_integer()) throw GroundingError("ordering on a symbolic constant");
  switch (c.op) {
    case CmpOp::Lt: return l->number < r->number;
    case CmpOp::Le: return l->number <= r->number;
    case CmpOp::Gt: return l->number > r->number;
    default: return l->number >= r->number;
  }
}

GroundAtom ground_atom(const Atom& a, const Subst& s) {
  GroundAtom g{a.predicate, {}};
  for (const auto& t : a.args) g.args.push_back(value_of(t, s));
  return g;
}

void collect_vars(const Rule& r, std::set<std::string>& out) {
  auto term = [&](const Term& t) {
    if (t.is_variable()) out.insert(t.name);
  };
  if (r.head) {
    for (const auto& t : r.head->args) term(t);
  }
  for (const auto& el : r.body) {
    if (auto* l = std::get_if<Literal>(&el)) {
      for (const auto& t : l->atom.args) term(t);
    } else {
      const auto& c = std::get<Comparison>(el);
      for (const auto& t : c.lhs.terms) term(t);
      for (const auto& t : c.rhs.terms) term(t);
    }
  }
}

}  // namespace

GroundProgram naive_ground(const Program& p, bool include_deferred, std::size_t max_instances) {
  auto hu_set = herbrand_universe(p);
  std::vector<Constant> hu(hu_set.begin(), hu_set.end());
  GroundProgram gp;
  std::set<std::pair<long, std::vector<GroundLiteral>>> seen;
  std::size_t budget = max_instances;
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    if (!include_deferred && p.deferred.count(i)) continue;
    const Rule& r = p.rules[i];
    std::set<std::string> var_set;
    collect_vars(r, var_set);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    if (!vars.empty() && hu.empty()) continue;
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
      if (budget-- == 0) throw OracleLimitError("naive grounding: too many substitutions");
      Subst s;
      for (std::size_t v = 0; v < vars.size(); ++v) s[vars[v]] = hu[idx[v]];
      bool ok = std::all_of(r.body.begin(), r.body.end(), [&](const BodyElement& el) {
        auto* c = std::get_if<Comparison>(&el);
        return !c || holds(*c, s);
      });
      if (ok) {
        GroundRule g;
        for (const auto& el : r.body) {
          if (auto* l = std::get_if<Literal>(&el)) {
            g.body.push_back({gp.atoms.intern(ground_atom(l->atom, s)), l->negated});
          }
        }
        if (r.head) g.head = gp.atoms.intern(ground_atom(*r.head, s));
        std::vector<GroundLiteral> key = g.body;
        std::sort(key.begin(), key.end());
        key.erase(std::unique(key.begin(), key.end()), key.end());
        if (seen.emplace(g.head ? static_cast<long>(*g.head) : -1, key).second) {
          gp.rules.push_back(std::move(g));
        }
      }
      std::size_t v = 0;
      while (v < idx.size() && ++idx[v] == hu.size()) idx[v++] = 0;
      if (v == idx.size()) break;
    }
  }
  return gp;
}

}  // namespace microasp
