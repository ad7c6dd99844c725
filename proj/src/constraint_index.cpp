#include "microasp/constraint_index.hpp"

#include <set>
#include <unordered_map>

#include "join.hpp"

namespace microasp {

struct ConstraintIndex::Impl {
  struct Occurrence {
    std::size_t rule;
    int position;
    bool negated;
  };

  const AtomTable* atoms = nullptr;
  std::vector<detail::CompiledRule> rules;
  std::unordered_map<std::string, std::vector<Occurrence>> occurrences;

  DeferredViolation make_instance(std::size_t r, const detail::JoinMatch& m) const {
    std::vector<GroundLiteral> body;
    for (AtomId a : m.positives) body.push_back({a, false});
    for (const auto& n : m.negatives) {
      if (n) body.push_back({*n, true});
    }
    Nogood ng = Nogood::of(std::move(body));
    return DeferredViolation{rules[r].source, GroundConstraint{std::nullopt, std::move(ng.literals)}};
  }
};

ConstraintIndex::ConstraintIndex(const Program& p, const std::vector<std::size_t>& constraints,
                                 const AtomTable& atoms)
    : impl_(std::make_unique<Impl>()) {
  impl_->atoms = &atoms;
  for (std::size_t idx : constraints) {
    const Rule& rule = p.rules.at(idx);
    if (!rule.is_constraint()) {
      throw std::invalid_argument("deferred rule " + std::to_string(idx) + " is not a constraint");
    }
    std::size_t r = impl_->rules.size();
    impl_->rules.push_back(detail::compile_rule(rule, idx));
    const auto& cr = impl_->rules.back();
    for (std::size_t j = 0; j < cr.positives.size(); ++j) {
      impl_->occurrences[cr.positives[j].atom.key].push_back({r, static_cast<int>(j), false});
    }
    for (std::size_t j = 0; j < cr.negatives.size(); ++j) {
      impl_->occurrences[cr.negatives[j].atom.key].push_back({r, static_cast<int>(j), true});
    }
  }
}

ConstraintIndex::~ConstraintIndex() = default;
ConstraintIndex::ConstraintIndex(ConstraintIndex&&) noexcept = default;
ConstraintIndex& ConstraintIndex::operator=(ConstraintIndex&&) noexcept = default;

bool ConstraintIndex::empty() const { return impl_->rules.empty(); }
std::size_t ConstraintIndex::size() const { return impl_->rules.size(); }

bool ConstraintIndex::watches(AtomId atom) const {
  const GroundAtom& g = impl_->atoms->atom(atom);
  return impl_->occurrences.count(predicate_key(g.predicate, g.args.size())) > 0;
}

std::vector<DeferredViolation> ConstraintIndex::violations(const TruthOf& truth,
                                                           std::size_t limit) const {
  std::vector<DeferredViolation> out;
  std::set<std::vector<GroundLiteral>> seen;
  detail::PositiveCost pc = [&](AtomId a) { return truth(a) == Truth::True ? 0 : -1; };
  detail::NegativeCost nc = [&](std::optional<AtomId> a) {
    return !a || truth(*a) == Truth::False ? 0 : -1;
  };
  for (std::size_t r = 0; r < impl_->rules.size() && out.size() < limit; ++r) {
    const auto& rule = impl_->rules[r];
    detail::Binding b(rule.var_names.size());
    detail::JoinOptions opts;
    opts.dynamic_order = true;
    detail::join(rule, *impl_->atoms, b, opts, pc, nc, [&](const detail::JoinMatch& m) {
      if (out.size() >= limit) return;
      auto inst = impl_->make_instance(r, m);
      if (seen.insert(inst.instance.body).second) out.push_back(std::move(inst));
    });
  }
  return out;
}

std::vector<DeferredViolation> ConstraintIndex::triggered_by(GroundLiteral lit,
                                                             const TruthOf& truth) const {
  std::vector<DeferredViolation> out;
  const GroundAtom& g = impl_->atoms->atom(lit.atom);
  auto it = impl_->occurrences.find(predicate_key(g.predicate, g.args.size()));
  if (it == impl_->occurrences.end()) return out;
  std::set<std::vector<GroundLiteral>> seen;
  detail::PositiveCost pc = [&](AtomId a) {
    switch (truth(a)) {
      case Truth::True: return 0;
      case Truth::Undefined: return 1;
      default: return -1;
    }
  };
  detail::NegativeCost nc = [&](std::optional<AtomId> a) {
    if (!a) return 0;
    switch (truth(*a)) {
      case Truth::False: return 0;
      case Truth::Undefined: return 1;
      default: return -1;
    }
  };
  for (const auto& occ : it->second) {
    if (occ.negated != lit.negated) continue;
    const auto& rule = impl_->rules[occ.rule];
    detail::Binding b(rule.var_names.size());
    const auto& atom = occ.negated ? rule.negatives[occ.position].atom
                                   : rule.positives[occ.position].atom;
    if (!detail::unify(atom, g, b)) continue;
    detail::JoinOptions opts;
    opts.budget = 1;
    opts.dynamic_order = true;
    (occ.negated ? opts.skip_negative : opts.skip_positive) = occ.position;
    detail::join(rule, *impl_->atoms, b, opts, pc, nc, [&](const detail::JoinMatch& m) {
      auto inst = impl_->make_instance(occ.rule, m);
      if (seen.insert(inst.instance.body).second) out.push_back(std::move(inst));
    });
  }
  return out;
}

}  // namespace microasp
