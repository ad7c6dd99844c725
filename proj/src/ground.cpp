#include "microasp/ground.hpp"

#include <algorithm>

namespace microasp {

Constant Constant::from_term(const Term& t) {
  return t.is_integer() ? integer(t.value) : named(t.name);
}

std::strong_ordering operator<=>(const Constant& a, const Constant& b) {
  if (a.is_integer() != b.is_integer()) {
    return a.is_integer() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.is_integer()) return a.number <=> b.number;
  return a.symbol.compare(b.symbol) <=> 0;
}

std::string to_string(const Constant& c) {
  return c.is_integer() ? std::to_string(c.number) : c.symbol;
}

std::size_t ConstantHash::operator()(const Constant& c) const noexcept {
  return c.is_integer() ? std::hash<std::int64_t>{}(c.number)
                        : std::hash<std::string>{}(c.symbol) ^ 0x9e3779b97f4a7c15ULL;
}

std::string to_string(const GroundAtom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      out += to_string(a.args[i]);
    }
    out += ')';
  }
  return out;
}

std::size_t GroundAtomHash::operator()(const GroundAtom& a) const noexcept {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  ConstantHash ch;
  for (const auto& c : a.args) h = h * 1000003u ^ ch(c);
  return h;
}

AtomId AtomTable::intern(const GroundAtom& atom) {
  auto it = ids_.find(atom);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(atom);
  ids_.emplace(atom, id);
  auto& idx = index_[predicate_key(atom.predicate, atom.args.size())];
  idx.all.push_back(id);
  idx.args.resize(atom.args.size());
  for (std::size_t i = 0; i < atom.args.size(); ++i) idx.args[i][atom.args[i]].push_back(id);
  return id;
}

std::optional<AtomId> AtomTable::find(const GroundAtom& atom) const {
  auto it = ids_.find(atom);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {
const std::vector<AtomId> kNoAtoms;
}

const std::vector<AtomId>& AtomTable::by_predicate(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? kNoAtoms : it->second.all;
}

const std::vector<AtomId>& AtomTable::by_first_arg(const std::string& key,
                                                   const Constant& first) const {
  return by_arg(key, 0, first);
}

const std::vector<AtomId>& AtomTable::by_arg(const std::string& key, std::size_t pos,
                                             const Constant& value) const {
  auto it = index_.find(key);
  if (it == index_.end() || pos >= it->second.args.size()) return kNoAtoms;
  const auto& m = it->second.args[pos];
  auto jt = m.find(value);
  return jt == m.end() ? kNoAtoms : jt->second;
}

Nogood Nogood::of(std::vector<GroundLiteral> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  return Nogood{std::move(lits)};
}

bool Nogood::contains(GroundLiteral l) const {
  return std::binary_search(literals.begin(), literals.end(), l);
}

Interpretation Interpretation::total(std::size_t atoms,
                                     const std::vector<AtomId>& true_atoms) {
  Interpretation i;
  i.values_.assign(atoms, Truth::False);
  for (AtomId a : true_atoms) i.set(a, Truth::True);
  return i;
}

Interpretation Interpretation::from_literals(std::size_t atoms,
                                             const std::vector<GroundLiteral>& lits) {
  Interpretation i(atoms);
  for (const auto& l : lits) i.set(l.atom, l.negated ? Truth::False : Truth::True);
  return i;
}

void Interpretation::set(AtomId a, Truth t) {
  if (a >= values_.size()) values_.resize(a + 1, Truth::Undefined);
  values_[a] = t;
}

bool Interpretation::is_total() const {
  return std::none_of(values_.begin(), values_.end(),
                      [](Truth t) { return t == Truth::Undefined; });
}

std::vector<AtomId> Interpretation::true_atoms() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == Truth::True) out.push_back(static_cast<AtomId>(i));
  }
  return out;
}

Nogood nogood_of(const GroundRule& rule) {
  std::vector<GroundLiteral> lits = rule.body;
  if (rule.head) lits.push_back({*rule.head, true});
  return Nogood::of(std::move(lits));
}

bool is_violated(const GroundConstraint& c, const Interpretation& interp) {
  return std::all_of(c.body.begin(), c.body.end(),
                     [&](GroundLiteral l) { return interp.is_true(l); });
}

bool is_supported(AtomId atom, const Interpretation& m, const GroundProgram& gp) {
  return std::any_of(gp.rules.begin(), gp.rules.end(), [&](const GroundRule& r) {
    return r.head == atom && is_violated(r, m);
  });
}

std::string to_string(const GroundLiteral& l, const AtomTable& atoms) {
  return (l.negated ? "not " : "") + to_string(atoms.atom(l.atom));
}

std::string to_string(const GroundRule& r, const AtomTable& atoms) {
  std::string out;
  if (r.head) out = to_string(atoms.atom(*r.head));
  if (!r.body.empty() || !r.head) {
    out += r.head ? " :- " : ":- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += to_string(r.body[i], atoms);
    }
  }
  out += '.';
  return out;
}

std::string to_string(const GroundProgram& gp) {
  std::vector<std::string> lines;
  lines.reserve(gp.rules.size());
  for (const auto& r : gp.rules) lines.push_back(to_string(r, gp.atoms));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace microasp
