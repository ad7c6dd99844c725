#pragma once

// Propositional (ground) representation shared by the grounder, the solver,
// the strategies and the oracle.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "microasp/syntax.hpp"

namespace microasp {

/// A ground term: an integer or a symbolic constant.
struct Constant {
  std::int64_t number = 0;
  std::string symbol;  // empty for integers

  static Constant integer(std::int64_t v) { return Constant{v, {}}; }
  static Constant named(std::string s) { return Constant{0, std::move(s)}; }
  static Constant from_term(const Term& t);

  bool is_integer() const { return symbol.empty(); }

  friend bool operator==(const Constant&, const Constant&) = default;
  /// Integers order before symbols; symbols order lexicographically.
  friend std::strong_ordering operator<=>(const Constant& a, const Constant& b);
};

std::string to_string(const Constant& c);

struct ConstantHash {
  std::size_t operator()(const Constant& c) const noexcept;
};

struct GroundAtom {
  std::string predicate;  // name only; arity is args.size()
  std::vector<Constant> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

std::string to_string(const GroundAtom& a);

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& a) const noexcept;
};

using AtomId = std::uint32_t;

/// Bijection between ground atoms and dense ids, with a per-predicate index
/// (and per-argument indexes) used by the joins in the grounder and the
/// deferred-constraint propagators.
class AtomTable {
 public:
  /// Id of `atom`, inserting it if new.
  AtomId intern(const GroundAtom& atom);
  std::optional<AtomId> find(const GroundAtom& atom) const;

  const GroundAtom& atom(AtomId id) const { return atoms_[id]; }
  std::size_t size() const { return atoms_.size(); }

  /// All atoms of predicate `key` ("name/arity"), in insertion order.
  const std::vector<AtomId>& by_predicate(const std::string& key) const;
  /// Atoms of predicate `key` whose first argument equals `first`.
  const std::vector<AtomId>& by_first_arg(const std::string& key,
                                          const Constant& first) const;
  /// Atoms of predicate `key` whose argument at `pos` equals `value`.
  const std::vector<AtomId>& by_arg(const std::string& key, std::size_t pos,
                                    const Constant& value) const;

 private:
  struct PredicateIndex {
    std::vector<AtomId> all;
    std::vector<std::unordered_map<Constant, std::vector<AtomId>, ConstantHash>> args;
  };

  std::vector<GroundAtom> atoms_;
  std::unordered_map<GroundAtom, AtomId, GroundAtomHash> ids_;
  std::unordered_map<std::string, PredicateIndex> index_;
};

struct GroundLiteral {
  AtomId atom = 0;
  bool negated = false;

  GroundLiteral operator~() const { return {atom, !negated}; }
  friend bool operator==(const GroundLiteral&, const GroundLiteral&) = default;
  friend auto operator<=>(const GroundLiteral&, const GroundLiteral&) = default;
};

struct GroundRule {
  std::optional<AtomId> head;
  std::vector<GroundLiteral> body;

  bool is_constraint() const { return !head.has_value(); }
  bool is_fact() const { return head.has_value() && body.empty(); }

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

using GroundConstraint = GroundRule;

struct GroundProgram {
  AtomTable atoms;
  std::vector<GroundRule> rules;
};

/// Set of literals that must not be jointly true; kept sorted and unique.
struct Nogood {
  std::vector<GroundLiteral> literals;

  static Nogood of(std::vector<GroundLiteral> lits);
  bool contains(GroundLiteral l) const;
  friend bool operator==(const Nogood&, const Nogood&) = default;
};

enum class Truth : std::uint8_t { Undefined, True, False };

/// A (partial) interpretation over the atoms of one table. Atoms beyond the
/// stored range are undefined.
class Interpretation {
 public:
  Interpretation() = default;
  explicit Interpretation(std::size_t atoms) : values_(atoms, Truth::Undefined) {}

  /// Total interpretation with exactly `true_atoms` true.
  static Interpretation total(std::size_t atoms, const std::vector<AtomId>& true_atoms);
  static Interpretation from_literals(std::size_t atoms,
                                      const std::vector<GroundLiteral>& lits);

  Truth value(AtomId a) const {
    return a < values_.size() ? values_[a] : Truth::Undefined;
  }
  bool is_true(GroundLiteral l) const {
    Truth t = value(l.atom);
    return l.negated ? t == Truth::False : t == Truth::True;
  }
  bool is_false(GroundLiteral l) const { return is_true(~l); }
  void set(AtomId a, Truth t);
  bool is_total() const;
  std::size_t size() const { return values_.size(); }
  std::vector<AtomId> true_atoms() const;

 private:
  std::vector<Truth> values_;
};

/// Nogood form of a ground rule: the negated head plus the body literals.
Nogood nogood_of(const GroundRule& rule);

/// True iff every body literal of `c` is true in `interp`.
bool is_violated(const GroundConstraint& c, const Interpretation& interp);

/// True iff some rule with head `atom` has a body that is entirely true in `m`.
bool is_supported(AtomId atom, const Interpretation& m, const GroundProgram& gp);

std::string to_string(const GroundLiteral& l, const AtomTable& atoms);
std::string to_string(const GroundRule& r, const AtomTable& atoms);
/// One rule per line, lines sorted lexicographically.
std::string to_string(const GroundProgram& gp);

}  // namespace microasp
