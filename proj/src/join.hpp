#pragma once

// Rule compilation and the body join shared by the grounder and the
// deferred-constraint index. Internal to the library.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "microasp/ground.hpp"
#include "microasp/grounder.hpp"
#include "microasp/syntax.hpp"

namespace microasp::detail {

struct Slot {
  int var = -1;  // variable index, or -1 for a constant
  Constant constant;
};

struct CompiledAtom {
  std::string name;
  std::string key;  // name/arity
  std::vector<Slot> args;
};

struct CompiledLiteral {
  CompiledAtom atom;
  bool negated = false;
};

struct CompiledComparison {
  CmpOp op = CmpOp::Eq;
  std::vector<Slot> lhs;
  std::vector<Slot> rhs;
};

struct CompiledRule {
  std::size_t source = 0;  // index in Program::rules
  int line = 0;
  std::string text;
  std::optional<CompiledAtom> head;
  std::vector<CompiledLiteral> positives;  // written order
  std::vector<CompiledLiteral> negatives;
  std::vector<CompiledComparison> comparisons;
  std::vector<std::string> var_names;
};

CompiledRule compile_rule(const Rule& rule, std::size_t source);

using Binding = std::vector<std::optional<Constant>>;

GroundAtom instantiate(const CompiledAtom& atom, const Binding& b);

/// Binds the variables of `atom` against `ground`; on success returns the
/// list of newly bound variables, on mismatch returns nullopt and leaves
/// `b` unchanged.
std::optional<std::vector<int>> unify(const CompiledAtom& atom, const GroundAtom& ground,
                                      Binding& b);

/// Cost of accepting a candidate atom: negative rejects it, otherwise the
/// value is added to the running cost, which must stay within the budget.
using PositiveCost = std::function<int(AtomId)>;
/// Cost of a negative literal whose atom is `atom` (nullopt when the atom is
/// not in the table).
using NegativeCost = std::function<int(std::optional<AtomId>)>;

struct JoinOptions {
  int budget = 0;
  /// Positive literal already matched by the caller (its variables bound).
  int skip_positive = -1;
  /// Negative literal already known to be true (checked by the caller).
  int skip_negative = -1;
  /// Cost already spent by the caller's pre-matched literal.
  int initial_cost = 0;
  /// Match the positive literal with the fewest candidates next instead of
  /// the next one in written order.
  bool dynamic_order = false;
};

struct JoinMatch {
  const Binding& binding;
  /// Atom ids of the positive literals (index-aligned with `positives`).
  const std::vector<AtomId>& positives;
  /// Atom ids of the negative literals; nullopt if absent from the table.
  const std::vector<std::optional<AtomId>>& negatives;
  int cost;
};

/// Enumerates all substitutions that match the positive literals against
/// `table`, satisfy the comparisons, and stay within the cost budget.
/// Throws GroundingError for arithmetic on symbols.
void join(const CompiledRule& rule, const AtomTable& table, Binding& binding,
          const JoinOptions& options, const PositiveCost& positive_cost,
          const NegativeCost& negative_cost,
          const std::function<void(const JoinMatch&)>& emit);

}  // namespace microasp::detail
