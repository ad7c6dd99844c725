#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "microasp/ground.hpp"
#include "microasp/syntax.hpp"

namespace microasp {

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constants occurring syntactically in the program.
std::set<Constant> herbrand_universe(const Program& p);

/// All ground instances of `r` whose positive body atoms are in `domain`
/// (as it was on entry) and whose comparisons hold. Comparisons are removed;
/// no other simplification is applied. Head and negative-body atoms are
/// interned into `domain`.
std::vector<GroundRule> ground_rule(const Rule& r, AtomTable& domain);

struct GroundOptions {
  /// Ground the deferred constraints too (the plain ground+solve baseline).
  bool include_deferred = false;
};

/// Bottom-up instantiation over derivable atoms, stratum by stratum, with
/// facts removed from bodies and rules with a false body dropped.
GroundProgram ground_program(const Program& p, const GroundOptions& options = {});

struct DeferredViolation {
  std::size_t constraint = 0;  // index in Program::rules
  GroundConstraint instance;
};

/// Ground instances of the given constraints violated by `m`, found by
/// joining the body against the true atoms of `m`. Negative literals over
/// atoms absent from `atoms` are true and left out of the instance.
/// Duplicate instances are reported once.
std::vector<DeferredViolation> ground_deferred_violations(
    const Program& p, const std::vector<std::size_t>& constraints, const AtomTable& atoms,
    const Interpretation& m);

}  // namespace microasp
