#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "microasp/ground.hpp"
#include "microasp/grounder.hpp"
#include "microasp/syntax.hpp"

namespace microasp {

using TruthOf = std::function<Truth(AtomId)>;

/// Non-ground view of the deferred constraints over a fixed atom table.
/// Instances are never materialized; they are found on demand by joining
/// constraint bodies against the atoms whose truth value qualifies.
class ConstraintIndex {
 public:
  ConstraintIndex(const Program& p, const std::vector<std::size_t>& constraints,
                  const AtomTable& atoms);
  ~ConstraintIndex();
  ConstraintIndex(ConstraintIndex&&) noexcept;
  ConstraintIndex& operator=(ConstraintIndex&&) noexcept;

  bool empty() const;
  std::size_t size() const;

  /// Instances whose body is entirely true, deduplicated, at most `limit`.
  std::vector<DeferredViolation> violations(
      const TruthOf& truth,
      std::size_t limit = std::numeric_limits<std::size_t>::max()) const;

  /// Instances containing the (true) literal `lit` in which no literal is
  /// false and at most one literal is undefined.
  std::vector<DeferredViolation> triggered_by(GroundLiteral lit, const TruthOf& truth) const;

  /// True if some deferred constraint mentions the predicate of `atom`.
  bool watches(AtomId atom) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace microasp
