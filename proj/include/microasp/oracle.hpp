#pragma once

// Brute-force reference semantics for small ground programs. Nothing here
// shares code with the solver; it exists to check it.

#include <stdexcept>
#include <string>
#include <vector>

#include "microasp/ground.hpp"
#include "microasp/syntax.hpp"

namespace microasp {

class OracleLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Gelfond-Lifschitz reduct: rules whose negative body is false under `x`
/// are removed, negative bodies are stripped from the rest. Constraints are
/// treated like any other rule.
GroundProgram reduct(const GroundProgram& gp, const Interpretation& x);

/// Least model of the positive program, ignoring its constraints.
std::vector<AtomId> least_model(const GroundProgram& positive);

bool is_model(const GroundProgram& gp, const Interpretation& x);
bool is_stable_model(const GroundProgram& gp, const Interpretation& x);

constexpr std::size_t kOracleMaxAtoms = 24;

/// Every stable model (true atoms, ascending ids), in ascending bitmask
/// order. Throws OracleLimitError above kOracleMaxAtoms atoms.
std::vector<std::vector<AtomId>> enumerate_stable_models(const GroundProgram& gp);

/// Models as sorted atom strings, the list itself sorted.
std::vector<std::vector<std::string>> named_models(const AtomTable& atoms,
                                                   const std::vector<std::vector<AtomId>>& models);

/// Textbook instantiation: every variable ranges over the Herbrand universe,
/// no simplification. Arithmetic results outside the universe therefore
/// produce no instance. Throws OracleLimitError if more than `max_instances`
/// substitutions would be tried.
GroundProgram naive_ground(const Program& p, bool include_deferred = true,
                           std::size_t max_instances = 2'000'000);

}  // namespace microasp
