#pragma once

#include <string>
#include <vector>

#include "microasp/grounder.hpp"
#include "microasp/syntax.hpp"

namespace testsupport {

inline const char* kPi1 =
    "a(1) :- not b(1).\n"
    "b(1) :- not a(1).\n"
    ":- a(X), b(X).\n"
    "c(1) :- not d(1).\n"
    "d(1) :- not c(1).\n"
    ":- a(X), not b(X).\n";

inline const char* kPi1Deferred =
    "a(1) :- not b(1).\n"
    "b(1) :- not a(1).\n"
    "%@deferred\n"
    ":- a(X), b(X).\n"
    "c(1) :- not d(1).\n"
    "d(1) :- not c(1).\n"
    "%@deferred\n"
    ":- a(X), not b(X).\n";

inline std::vector<std::string> names(const microasp::AtomTable& t,
                                      const std::vector<microasp::AtomId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(microasp::to_string(t.atom(id)));
  std::sort(out.begin(), out.end());
  return out;
}

inline microasp::AtomId id_of(const microasp::AtomTable& t, const std::string& pred, long arg) {
  return *t.find(microasp::GroundAtom{pred, {microasp::Constant::integer(arg)}});
}

}  // namespace testsupport

#include <random>

namespace testsupport {

/// Small random normal program over a(1..2) .. d(1..2): at most 8
/// non-fact atoms, at most 12 rules besides the two domain facts, up to 4
/// deferred constraints. Positive cycles occur regularly.
inline std::string random_program(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  const char* preds[] = {"a", "b", "c", "d"};
  auto constant = [&] { return std::string(pick(2) ? "1" : "2"); };
  std::string s = "dom(1). dom(2).\n";
  int deferred = pick(5);
  int rules = 1 + pick(12 - deferred);
  auto literal = [&](bool var_bound, bool allow_neg) {
    std::string l;
    if (allow_neg && pick(2)) l += "not ";
    l += preds[pick(4)];
    l += "(" + (var_bound && pick(3) ? std::string("X") : constant()) + ")";
    return l;
  };
  for (int i = 0; i < rules; ++i) {
    int kind = pick(10);
    if (kind == 0) {  // fact
      s += std::string(preds[pick(4)]) + "(" + constant() + ").\n";
      continue;
    }
    bool var = pick(3) != 0;
    std::string head = kind == 1 ? "" : std::string(preds[pick(4)]) + "(" + (var ? "X" : constant()) + ")";
    std::vector<std::string> body;
    if (var) body.push_back("dom(X)");
    int extra = 1 + pick(2);
    for (int j = 0; j < extra; ++j) body.push_back(literal(var, true));
    s += head + " :- ";
    for (std::size_t j = 0; j < body.size(); ++j) s += (j ? ", " : "") + body[j];
    s += ".\n";
  }
  for (int i = 0; i < deferred; ++i) {
    s += "%@deferred\n";
    switch (pick(4)) {
      case 0:
        s += ":- " + std::string(preds[pick(4)]) + "(X), " + literal(true, true) + ".\n";
        break;
      case 1:
        s += ":- " + std::string(preds[pick(4)]) + "(X), " + preds[pick(4)] + "(Y), X != Y.\n";
        break;
      case 2:
        s += ":- " + literal(false, false) + ", " + literal(false, true) + ".\n";
        break;
      default:
        s += ":- " + std::string(preds[pick(4)]) + "(X), " + literal(true, true) + ", " +
             literal(true, true) + ".\n";
        break;
    }
  }
  return s;
}

}  // namespace testsupport
