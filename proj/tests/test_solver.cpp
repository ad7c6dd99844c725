#include "doctest.h"
#include "microasp/grounder.hpp"
#include "microasp/solver.hpp"
#include "support.hpp"

using namespace microasp;

namespace {

GroundProgram ground(const char* src) { return ground_program(parse_program(src)); }

}  // namespace

TEST_CASE("solve worked example") {
  GroundProgram gp = ground(testsupport::kPi1);
  Solver s(gp);
  REQUIRE(s.solve() == SolveStatus::Satisfiable);
  auto m = testsupport::names(gp.atoms, s.model());
  bool ok = m == std::vector<std::string>{"b(1)", "c(1)"} ||
            m == std::vector<std::string>{"b(1)", "d(1)"};
  CHECK(ok);
}

TEST_CASE("propagation trace after deciding a(1)") {
  GroundProgram gp = ground(testsupport::kPi1);
  Solver s(gp);
  CHECK_FALSE(s.propagate());
  CHECK(s.trail().empty());
  auto a = testsupport::id_of(gp.atoms, "a", 1);
  auto b = testsupport::id_of(gp.atoms, "b", 1);
  s.decide(Lit::positive(a));
  auto conflict = s.propagate();
  REQUIRE(conflict);
  Learned l = s.analyze(*conflict);
  CHECK_FALSE(l.unsat);
  CHECK(l.nogood == std::vector<Lit>{Lit::positive(a)});
  CHECK(l.backjump_level == 0);
  s.learn(l);
  CHECK(s.decision_level() == 0);
  CHECK_FALSE(s.propagate());
  CHECK(s.value(Lit::negative(a)) == Truth::True);
  CHECK(s.value(Lit::positive(b)) == Truth::True);
  auto c = testsupport::id_of(gp.atoms, "c", 1);
  auto d = testsupport::id_of(gp.atoms, "d", 1);
  s.decide(Lit::positive(c));
  CHECK_FALSE(s.propagate());
  CHECK(s.value(Lit::negative(d)) == Truth::True);
  CHECK(testsupport::names(gp.atoms, s.model()) == std::vector<std::string>{"b(1)", "c(1)"});
}

TEST_CASE("trail after negative decision") {
  GroundProgram gp = ground(testsupport::kPi1);
  Solver s(gp);
  auto a = testsupport::id_of(gp.atoms, "a", 1);
  auto b = testsupport::id_of(gp.atoms, "b", 1);
  s.decide(Lit::negative(a));
  CHECK_FALSE(s.propagate());
  CHECK(s.value(Lit::positive(b)) == Truth::True);
}

TEST_CASE("contradictory nogoods") {
  Solver s(1);
  Lit a = Lit::positive(0);
  s.add_nogood(std::vector<Lit>{a});
  s.add_nogood(std::vector<Lit>{~a});
  CHECK(s.solve() == SolveStatus::Unsatisfiable);
}

TEST_CASE("empty program") {
  GroundProgram gp;
  Solver s(gp);
  CHECK(s.solve() == SolveStatus::Satisfiable);
  CHECK(s.model().empty());
}

TEST_CASE("empty-body constraint") {
  Solver s(ground(":- ."));
  CHECK(s.solve() == SolveStatus::Unsatisfiable);
}

TEST_CASE("choose_literal fresh heuristic") {
  GroundProgram gp = ground(testsupport::kPi1);
  Solver s(gp);
  CHECK(s.choose_literal() == Lit::negative(0));
  Solver one(1);
  CHECK(one.choose_literal().var() == 0);
  Solver bumped(gp);
  bumped.bump_activity(3);
  CHECK(bumped.choose_literal() == Lit::negative(3));
}

TEST_CASE("luby sequence and restart schedule") {
  std::vector<std::uint64_t> got;
  for (std::uint64_t i = 1; i <= 15; ++i) got.push_back(Solver::luby(i));
  CHECK(got == std::vector<std::uint64_t>{1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8});
  Solver s(4);
  CHECK(s.conflicts_until_restart() == 32);
}

TEST_CASE("non-tight program: positive loop is not self-supporting") {
  GroundProgram gp = ground("a :- b. b :- a. c :- not a.");
  Solver s(gp);
  REQUIRE(s.solve() == SolveStatus::Satisfiable);
  CHECK(testsupport::names(gp.atoms, s.model()) == std::vector<std::string>{"c"});
  Solver forced(ground("a :- b. b :- a. :- not a."));
  CHECK(forced.solve() == SolveStatus::Unsatisfiable);
}

TEST_CASE("conflict budget yields timeout") {
  // pigeonhole 4 into 3 needs conflicts
  std::string src;
  for (int p = 1; p <= 4; ++p) src += "pigeon(" + std::to_string(p) + ").";
  for (int h = 1; h <= 3; ++h) src += "hole(" + std::to_string(h) + ").";
  src +=
      "in(P,H) :- pigeon(P), hole(H), not out(P,H)."
      "out(P,H) :- pigeon(P), hole(H), not in(P,H)."
      "some(P) :- in(P,H)."
      ":- pigeon(P), not some(P)."
      ":- in(P,H), in(Q,H), P < Q.";
  GroundProgram gp = ground(src.c_str());
  SolverOptions opts;
  opts.conflict_budget = 0;
  Solver s(gp, opts);
  CHECK(s.solve() == SolveStatus::Timeout);
  Solver full(gp);
  CHECK(full.solve() == SolveStatus::Unsatisfiable);
  CHECK(full.stats().conflicts > 0);
}
