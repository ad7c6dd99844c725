// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "checkers.hpp"
#include "microasp/benchgen.hpp"
#include "microasp/harness.hpp"
#include "microasp/oracle.hpp"
#include "microasp/portfolio.hpp"
#include "microasp/report.hpp"
#include "microasp/solver.hpp"
#include "microasp/strategies.hpp"
#include "support.hpp"

using namespace microasp;
using Models = std::vector<std::vector<std::string>>;

namespace {

struct Check {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Models sorted(Models m) {
  std::sort(m.begin(), m.end());
  return m;
}

Models oracle_models(const GroundProgram& gp) { return sorted(named_models(gp.atoms, enumerate_stable_models(gp))); }

// Model given as atom names, checked against the fully ground program.
bool stable_in(const GroundProgram& gp, const std::vector<std::string>& model) {
  std::map<std::string, AtomId> ids;
  for (AtomId a = 0; a < gp.atoms.size(); ++a) ids[to_string(gp.atoms.atom(a))] = a;
  std::vector<AtomId> t;
  for (const auto& s : model) {
    auto it = ids.find(s);
    if (it == ids.end()) return false;
    t.push_back(it->second);
  }
  return is_stable_model(gp, Interpretation::total(gp.atoms.size(), t));
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

Check worked_example(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  const std::string g1_g6 =
      ":- a(1), b(1).\n"
      ":- a(1), not b(1).\n"
      "a(1) :- not b(1).\n"
      "b(1) :- not a(1).\n"
      "c(1) :- not d(1).\n"
      "d(1) :- not c(1).\n";
  GroundProgram gp = ground_program(parse_program(testsupport::kPi1));
  c.require(to_string(gp) == g1_g6, "ground program differs from g1-g6");
  c.require(gp.rules.size() == 6, "expected 6 ground rules");

  Solver s(gp);
  c.require(s.solve() == SolveStatus::Satisfiable, "solver did not find a model");
  auto m = testsupport::names(gp.atoms, s.model());
  c.require(stable_in(gp, m), "solver model is not stable");
  Models expected{{"b(1)", "c(1)"}, {"b(1)", "d(1)"}};
  c.require(std::find(expected.begin(), expected.end(), m) != expected.end(), "unexpected model");
  c.require(oracle_models(gp) == expected, "oracle model set differs");

  Solver t(gp);
  auto a = testsupport::id_of(gp.atoms, "a", 1);
  auto b = testsupport::id_of(gp.atoms, "b", 1);
  t.decide(Lit::positive(a));
  auto conflict = t.propagate();
  c.require(conflict.has_value(), "deciding a(1) did not conflict");
  if (conflict) {
    Learned l = t.analyze(*conflict);
    c.require(!l.unsat && l.nogood == std::vector<Lit>{Lit::positive(a)}, "learned nogood is not {a(1)}");
    c.require(l.backjump_level == 0, "backjump level not 0");
    t.learn(l);
    c.require(!t.propagate(), "propagation after learning conflicted");
    c.require(t.is_true(Lit::negative(a)) && t.is_true(Lit::positive(b)), "a(1) false / b(1) true not derived");
  }
  double secs = seconds_since(start);
  c.require(secs < 1.0, "runtime over 1 s");
  detail = "models=" + std::to_string(expected.size()) + " time=" + std::to_string(secs) + "s";
  return c;
}

Check lazy_faithful(std::string& detail) {
  Check c;
  Program p = parse_program(testsupport::kPi1Deferred);
  std::uint64_t r3 = 0, r6 = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    StrategyOptions o;
    o.solver.seed = seed;
    StrategyRun run(p, StrategyKind::Lazy, o);
    SolveStatus st;
    Models found;
    while ((st = run.next()) == SolveStatus::Satisfiable) found.push_back(run.model());
    auto res = run.result(st);
    c.require(sorted(found) == Models{{"b(1)", "c(1)"}, {"b(1)", "d(1)"}}, "wrong models at seed " + std::to_string(seed));
    auto it = res.lazy_added_by_constraint.find(2);
    if (it != res.lazy_added_by_constraint.end()) r3 += it->second;
    auto jt = res.lazy_added_by_constraint.find(5);
    if (jt != res.lazy_added_by_constraint.end()) r6 += jt->second;
  }
  c.require(r3 == 0, "r3 instantiated " + std::to_string(r3) + " times");
  detail = "seeds=100 r3_added=" + std::to_string(r3) + " r6_added=" + std::to_string(r6);
  return c;
}

Check fuzz(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  int programs = 0, incoherent = 0, nontight = 0, checked_models = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    Program p = parse_program(testsupport::random_program(seed));
    GroundProgram gp = ground_program(p, GroundOptions{true});
    Models expected = oracle_models(gp);
    if (expected.empty()) ++incoherent;
    if (!Solver(gp).tight()) ++nontight;
    for (auto k : kAllStrategies) {
      StrategyOptions o;
      o.solver.seed = seed;
      auto r = solve(p, k, o);
      std::string tag = " (seed " + std::to_string(seed) + ", " + to_string(k) + ")";
      c.require((r.status == SolveStatus::Satisfiable) == !expected.empty(), "coherence disagrees" + tag);
      if (r.status == SolveStatus::Satisfiable) {
        c.require(stable_in(gp, r.model), "model not stable" + tag);
        ++checked_models;
      }
      auto e = enumerate_models(p, k, 0, o);
      c.require(sorted(e.models) == expected, "model set differs" + tag);
      for (const auto& m : e.models) {
        c.require(stable_in(gp, m), "enumerated model not stable" + tag);
        ++checked_models;
      }
    }
    ++programs;
  }
  double secs = seconds_since(start);
  c.require(secs < 300, "runtime over 5 min");
  detail = "programs=" + std::to_string(programs) + " incoherent=" + std::to_string(incoherent) +
           " nontight=" + std::to_string(nontight) + " models_checked=" + std::to_string(checked_models) +
           " time=" + std::to_string(secs) + "s";
  return c;
}

Check phase_transition(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  SweepConfig cfg;
  cfg.vars = 60;
  cfg.ratios = ratio_grid(3.0, 5.5, 0.25);
  cfg.seeds = 50;
  cfg.jobs = jobs();
  auto rows = run_sweep3sat(cfg);
  c.require(rows.size() == 11, "grid size");
  // crossing by linear interpolation between the bracketing grid points
  double crossing = -1;
  for (std::size_t i = 0; i + 1 < rows.size() && crossing < 0; ++i) {
    double f0 = rows[i].unsat_freq(), f1 = rows[i + 1].unsat_freq();
    if (f0 < 0.5 && f1 >= 0.5) {
      crossing = rows[i].ratio + (0.5 - f0) / (f1 - f0) * (rows[i + 1].ratio - rows[i].ratio);
    }
  }
  c.require(crossing >= 4.0 && crossing <= 4.6, "UNSAT frequency crosses 0.5 outside [4.0, 4.6]");
  int timeouts = 0, disagreements = 0;
  for (const auto& r : rows) {
    timeouts += r.timeouts;
    disagreements += r.disagreements;
  }
  c.require(timeouts == 0, "timeouts in sweep");
  c.require(disagreements == 0, "strategies disagree on some instance");
  std::string peaks;
  for (auto k : cfg.strategies) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].mean_conflicts.at(k) > rows[arg].mean_conflicts.at(k)) arg = i;
    }
    c.require(arg > 0 && arg + 1 < rows.size(), "no interior conflict maximum for " + to_string(k));
    std::ostringstream os;
    os << ' ' << to_string(k) << "_peak=" << rows[arg].ratio;
    peaks += os.str();
  }
  int small = 0;
  for (double ratio : ratio_grid(3.0, 5.5, 0.5)) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto inst = make_3sat(16, ratio, seed);
      bool sat = testsupport::brute_force_sat(inst);
      for (auto k : kAllStrategies) {
        auto r = solve(parse_program(sat_program(inst)), k);
        c.require((r.status == SolveStatus::Satisfiable) == sat, "v=16 answer differs from brute force");
        if (r.status == SolveStatus::Satisfiable) c.require(testsupport::satisfies(inst, r.model), "v=16 model falsifies a clause");
      }
      ++small;
    }
  }
  double secs = seconds_since(start);
  c.require(secs < 600, "runtime over 10 min");
  std::ostringstream os;
  os << "crossing=" << crossing << peaks << " v16_instances=" << small << " time=" << secs << "s";
  detail = os.str();
  return c;
}

Check marriage(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  int instances = 0;
  std::uint64_t k0_invalidations = 0;
  for (int n = 1; n <= 5; ++n) {
    for (int k : {0, 50, 100}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto inst = make_marriage(n, k, seed);
        auto expected = testsupport::stable_matchings(inst);
        Program p = parse_program(marriage_program(inst));
        for (auto kind : kAllStrategies) {
          auto e = enumerate_models(p, kind);
          std::vector<std::vector<int>> got;
          for (const auto& m : e.models) got.push_back(testsupport::matching_of(m, n));
          std::sort(got.begin(), got.end());
          c.require(got == expected, "matchings differ for n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                         " seed=" + std::to_string(seed) + " " + to_string(kind));
          if (k == 0 && kind == StrategyKind::Lazy) k0_invalidations += e.stats.invalidations;
        }
        ++instances;
      }
    }
  }
  c.require(k0_invalidations == 0, "lazy invalidations at k=0");
  double secs = seconds_since(start);
  c.require(secs < 120, "runtime over 2 min");
  detail = "instances=" + std::to_string(instances) + " lazy_invalidations_k0=" + std::to_string(k0_invalidations) +
           " time=" + std::to_string(secs) + "s";
  return c;
}

Check packing(std::string& detail) {
  Check c;
  std::mt19937_64 rng(2024);
  int sat = 0, unsat = 0, oracle_confirmed = 0;
  for (int i = 0; i < 20; ++i) {
    PackingInstance inst;
    // a few tiny boxes so that some instances fit under the oracle limit
    int max_side = i < 6 ? 2 : 6;
    inst.width = 1 + static_cast<int>(uniform_below(rng, max_side));
    inst.height = 1 + static_cast<int>(uniform_below(rng, max_side));
    int m = 1 + static_cast<int>(uniform_below(rng, 4));
    int side = std::min({3, inst.width, inst.height});
    for (int j = 0; j < m; ++j) inst.sizes.push_back(1 + static_cast<int>(uniform_below(rng, side)));
    bool feasible = testsupport::packing_feasible(inst);
    Program p = parse_program(packing_program(inst));
    std::string tag = " (instance " + std::to_string(i) + ")";
    for (auto k : kAllStrategies) {
      auto r = solve(p, k);
      if (r.status == SolveStatus::Satisfiable) {
        c.require(feasible, "model for an infeasible instance" + tag);
        c.require(testsupport::valid_packing(inst, r.model), "invalid packing" + tag);
      } else {
        c.require(r.status == SolveStatus::Unsatisfiable && !feasible, "feasible instance answered UNSAT" + tag);
      }
    }
    feasible ? ++sat : ++unsat;
    GroundProgram gp = ground_program(p, GroundOptions{true});
    if (!feasible && gp.atoms.size() <= kOracleMaxAtoms) {
      c.require(enumerate_stable_models(gp).empty(), "oracle finds a model" + tag);
      ++oracle_confirmed;
    }
  }
  c.require(unsat > 0 && sat > 0, "need both feasible and infeasible instances");
  detail = "sat=" + std::to_string(sat) + " unsat=" + std::to_string(unsat) +
           " unsat_oracle_confirmed=" + std::to_string(oracle_confirmed);
  return c;
}

Check portfolio(std::string& detail) {
  Check c;
  Dataset sep;
  sep.feature_names = {"x", "y"};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    DatasetRow r;
    r.instance = "s" + std::to_string(i);
    double x = double(uniform_below(rng, 1000)), y = double(uniform_below(rng, 1000));
    r.features = {x, y};
    int label = x < 500 ? (y < 500 ? 0 : 1) : (y < 300 ? 2 : 3);
    r.label = kStrategyLabels[label];
    for (int s = 0; s < 4; ++s) r.runtimes[s] = s == label ? 1 : 5;
    sep.rows.push_back(r);
  }
  auto srep = cross_validate(sep, 10, 1);
  c.require(srep.metrics.f_measure >= 0.95, "separable f-measure below 0.95");

  std::vector<BenchInstance> inst;
  for (int n : {6, 8, 10, 12}) {
    for (int k : {0, 25, 50, 75, 100}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        inst.push_back({"m" + std::to_string(n) + "_" + std::to_string(k) + "_" + std::to_string(seed),
                        gen_marriage(n, k, seed)});
      }
    }
  }
  BenchConfig cfg;
  cfg.options.solver.conflict_budget = 20000;
  cfg.jobs = jobs();
  Dataset d = run_bench(inst, cfg);
  auto rep = cross_validate(d, 10, 1);
  c.require(rep.portfolio_total <= rep.best_single_total, "portfolio costs more than the best single strategy");
  std::ostringstream os;
  os << "separable_f=" << srep.metrics.f_measure << " harness_rows=" << rep.examples
     << " portfolio_conflicts=" << rep.portfolio_total << " best_single=" << rep.best_single << ':'
     << rep.best_single_total << " gain_pct=" << rep.gain_pct;
  detail = os.str();
  return c;
}

Check determinism(std::string& detail) {
  Check c;
  std::vector<std::pair<std::string, Program>> inputs{
      {"pi1", parse_program(testsupport::kPi1Deferred)},
      {"marriage", gen_marriage(6, 50, 4)},
      {"3sat", gen_3sat(40, 4.25, 9)},
      {"packing", gen_packing(4, 4, {2, 2, 1})}};
  int reports = 0;
  for (const auto& [name, p] : inputs) {
    for (auto k : kAllStrategies) {
      for (std::uint64_t seed : {0, 13}) {
        StrategyOptions o;
        o.solver.seed = seed;
        o.solver.conflict_budget = 50000;
        RunInfo info{name, to_string(k), seed, 50000, std::nullopt};
        auto a = report_json(solve(p, k, o), info).dump(2);
        auto b = report_json(solve(p, k, o), info).dump(2);
        c.require(a == b, "reports differ for " + name + " " + to_string(k));
        ++reports;
      }
    }
  }
  detail = "report_pairs=" + std::to_string(reports);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check(std::string&)> run;
  };
  std::vector<Criterion> all{
      {"worked example golden tests", worked_example},
      {"lazy never instantiates r3", lazy_faithful},
      {"strategy-equivalence fuzzing", fuzz},
      {"3-SAT phase transition", phase_transition},
      {"marriage semantics", marriage},
      {"packing validity", packing},
      {"portfolio harness", portfolio},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::string detail;
    Check c;
    try {
      c = all[i].run(detail);
    } catch (const std::exception& e) {
      c.ok = false;
      c.why = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failed;
    std::printf("%s %zu %s: %s%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, all[i].name, detail.c_str(),
                c.ok ? "" : " -- ", c.why.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
