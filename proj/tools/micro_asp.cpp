#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "microasp/benchgen.hpp"
#include "microasp/grounder.hpp"
#include "microasp/harness.hpp"
#include "microasp/oracle.hpp"
#include "microasp/portfolio.hpp"
#include "microasp/report.hpp"
#include "microasp/strategies.hpp"

using namespace microasp;

namespace {

constexpr int kExitError = 1;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<StrategyKind> parse_strategies(const std::string& list) {
  std::vector<StrategyKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto k = parse_strategy(item);
    if (!k) throw CLI::ValidationError("--strategies", "unknown strategy " + item);
    out.push_back(*k);
  }
  return out;
}

struct Budgets {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> conflicts;
  std::optional<double> timeout_s;
  std::optional<std::size_t> max_lazy;

  void attach(CLI::App* app, bool with_lazy = true) {
    app->add_option("--seed", seed, "Heuristic seed (0 = no jitter)");
    app->add_option("--conflicts", conflicts, "Conflict budget")->check(CLI::NonNegativeNumber);
    app->add_option("--timeout-s", timeout_s, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
    if (with_lazy) {
      app->add_option("--max-lazy-per-check", max_lazy, "Cap on instances added per lazy check")
          ->check(CLI::PositiveNumber);
    }
  }

  StrategyOptions options() const {
    StrategyOptions o;
    o.solver.seed = seed;
    o.solver.conflict_budget = conflicts;
    o.solver.time_budget_s = timeout_s;
    o.max_lazy_per_check = max_lazy;
    return o;
  }
};

std::string model_line(const std::vector<std::string>& atoms) {
  std::string s;
  for (const auto& a : atoms) s += (s.empty() ? "" : " ") + a;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"micro-asp: ground+solve with deferred constraints"};
  app.require_subcommand(1);
  int exit = 0;

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve a program");
  std::string input;
  std::string strategy = "full";
  std::string tree_path, family = "auto";
  bool json = false, dump = false;
  std::size_t models = 1;
  Budgets budgets;
  solve_cmd->add_option("file", input, "Program file ('-' for stdin)")->required();
  solve_cmd->add_option("--strategy", strategy, "full|lazy|eager|post|portfolio")
      ->check(CLI::IsMember({"full", "lazy", "eager", "post", "portfolio"}));
  solve_cmd->add_option("--tree", tree_path, "Decision tree for --strategy portfolio");
  solve_cmd->add_option("--family", family, "Feature family for the portfolio (auto|marriage|generic)");
  solve_cmd->add_option("--models", models, "Number of models to print (0 = all)");
  solve_cmd->add_flag("--json", json, "Print a JSON report");
  solve_cmd->add_flag("--dump-ground", dump, "Print the ground program and stop");
  budgets.attach(solve_cmd);
  solve_cmd->callback([&] {
    Program p = parse_program(read_file(input));
    std::string label = strategy;
    if (strategy == "portfolio") {
      if (tree_path.empty()) throw CLI::ValidationError("--tree", "required with --strategy portfolio");
      auto tree = DecisionTree::from_json(nlohmann::json::parse(read_file(tree_path)));
      strategy = tree.predict(extract_features(p, family).values);
      label = "portfolio:" + strategy;
    }
    StrategyKind kind = *parse_strategy(strategy);
    if (dump) {
      bool full = kind == StrategyKind::Full;
      std::cout << to_string(ground_program(p, GroundOptions{full}));
      return;
    }
    StrategyRun run(p, kind, budgets.options());
    SolveStatus st = run.next();
    SolveResult res = run.result(st);
    exit = exit_code(st);
    if (json) {
      RunInfo info{input, label, budgets.seed, budgets.conflicts, budgets.timeout_s};
      std::cout << report_json(res, info).dump(2) << '\n';
      return;
    }
    std::cout << status_name(st) << '\n';
    std::size_t shown = 0;
    while (st == SolveStatus::Satisfiable) {
      std::cout << "Model " << ++shown << ": " << model_line(run.model()) << '\n';
      if (models != 0 && shown >= models) break;
      st = run.next();
    }
    const auto& s = run.solver().stats();
    std::cout << "strategy=" << label << " conflicts=" << s.conflicts << " decisions=" << s.decisions
              << " invalidations=" << s.invalidations << " lazy_added=" << s.lazy_added << '\n';
  });

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
  gen->require_subcommand(1);
  std::string out_path;
  int n = 0, k = 0, vars = 0, w = 0, h = 0;
  double ratio = 0;
  std::uint64_t gen_seed = 1;
  std::vector<int> sizes;
  auto* gm = gen->add_subcommand("marriage", "Stable marriage with perturbed preferences");
  gm->add_option("--n", n, "Men (= women)")->required();
  gm->add_option("--k", k, "Perturbation percentage")->check(CLI::Range(0, 100));
  gm->add_option("--seed", gen_seed);
  gm->add_option("-o,--output", out_path);
  gm->callback([&] { emit(out_path, marriage_program(make_marriage(n, k, gen_seed))); });
  auto* gs = gen->add_subcommand("3sat", "Random 3-SAT, guess and check");
  gs->add_option("--vars", vars)->required();
  gs->add_option("--ratio", ratio)->required();
  gs->add_option("--seed", gen_seed);
  gs->add_option("-o,--output", out_path);
  gs->callback([&] { emit(out_path, sat_program(make_3sat(vars, ratio, gen_seed))); });
  auto* gp = gen->add_subcommand("packing", "Squares in a rectangle");
  gp->set_help_flag("--help", "Print this help message and exit");
  gp->add_option("--w", w)->required();
  gp->add_option("--h", h)->required();
  gp->add_option("--sizes", sizes)->delimiter(',');
  gp->add_option("-o,--output", out_path);
  gp->callback([&] { emit(out_path, packing_program(PackingInstance{w, h, sizes})); });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Enumerate stable models by brute force");
  oracle->add_option("file", input)->required();
  oracle->callback([&] {
    Program p = parse_program(read_file(input));
    GroundProgram g = ground_program(p, GroundOptions{true});
    auto all = named_models(g.atoms, enumerate_stable_models(g));
    for (const auto& m : all) std::cout << "{" << model_line(m) << "}\n";
    std::cout << all.size() << " stable model" << (all.size() == 1 ? "" : "s") << '\n';
    exit = all.empty() ? 20 : 10;
  });

  // sweep3sat
  auto* sweep = app.add_subcommand("sweep3sat", "Random 3-SAT sweep over clause/variable ratios");
  SweepConfig sc;
  double rmin = 3.0, rmax = 5.5, rstep = 0.25;
  std::string strategies = "full,lazy,eager,post";
  bool no_time = false;
  Budgets sweep_budgets;
  sweep->add_option("--vars", sc.vars);
  sweep->add_option("--rmin", rmin);
  sweep->add_option("--rmax", rmax);
  sweep->add_option("--rstep", rstep);
  sweep->add_option("--seeds", sc.seeds, "Instances per ratio");
  sweep->add_option("--first-seed", sc.first_seed);
  sweep->add_option("--strategies", strategies);
  sweep->add_option("--jobs", sc.jobs);
  sweep->add_flag("--no-time", no_time, "Leave out wall-clock columns");
  sweep->add_option("-o,--output", out_path);
  sweep_budgets.attach(sweep);
  sweep->callback([&] {
    sc.ratios = ratio_grid(rmin, rmax, rstep);
    sc.strategies = parse_strategies(strategies);
    sc.options = sweep_budgets.options();
    std::ostringstream csv;
    write_sweep_csv(csv, run_sweep3sat(sc), sc.strategies, !no_time);
    emit(out_path, csv.str());
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Run every strategy on every instance of a directory");
  std::string dir, cost = "conflicts";
  BenchConfig bc;
  Budgets bench_budgets;
  bench->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
  bench->add_option("--family", bc.family);
  bench->add_option("--cost", cost)->check(CLI::IsMember({"conflicts", "seconds"}));
  bench->add_option("--jobs", bc.jobs);
  bench->add_option("-o,--output", out_path);
  bench_budgets.attach(bench);
  bench->callback([&] {
    bc.options = bench_budgets.options();
    bc.cost = cost == "seconds" ? CostMeasure::Seconds : CostMeasure::Conflicts;
    std::ostringstream csv;
    write_dataset_csv(csv, run_bench(load_instances(dir), bc));
    emit(out_path, csv.str());
  });

  // portfolio
  auto* pf = app.add_subcommand("portfolio", "Train, evaluate or apply the strategy selector");
  pf->require_subcommand(1);
  std::string data;
  TrainOptions topts;
  std::size_t folds = 10;
  std::uint64_t cv_seed = 1;
  auto* train = pf->add_subcommand("train", "Fit a decision tree to a bench CSV");
  train->add_option("data", data)->required();
  train->add_option("--min-split", topts.min_split);
  train->add_option("-o,--output", out_path);
  train->callback([&] {
    std::ifstream in(data);
    if (!in) throw std::runtime_error("cannot read " + data);
    emit(out_path, train_on(read_dataset_csv(in), topts).to_json().dump(2) + "\n");
  });
  auto* eval = pf->add_subcommand("eval", "Cross-validate on a bench CSV");
  eval->add_option("data", data)->required();
  eval->add_option("--folds", folds);
  eval->add_option("--seed", cv_seed);
  eval->add_option("--min-split", topts.min_split);
  eval->add_flag("--json", json);
  eval->callback([&] {
    std::ifstream in(data);
    if (!in) throw std::runtime_error("cannot read " + data);
    auto rep = cross_validate(read_dataset_csv(in), folds, cv_seed, topts);
    nlohmann::ordered_json j{{"examples", rep.examples},
                             {"folds", folds},
                             {"precision", rep.metrics.precision},
                             {"recall", rep.metrics.recall},
                             {"f_measure", rep.metrics.f_measure},
                             {"portfolio_total", rep.portfolio_total},
                             {"best_single", rep.best_single},
                             {"best_single_total", rep.best_single_total},
                             {"gain_pct", rep.gain_pct}};
    if (json) {
      std::cout << j.dump(2) << '\n';
    } else {
      for (const auto& [key, v] : j.items()) std::cout << key << ": " << v << '\n';
    }
  });
  auto* predict = pf->add_subcommand("predict", "Pick a strategy for a program");
  predict->add_option("file", input)->required();
  predict->add_option("--tree", tree_path)->required();
  predict->add_option("--family", family);
  predict->callback([&] {
    auto tree = DecisionTree::from_json(nlohmann::json::parse(read_file(tree_path)));
    std::cout << tree.predict(extract_features(parse_program(read_file(input)), family).values) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const SafetyError& e) {
    std::cerr << "safety error (line " << e.line() << "): " << e.what() << '\n';
    return kExitError;
  } catch (const ParseError& e) {
    std::cerr << "parse error (line " << e.line() << ", column " << e.column() << "): " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return exit;
}
