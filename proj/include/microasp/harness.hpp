#pragma once

// Batch experiments: the random 3-SAT sweep and the strategy-by-instance
// matrix that labels portfolio training data.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "microasp/portfolio.hpp"
#include "microasp/strategies.hpp"

namespace microasp {

/// min, min+step, ... up to max (inclusive, tolerant to rounding).
std::vector<double> ratio_grid(double min, double max, double step);

struct SweepConfig {
  int vars = 60;
  std::vector<double> ratios;
  int seeds = 50;
  std::uint64_t first_seed = 1;
  std::vector<StrategyKind> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  StrategyOptions options;
  unsigned jobs = 1;
};

struct SweepRow {
  int vars = 0;
  double ratio = 0;
  int instances = 0;
  int unsat = 0;         // by the first strategy of the config
  int timeouts = 0;      // runs of any strategy that hit the budget
  int disagreements = 0; // instances where finished strategies disagree
  std::map<StrategyKind, double> mean_conflicts;
  std::map<StrategyKind, double> mean_time_s;
  double unsat_freq() const { return instances ? double(unsat) / instances : 0; }
};

/// Rows in grid order whatever `jobs` is.
std::vector<SweepRow> run_sweep3sat(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<StrategyKind>& strategies, bool with_time = true);

struct BenchInstance {
  std::string name;
  Program program;
};

/// `*.lp` files of a directory, sorted by name.
std::vector<BenchInstance> load_instances(const std::filesystem::path& dir);

enum class CostMeasure { Conflicts, Seconds };

struct BenchConfig {
  StrategyOptions options;
  std::string family = "auto";
  CostMeasure cost = CostMeasure::Conflicts;
  unsigned jobs = 1;
};

/// Every strategy on every instance under the same budgets. A run that
/// times out is charged its budget (conflicts) or its elapsed time.
Dataset run_bench(const std::vector<BenchInstance>& instances, const BenchConfig& cfg);

}  // namespace microasp
