#include "microasp/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "microasp/benchgen.hpp"

namespace microasp {

std::vector<double> ratio_grid(double min, double max, double step) {
  if (step <= 0 || max < min) return {min};
  auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(min + double(i) * step);
  return out;
}

namespace {

// Runs f(i) for i in [0, n) on up to `jobs` threads.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F f) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Run {
  SolveResult result;
  double seconds = 0;
};

Run timed_solve(const Program& p, StrategyKind k, const StrategyOptions& o) {
  auto start = std::chrono::steady_clock::now();
  Run r{solve(p, k, o), 0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<SweepRow> run_sweep3sat(const SweepConfig& cfg) {
  const std::size_t ns = cfg.strategies.size();
  const std::size_t per_point = static_cast<std::size_t>(cfg.seeds);
  std::vector<std::vector<Run>> runs(cfg.ratios.size() * per_point);
  parallel_for(runs.size(), cfg.jobs, [&](std::size_t job) {
    double ratio = cfg.ratios[job / per_point];
    std::uint64_t seed = cfg.first_seed + job % per_point;
    Program p = gen_3sat(cfg.vars, ratio, seed);
    for (auto k : cfg.strategies) runs[job].push_back(timed_solve(p, k, cfg.options));
  });
  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < cfg.ratios.size(); ++g) {
    SweepRow row;
    row.vars = cfg.vars;
    row.ratio = cfg.ratios[g];
    row.instances = cfg.seeds;
    for (std::size_t s = 0; s < per_point; ++s) {
      const auto& inst = runs[g * per_point + s];
      if (ns && inst[0].result.status == SolveStatus::Unsatisfiable) ++row.unsat;
      std::optional<SolveStatus> seen;
      bool disagree = false;
      for (std::size_t k = 0; k < ns; ++k) {
        auto st = inst[k].result.status;
        if (st == SolveStatus::Timeout) {
          ++row.timeouts;
          continue;
        }
        if (seen && *seen != st) disagree = true;
        seen = st;
      }
      row.disagreements += disagree;
      for (std::size_t k = 0; k < ns; ++k) {
        row.mean_conflicts[cfg.strategies[k]] += double(inst[k].result.stats.conflicts) / cfg.seeds;
        row.mean_time_s[cfg.strategies[k]] += inst[k].seconds / cfg.seeds;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<StrategyKind>& strategies, bool with_time) {
  out << "vars,ratio,instances,unsat_freq,timeouts,disagreements";
  for (auto k : strategies) out << ",mean_conflicts_" << to_string(k);
  if (with_time) {
    for (auto k : strategies) out << ",mean_time_" << to_string(k);
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.vars << ',' << r.ratio << ',' << r.instances << ',' << r.unsat_freq() << ','
        << r.timeouts << ',' << r.disagreements;
    for (auto k : strategies) out << ',' << r.mean_conflicts.at(k);
    if (with_time) {
      for (auto k : strategies) out << ',' << r.mean_time_s.at(k);
    }
    out << '\n';
  }
}

std::vector<BenchInstance> load_instances(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".lp") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchInstance> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    out.push_back({f.filename().string(), parse_program(ss.str())});
  }
  return out;
}

Dataset run_bench(const std::vector<BenchInstance>& instances, const BenchConfig& cfg) {
  Dataset d;
  std::string family = "generic";
  if (!instances.empty()) family = resolve_family(instances.front().program, cfg.family);
  d.feature_names = extract_features(Program{}, family).names;
  d.rows.resize(instances.size());
  parallel_for(instances.size(), cfg.jobs, [&](std::size_t i) {
    const auto& inst = instances[i];
    DatasetRow& row = d.rows[i];
    row.instance = inst.name;
    row.features = extract_features(inst.program, family).values;
    std::array<bool, 4> timed_out{};
    for (std::size_t s = 0; s < 4; ++s) {
      Run r = timed_solve(inst.program, kAllStrategies[s], cfg.options);
      timed_out[s] = r.result.status == SolveStatus::Timeout;
      double conflicts = double(r.result.stats.conflicts);
      if (timed_out[s] && cfg.options.solver.conflict_budget) {
        conflicts = double(*cfg.options.solver.conflict_budget);
      }
      row.runtimes[s] = cfg.cost == CostMeasure::Conflicts ? conflicts : r.seconds;
    }
    row.label = best_label(row.runtimes, timed_out);
  });
  return d;
}

}  // namespace microasp
