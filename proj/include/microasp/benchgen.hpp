#pragma once

// Benchmark generators. Each produces program text in the input syntax;
// the expensive constraints carry the %@deferred annotation and generator
// parameters are recorded as %@meta lines.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "microasp/syntax.hpp"

namespace microasp {

/// Uniform integer in [0, n) by rejection; identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

struct MarriageInstance {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  /// man_score[m][w]: score man m gives woman w (0-based); likewise for women.
  std::vector<std::vector<int>> man_score;
  std::vector<std::vector<int>> woman_score;
};

constexpr int kBaseScore = 2;
constexpr int kLowScore = 1;

MarriageInstance make_marriage(int n, int k, std::uint64_t seed);
std::string marriage_program(const MarriageInstance& inst);
Program gen_marriage(int n, int k, std::uint64_t seed);

struct SatInstance {
  int vars = 0;
  double ratio = 0;
  std::uint64_t seed = 0;
  /// Clauses of three distinct variables, literals as +v / -v (1-based).
  std::vector<std::array<int, 3>> clauses;
};

int clause_count(int vars, double ratio);
SatInstance make_3sat(int vars, double ratio, std::uint64_t seed);
std::string sat_program(const SatInstance& inst);
Program gen_3sat(int vars, double ratio, std::uint64_t seed);

struct PackingInstance {
  int width = 0;
  int height = 0;
  std::vector<int> sizes;
};

std::string packing_program(const PackingInstance& inst);
Program gen_packing(int width, int height, const std::vector<int>& sizes);

}  // namespace microasp
