#pragma once

// Independent reference checks for the benchmark families, written against
// the generator parameters rather than the encodings.

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "microasp/benchgen.hpp"

namespace testsupport {

struct ParsedAtom {
  std::string name;
  std::vector<long> args;
};

inline ParsedAtom parse_atom(const std::string& s) {
  ParsedAtom a;
  auto open = s.find('(');
  a.name = s.substr(0, open);
  if (open == std::string::npos) return a;
  std::string rest = s.substr(open + 1, s.size() - open - 2);
  std::size_t start = 0;
  while (start <= rest.size()) {
    auto comma = rest.find(',', start);
    if (comma == std::string::npos) comma = rest.size();
    a.args.push_back(std::stol(rest.substr(start, comma - start)));
    start = comma + 1;
  }
  return a;
}

/// All stable perfect matchings as vectors wife[m] (1-based ids), sorted.
inline std::vector<std::vector<int>> stable_matchings(const microasp::MarriageInstance& inst) {
  int n = inst.n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> husband(n);
    for (int m = 0; m < n; ++m) husband[perm[m]] = m;
    bool stable = true;
    for (int m = 0; m < n && stable; ++m) {
      for (int w = 0; w < n && stable; ++w) {
        if (perm[m] == w) continue;
        bool man_prefers = inst.man_score[m][w] > inst.man_score[m][perm[m]];
        bool woman_accepts = inst.woman_score[w][m] >= inst.woman_score[w][husband[w]];
        if (man_prefers && woman_accepts) stable = false;
      }
    }
    if (stable) {
      std::vector<int> wife(n);
      for (int m = 0; m < n; ++m) wife[m] = perm[m] + 1;
      out.push_back(wife);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  return out;
}

/// Matching read from a model's match/2 atoms; empty if not a function.
inline std::vector<int> matching_of(const std::vector<std::string>& model, int n) {
  std::vector<int> wife(n, 0);
  for (const auto& s : model) {
    auto a = parse_atom(s);
    if (a.name != "match") continue;
    if (wife[a.args[0] - 1] != 0) return {};
    wife[a.args[0] - 1] = static_cast<int>(a.args[1]);
  }
  return wife;
}

inline bool brute_force_sat(const microasp::SatInstance& inst) {
  for (std::uint32_t mask = 0; mask < (1u << inst.vars); ++mask) {
    bool all = std::all_of(inst.clauses.begin(), inst.clauses.end(), [&](const auto& c) {
      return std::any_of(c.begin(), c.end(), [&](int l) {
        bool v = mask >> (std::abs(l) - 1) & 1;
        return l > 0 ? v : !v;
      });
    });
    if (all) return true;
  }
  return false;
}

inline bool satisfies(const microasp::SatInstance& inst, const std::vector<std::string>& model) {
  std::set<long> truth;
  for (const auto& s : model) {
    auto a = parse_atom(s);
    if (a.name == "t") truth.insert(a.args[0]);
  }
  return std::all_of(inst.clauses.begin(), inst.clauses.end(), [&](const auto& c) {
    return std::any_of(c.begin(), c.end(), [&](int l) {
      bool v = truth.count(std::abs(l)) > 0;
      return l > 0 ? v : !v;
    });
  });
}

/// In bounds, exactly one position per square, no shared cell.
inline bool valid_packing(const microasp::PackingInstance& inst,
                          const std::vector<std::string>& model) {
  std::size_t m = inst.sizes.size();
  std::vector<int> count(m, 0);
  std::vector<std::vector<int>> grid(inst.height, std::vector<int>(inst.width, 0));
  for (const auto& s : model) {
    auto a = parse_atom(s);
    if (a.name != "pos") continue;
    long i = a.args[0], x = a.args[1], y = a.args[2];
    if (i < 1 || static_cast<std::size_t>(i) > m) return false;
    ++count[i - 1];
    int d = inst.sizes[i - 1];
    if (x < 0 || y < 0 || x + d > inst.width || y + d > inst.height) return false;
    for (long yy = y; yy < y + d; ++yy) {
      for (long xx = x; xx < x + d; ++xx) {
        if (grid[yy][xx]++) return false;
      }
    }
  }
  return std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
}

/// Exhaustive placement search.
inline bool packing_feasible(const microasp::PackingInstance& inst) {
  std::vector<std::vector<int>> grid(inst.height, std::vector<int>(inst.width, 0));
  auto fits = [&](int x, int y, int d) {
    if (x + d > inst.width || y + d > inst.height) return false;
    for (int yy = y; yy < y + d; ++yy) {
      for (int xx = x; xx < x + d; ++xx) {
        if (grid[yy][xx]) return false;
      }
    }
    return true;
  };
  auto mark = [&](int x, int y, int d, int v) {
    for (int yy = y; yy < y + d; ++yy) {
      for (int xx = x; xx < x + d; ++xx) grid[yy][xx] = v;
    }
  };
  auto place = [&](auto&& self, std::size_t i) -> bool {
    if (i == inst.sizes.size()) return true;
    int d = inst.sizes[i];
    for (int y = 0; y < inst.height; ++y) {
      for (int x = 0; x < inst.width; ++x) {
        if (!fits(x, y, d)) continue;
        mark(x, y, d, 1);
        bool ok = self(self, i + 1);
        mark(x, y, d, 0);
        if (ok) return true;
      }
    }
    return false;
  };
  return place(place, 0);
}

}  // namespace testsupport
