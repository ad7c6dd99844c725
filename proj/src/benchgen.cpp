#include "microasp/benchgen.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace microasp {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

namespace {

// Picks `count` distinct positions of [0, n) by partial Fisher-Yates.
std::vector<int> choose(std::mt19937_64& rng, int n, int count) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < count; ++i) {
    auto j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

std::vector<std::vector<int>> score_table(std::mt19937_64& rng, int n, int k) {
  int low = k * n / 100;
  std::vector<std::vector<int>> t(n, std::vector<int>(n, kBaseScore));
  for (auto& row : t) {
    for (int j : choose(rng, n, low)) row[j] = kLowScore;
  }
  return t;
}

}  // namespace

MarriageInstance make_marriage(int n, int k, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("marriage: n must be positive");
  if (k < 0 || k > 100) throw std::invalid_argument("marriage: k must be in 0..100");
  MarriageInstance inst{n, k, seed, {}, {}};
  std::mt19937_64 rng(seed);
  inst.man_score = score_table(rng, n, k);
  inst.woman_score = score_table(rng, n, k);
  return inst;
}

std::string marriage_program(const MarriageInstance& inst) {
  std::ostringstream out;
  out << "%@meta family=marriage n=" << inst.n << " k=" << inst.k << " seed=" << inst.seed << "\n";
  for (int i = 1; i <= inst.n; ++i) out << "man(" << i << "). woman(" << i << ").\n";
  for (int m = 0; m < inst.n; ++m) {
    for (int w = 0; w < inst.n; ++w) {
      out << "manAssignsScore(" << m + 1 << "," << w + 1 << "," << inst.man_score[m][w] << "). ";
    }
    out << "\n";
  }
  for (int w = 0; w < inst.n; ++w) {
    for (int m = 0; m < inst.n; ++m) {
      out << "womanAssignsScore(" << w + 1 << "," << m + 1 << "," << inst.woman_score[w][m] << "). ";
    }
    out << "\n";
  }
  out << "match(M,W) :- man(M), woman(W), not other(M,W).\n"
         "other(M,W) :- match(M,W1), woman(W), W != W1.\n"
         ":- match(M1,W), match(M2,W), M1 != M2.\n"
         "%@deferred\n"
         ":- match(M,W1), manAssignsScore(M,W,Smw), W1 != W, manAssignsScore(M,W1,Smw1), Smw > Smw1,"
         " match(M1,W), womanAssignsScore(W,M,Swm), womanAssignsScore(W,M1,Swm1), Swm >= Swm1.\n";
  return out.str();
}

Program gen_marriage(int n, int k, std::uint64_t seed) {
  return parse_program(marriage_program(make_marriage(n, k, seed)));
}

int clause_count(int vars, double ratio) {
  return static_cast<int>(std::llround(ratio * vars));
}

SatInstance make_3sat(int vars, double ratio, std::uint64_t seed) {
  if (vars < 3) throw std::invalid_argument("3sat: at least 3 variables");
  SatInstance inst{vars, ratio, seed, {}};
  std::mt19937_64 rng(seed);
  int m = clause_count(vars, ratio);
  for (int c = 0; c < m; ++c) {
    auto picked = choose(rng, vars, 3);
    std::array<int, 3> clause{};
    for (int i = 0; i < 3; ++i) {
      int v = picked[i] + 1;
      clause[i] = uniform_below(rng, 2) ? v : -v;
    }
    inst.clauses.push_back(clause);
  }
  return inst;
}

std::string sat_program(const SatInstance& inst) {
  std::ostringstream out;
  out << "%@meta family=3sat vars=" << inst.vars << " ratio=" << inst.ratio
      << " seed=" << inst.seed << "\n";
  for (int v = 1; v <= inst.vars; ++v) out << "var(" << v << "). ";
  out << "\n";
  for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
    for (int slot = 0; slot < 3; ++slot) {
      int l = inst.clauses[c][slot];
      out << "clause(" << c + 1 << "," << slot + 1 << "," << std::abs(l) << "," << (l > 0 ? 1 : 0)
          << "). ";
    }
    out << "\n";
  }
  out << "t(V) :- var(V), not f(V).\n"
         "f(V) :- var(V), not t(V).\n"
         "fls(V,1) :- f(V).\n"
         "fls(V,0) :- t(V).\n"
         "%@deferred\n"
         ":- clause(C,1,V1,S1), fls(V1,S1), clause(C,2,V2,S2), fls(V2,S2),"
         " clause(C,3,V3,S3), fls(V3,S3).\n";
  return out.str();
}

Program gen_3sat(int vars, double ratio, std::uint64_t seed) {
  return parse_program(sat_program(make_3sat(vars, ratio, seed)));
}

std::string packing_program(const PackingInstance& inst) {
  if (inst.width < 1 || inst.height < 1) throw std::invalid_argument("packing: empty rectangle");
  std::ostringstream out;
  out << "%@meta family=packing width=" << inst.width << " height=" << inst.height
      << " squares=" << inst.sizes.size() << "\n";
  out << "width(" << inst.width << "). height(" << inst.height << ").\n";
  for (int x = 0; x < inst.width; ++x) out << "xcoord(" << x << "). ";
  out << "\n";
  for (int y = 0; y < inst.height; ++y) out << "ycoord(" << y << "). ";
  out << "\n";
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) {
    if (inst.sizes[i] < 1) throw std::invalid_argument("packing: sizes must be positive");
    out << "square(" << i + 1 << "," << inst.sizes[i] << "). ";
  }
  out << "\n";
  out << "cand(I,X,Y) :- square(I,D), xcoord(X), ycoord(Y), width(W), height(H), X + D <= W, Y + D <= H.\n"
         "pos(I,X,Y) :- cand(I,X,Y), not npos(I,X,Y).\n"
         "npos(I,X,Y) :- cand(I,X,Y), not pos(I,X,Y).\n"
         "placed(I) :- pos(I,X,Y).\n"
         ":- square(I,D), not placed(I).\n"
         "%@deferred\n"
         ":- pos(I,X,Y), pos(I,X1,Y1), X1 != X.\n"
         "%@deferred\n"
         ":- pos(I,X,Y), pos(I,X1,Y1), Y1 != Y.\n"
         "%@deferred\n"
         ":- pos(I1,X1,Y1), square(I1,D1), pos(I2,X2,Y2), square(I2,D2), I1 != I2,"
         " W1 = X1+D1, H1 = Y1+D1, X2 >= X1, X2 < W1, Y2 >= Y1, Y2 < H1.\n"
         "%@deferred\n"
         ":- pos(I1,X1,Y1), square(I1,D1), pos(I2,X2,Y2), square(I2,D2), I1 != I2,"
         " W1 = X1+D1, H2 = Y2+D2, X2 >= X1, X2 < W1, Y1 >= Y2, Y1 < H2.\n";
  return out.str();
}

Program gen_packing(int width, int height, const std::vector<int>& sizes) {
  return parse_program(packing_program(PackingInstance{width, height, sizes}));
}

}  // namespace microasp
