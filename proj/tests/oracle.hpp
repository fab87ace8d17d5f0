#pragma once

// Reference implementations used by the tests. They work on plain doubles
// with -inf for missing entries and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;
inline constexpr double NEG = -std::numeric_limits<double>::infinity();

inline Vec apply_B(const Mat& b, const Vec& f) {
  Vec out(b.size(), NEG);
  for (size_t x = 0; x < b.size(); ++x)
    for (size_t y = 0; y < f.size(); ++y)
      if (b[x][y] != NEG) out[x] = std::max(out[x], b[x][y] - f[y]);
  return out;
}

inline Vec apply_BT(const Mat& b, const Vec& g) {
  Vec out(b.size(), NEG);
  for (size_t y = 0; y < b.size(); ++y)
    for (size_t x = 0; x < g.size(); ++x)
      if (b[x][y] != NEG) out[y] = std::max(out[y], b[x][y] - g[x]);
  return out;
}

/// All permutations reaching the maximum of sum_x b[x][p[x]].
struct Best {
  double value = NEG;
  std::vector<std::vector<int64_t>> perms;
};

inline Best best_perms(const Mat& b) {
  std::vector<int64_t> p(b.size());
  std::iota(p.begin(), p.end(), 0);
  Best r;
  do {
    double s = 0.0;
    for (size_t x = 0; x < p.size() && s != NEG; ++x)
      s = b[x][static_cast<size_t>(p[x])] == NEG ? NEG : s + b[x][static_cast<size_t>(p[x])];
    if (s == NEG) continue;
    if (s > r.value) {
      r.value = s;
      r.perms = {p};
    } else if (s == r.value) {
      r.perms.push_back(p);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return r;
}

/// Max over all paths (any length >= 1, elementary interior) of summed weights;
/// +inf when some circuit has positive weight. Exhaustive DFS, small n only.
inline Mat path_closure(const Mat& c, bool& positive_circuit) {
  const size_t n = c.size();
  Mat best(n, Vec(n, NEG));
  positive_circuit = false;
  std::vector<char> on(n, 0);
  // DFS over elementary paths from s; closing back to s gives circuits.
  for (size_t s = 0; s < n; ++s) {
    std::vector<std::pair<size_t, double>> stack;
    auto dfs = [&](auto&& self, size_t u, double w) -> void {
      on[u] = 1;
      for (size_t v = 0; v < n; ++v) {
        if (c[u][v] == NEG) continue;
        double nw = w + c[u][v];
        if (v == s) {
          if (nw > 0) positive_circuit = true;
          best[s][s] = std::max(best[s][s], nw);
          continue;
        }
        if (on[v]) continue;
        best[s][v] = std::max(best[s][v], nw);
        self(self, v, nw);
      }
      on[u] = 0;
    };
    dfs(dfs, s, 0.0);
  }
  return best;
}

/// Multiple of 2^-6 in [lo, hi]: sums stay exact in double arithmetic.
inline double dyadic(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_int_distribution<int64_t> d(static_cast<int64_t>(lo * 64), static_cast<int64_t>(hi * 64));
  return static_cast<double>(d(rng)) / 64.0;
}

inline Mat random_matrix(std::mt19937_64& rng, size_t n, double lo, double hi, double p_neg_inf) {
  std::bernoulli_distribution hole(p_neg_inf);
  Mat m(n, Vec(n));
  for (auto& row : m)
    for (auto& e : row) e = hole(rng) ? NEG : dyadic(rng, lo, hi);
  return m;
}

}  // namespace oracle
