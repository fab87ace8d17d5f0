#include "tropreg/assignment.hpp"

#include <algorithm>
#include <numeric>

namespace tropreg {

Matrix to_matrix(const Kernel& k) {
  if (!k.index_set().is_finite()) throw std::invalid_argument("assignment needs a finite kernel");
  return k.rows();
}

ExtReal perm_value(const Matrix& w, const Perm& p) {
  ExtReal s = 0.0;
  for (size_t x = 0; x < p.size(); ++x) s = s + w[x][static_cast<size_t>(p[x])];
  return s;
}

AssignmentResult max_weight_assignment(const Matrix& w) {
  // Shortest augmenting paths on costs a = -w, rows and columns 1-based,
  // column 0 is the virtual root. Forbidden edges carry +inf reduced cost.
  const size_t n = w.size();
  for (auto& row : w)
    if (row.size() != n) throw std::invalid_argument("assignment matrix is not square");
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      size_t i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        ExtReal b = w[i0 - 1][j - 1];
        double cur = b.is_bottom() ? kInf : -b.value() - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (delta == kInf) throw Infeasible("no permutation avoids the -inf entries");
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  AssignmentResult r;
  r.perm.assign(n, 0);
  for (size_t j = 1; j <= n; ++j) r.perm[p[j] - 1] = static_cast<Index>(j - 1);
  r.phi.resize(n);
  r.psi.resize(n);
  for (size_t i = 0; i < n; ++i) {
    r.phi[i] = -u[i + 1];
    r.psi[i] = -v[i + 1];
  }
  r.value = perm_value(w, r.perm);
  return r;
}

UniquenessResult is_unique_optimal(const Matrix& w) {
  AssignmentResult best = max_weight_assignment(w);
  UniquenessResult out{true, best.perm, best.value, std::nullopt};
  ExtReal runner = ExtReal::bottom();
  for (size_t x = 0; x < w.size(); ++x) {
    Matrix m = w;
    m[x][static_cast<size_t>(best.perm[x])] = ExtReal::bottom();
    try {
      AssignmentResult alt = max_weight_assignment(m);
      if (!out.second || alt.value > runner) {
        runner = alt.value;
        out.second = alt.perm;
      }
    } catch (const Infeasible&) {
    }
  }
  out.unique = !out.second || runner < best.value;
  return out;
}

UniquenessResult is_unique_optimal(const Kernel& k) { return is_unique_optimal(to_matrix(k)); }

AssignmentResult solve_assignment(const Kernel& k) {
  Matrix w = to_matrix(k);
  AssignmentResult r = max_weight_assignment(w);
  UniquenessResult u = is_unique_optimal(w);
  r.unique = u.unique;
  r.second = u.second;
  if (u.second) r.gap = ExtReal(r.value.value() - perm_value(w, *u.second).value());
  if (u.second && perm_value(w, *u.second).is_bottom()) r.gap = ExtReal::top();
  return r;
}

BruteForceResult brute_force_assignment(const Matrix& w) {
  const size_t n = w.size();
  if (n > 9) throw std::invalid_argument("brute force assignment is limited to n <= 9");
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  BruteForceResult r{{}, ExtReal::bottom()};
  do {
    ExtReal v = perm_value(w, p);
    if (v.is_bottom()) continue;
    if (r.optimal.empty() || v > r.value) {
      r.value = v;
      r.optimal.assign(1, p);
    } else if (v == r.value) {
      r.optimal.push_back(p);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return r;
}

BruteForceResult brute_force_assignment(const Kernel& k) { return brute_force_assignment(to_matrix(k)); }

namespace {

// Lightest elementary cycle of a dense digraph (+inf marks a missing edge).
// Returns the cycle vertices and its weight; empty when the graph is acyclic.
std::pair<std::vector<size_t>, double> lightest_cycle(const std::vector<std::vector<double>>& w) {
  const size_t n = w.size();
  // Bellman-Ford from a virtual source attached to every vertex.
  std::vector<double> dist(n, 0.0);
  std::vector<size_t> pred(n, n);
  size_t touched = n;
  for (size_t round = 0; round < n; ++round) {
    touched = n;
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        if (w[a][b] < kInf && dist[a] + w[a][b] < dist[b]) {
          dist[b] = dist[a] + w[a][b];
          pred[b] = a;
          touched = b;
        }
    if (touched == n) break;
  }
  if (touched != n) {
    size_t v = touched;
    for (size_t i = 0; i < n; ++i) v = pred[v];
    std::vector<size_t> cyc{v};
    for (size_t u = pred[v]; u != v; u = pred[u]) cyc.push_back(u);
    std::reverse(cyc.begin(), cyc.end());
    double total = 0.0;
    for (size_t i = 0; i < cyc.size(); ++i) total += w[cyc[i]][cyc[(i + 1) % cyc.size()]];
    return {cyc, total};
  }
  // No negative cycle: the lightest closed walk is an elementary cycle.
  std::vector<std::vector<double>> d = w;
  std::vector<std::vector<size_t>> nxt(n, std::vector<size_t>(n, n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (w[a][b] < kInf) nxt[a][b] = b;
  for (size_t m = 0; m < n; ++m)
    for (size_t a = 0; a < n; ++a) {
      if (d[a][m] == kInf) continue;
      for (size_t b = 0; b < n; ++b)
        if (d[m][b] < kInf && d[a][m] + d[m][b] < d[a][b]) {
          d[a][b] = d[a][m] + d[m][b];
          nxt[a][b] = nxt[a][m];
        }
    }
  size_t s = n;
  for (size_t a = 0; a < n; ++a)
    if (d[a][a] < kInf && (s == n || d[a][a] < d[s][s])) s = a;
  if (s == n) return {{}, kInf};
  std::vector<size_t> walk{s};
  for (size_t u = nxt[s][s]; u != s && walk.size() <= n; u = nxt[u][s]) walk.push_back(u);
  // keep the first elementary loop of the walk
  std::vector<size_t> seen(n, n);
  std::vector<size_t> cyc;
  walk.push_back(s);
  for (size_t i = 0; i < walk.size(); ++i) {
    if (seen[walk[i]] != n) {
      cyc.assign(walk.begin() + static_cast<std::ptrdiff_t>(seen[walk[i]]),
                 walk.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
    seen[walk[i]] = i;
  }
  double total = 0.0;
  for (size_t i = 0; i < cyc.size(); ++i) total += w[cyc[i]][cyc[(i + 1) % cyc.size()]];
  return {cyc, total};
}

}  // namespace

LocalSolutionReport verify_local_strong_solution(const Kernel& k, const Bijection& F, Index M,
                                                 const Window& window, SolutionMode /*mode*/) {
  if (M < 1) throw std::invalid_argument("distance bound M must be >= 1");
  const IndexSet& set = k.index_set();
  Window w = set.clip(window);
  Bijection Finv = F.inverse();
  std::vector<Index> cols;
  for (Index x = w.lo; x <= w.hi; ++x) cols.push_back(F(x));
  std::sort(cols.begin(), cols.end());
  const size_t n = cols.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, kInf));
  for (size_t i = 0; i < n; ++i) {
    Index x = Finv(cols[i]);
    ExtReal own = k(x, cols[i]);
    if (!own.is_finite()) throw std::invalid_argument("F uses a -inf entry of the kernel");
    for (size_t j = 0; j < n; ++j) {
      if (i == j || IndexSet::distance(cols[i], cols[j]) > M) continue;
      ExtReal alt = k(x, cols[j]);
      if (alt.is_bottom()) continue;
      g[i][j] = own.value() - alt.value();
    }
  }
  LocalSolutionReport r;
  r.tested_columns = static_cast<Index>(n);
  auto [cyc, weight] = lightest_cycle(g);
  if (cyc.empty()) {
    r.verified = true;
    return r;
  }
  r.margin = weight;
  r.verified = weight > 0.0;
  if (!r.verified) {
    // G = pi o F where pi follows the cycle on columns
    Window hull = F.support();
    std::vector<std::pair<Index, Index>> moved;
    for (size_t i = 0; i < cyc.size(); ++i) {
      Index x = Finv(cols[cyc[i]]);
      moved.emplace_back(x, cols[cyc[(i + 1) % cyc.size()]]);
      hull = hull.hull({x, x});
    }
    std::vector<Index> img;
    for (Index x = hull.lo; x <= hull.hi; ++x) img.push_back(F(x));
    for (auto [x, y] : moved) img[static_cast<size_t>(x - hull.lo)] = y;
    r.violating = Bijection(hull, std::move(img)).canonical();
  }
  return r;
}

}  // namespace tropreg
