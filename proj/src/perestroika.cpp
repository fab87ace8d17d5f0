#include "tropreg/perestroika.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "tropreg/assignment.hpp"

namespace tropreg {

std::string peel_mode_name(PeelMode m) { return m == PeelMode::Final ? "P_F" : "P_I"; }

std::string finding_name(FindingKind k) {
  switch (k) {
    case FindingKind::Circuit: return "circuit";
    case FindingKind::String: return "string";
    case FindingKind::Unresolved: return "unresolved";
    case FindingKind::RoundLimit: return "round-limit";
  }
  return "?";
}

namespace {

// Longest path length leaving each node (nullopt when it can run into a
// circuit or a ghost, whose continuation is unknown).
std::map<Index, std::optional<Index>> longest(const SatGraph& g, const std::map<Index, std::vector<Index>>& adj,
                                              const std::vector<Index>& nodes) {
  std::map<Index, std::optional<Index>> memo;
  std::map<Index, int> state;
  std::function<std::optional<Index>(Index)> go = [&](Index x) -> std::optional<Index> {
    if (g.is_ghost(x)) return std::nullopt;
    if (state[x] == 2) return memo[x];
    if (state[x] == 1) return std::nullopt;  // back edge: circuit
    state[x] = 1;
    std::optional<Index> best = 0;
    if (auto it = adj.find(x); it != adj.end())
      for (Index y : it->second) {
        auto r = go(y);
        if (!r) {
          best = std::nullopt;
        } else if (best) {
          best = std::max(*best, *r + 1);
        }
      }
    state[x] = 2;
    return memo[x] = best;
  };
  for (Index x : nodes) go(x);
  return memo;
}

// sup_{y != x} w(x, y) + f(y), exact within `reach` and bounded beyond it.
double off_sup(const Kernel& k, const Func& f, Index x, Index reach, double f_sup, bool transposed) {
  const IndexSet& set = k.index_set();
  ExtReal best = ExtReal::bottom();
  for (Index y = x - reach; y <= x + reach; ++y) {
    if (y == x || !set.contains(y)) continue;
    ExtReal w = transposed ? k(y, x) : k(x, y);
    best = oplus(best, w + f(y));
  }
  ExtReal far = k.envelope(reach + 1);
  if (!far.is_bottom()) best = oplus(best, far + f_sup);
  return best.value();
}

double sup_with_zero(const Func& f) {
  double s = 0.0;
  for (double v : f.values()) s = std::max(s, v);
  return s;
}

double inf_with_zero(const Func& f) {
  double s = 0.0;
  for (double v : f.values()) s = std::min(s, v);
  return s;
}

}  // namespace

std::vector<Index> SatGraph::final_level(Index n) const {
  std::vector<Index> r;
  for (Index x : vertices) {
    auto v = lp_at(x);
    if ((n < 0 && !v) || (v && *v == n)) r.push_back(x);
  }
  return r;
}

std::vector<Index> SatGraph::initial_level(Index n) const {
  std::vector<Index> r;
  for (Index x : vertices) {
    auto v = ep_at(x);
    if ((n < 0 && !v) || (v && *v == n)) r.push_back(x);
  }
  return r;
}

Index saturation_reach(const Kernel& k, double spread, Index cap) {
  for (Index m = 0; m < cap; ++m) {
    ExtReal e = k.envelope(m + 1);
    if (e.is_bottom() || e.value() + spread < 0.0) return m;
  }
  return cap;
}

SatGraph build_sat_graph(const Kernel& k, const Func& phi, const Window& window, double spread) {
  const IndexSet& set = k.index_set();
  SatGraph g;
  g.window = set.clip(window);
  const Window& w = g.window;
  g.reach = saturation_reach(k, spread, std::max<Index>(w.size(), 1));
  std::set<Index> ghosts, verts;
  auto test = [&](Index x, Index y) {
    ExtReal lhs = k(x, y) + phi(y);
    if (lhs > ExtReal(phi(x)))
      throw SaturationViolation(x, y, "b_xy + phi_y exceeds phi_x at (" + std::to_string(x) + ", " +
                                          std::to_string(y) + ")");
    if (lhs == ExtReal(phi(x))) {
      g.edges.emplace_back(x, y);
      g.out[x].push_back(y);
      g.in[y].push_back(x);
      for (Index z : {x, y}) (w.contains(z) ? verts : ghosts).insert(z);
    }
  };
  // rows inside the window, then rows of nearby outside points into the window
  for (Index x = w.lo; x <= w.hi; ++x)
    for (Index y = x - g.reach; y <= x + g.reach; ++y)
      if (y != x && set.contains(y)) test(x, y);
  for (Index z : {w.lo - g.reach, w.hi + 1}) {
    for (Index x = z; x < z + g.reach; ++x) {
      if (w.contains(x) || !set.contains(x)) continue;
      for (Index y = std::max(w.lo, x - g.reach); y <= std::min(w.hi, x + g.reach); ++y) test(x, y);
    }
  }
  g.vertices.assign(verts.begin(), verts.end());
  g.ghosts.assign(ghosts.begin(), ghosts.end());
  auto lp = longest(g, g.out, g.vertices);
  auto ep = longest(g, g.in, g.vertices);
  const auto n = static_cast<size_t>(w.size());
  g.lp.assign(n, Index{0});
  g.ep.assign(n, Index{0});
  for (Index x : g.vertices) {
    g.lp[static_cast<size_t>(x - w.lo)] = lp[x];
    g.ep[static_cast<size_t>(x - w.lo)] = ep[x];
    if (!g.in.count(x)) g.initial.push_back(x);
    if (!g.out.count(x)) g.final_points.push_back(x);
  }
  return g;
}

StructuralReport structural_checks(const SatGraph& g) {
  StructuralReport r;
  r.window_relative = !g.ghosts.empty();
  // circuits, by depth-first search over every node including ghosts
  std::map<Index, int> state;
  std::vector<Index> stack;
  std::function<bool(Index)> dfs = [&](Index x) -> bool {
    state[x] = 1;
    stack.push_back(x);
    if (auto it = g.out.find(x); it != g.out.end())
      for (Index y : it->second) {
        if (state[y] == 1) {
          auto from = std::find(stack.begin(), stack.end(), y);
          r.circuit = std::vector<Index>(from, stack.end());
          return true;
        }
        if (state[y] == 0 && dfs(y)) return true;
      }
    stack.pop_back();
    state[x] = 2;
    return false;
  };
  for (auto& [x, _] : g.out)
    if (state[x] == 0 && dfs(x)) break;

  // a saturated path from a ghost on one side to a ghost on the other
  auto bfs = [&](auto&& is_source, auto&& is_target) -> std::optional<std::vector<Index>> {
    std::map<Index, Index> parent;
    std::deque<Index> q;
    for (Index x : g.ghosts)
      if (is_source(x)) {
        parent[x] = x;
        q.push_back(x);
      }
    while (!q.empty()) {
      Index x = q.front();
      q.pop_front();
      if (is_target(x) && parent[x] != x) {
        std::vector<Index> path{x};
        while (parent[path.back()] != path.back()) path.push_back(parent[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (g.is_ghost(x) && parent[x] != x) continue;  // ghosts only start or end a path
      if (auto it = g.out.find(x); it != g.out.end())
        for (Index y : it->second)
          if (!parent.count(y)) {
            parent[y] = x;
            q.push_back(y);
          }
    }
    return std::nullopt;
  };
  auto left = [&](Index x) { return x < g.window.lo; };
  auto right = [&](Index x) { return x > g.window.hi; };
  r.string_path = bfs(left, right);
  if (!r.string_path) r.string_path = bfs(right, left);

  r.degree_bound = 2 * g.reach;
  for (Index x : g.vertices) {
    auto deg = [&](const std::map<Index, std::vector<Index>>& m) {
      auto it = m.find(x);
      return it == m.end() ? Index{0} : static_cast<Index>(it->second.size());
    };
    r.max_degree = std::max({r.max_degree, deg(g.out), deg(g.in)});
    if (!g.lp_at(x) && !g.ep_at(x)) r.lp_or_ep_finite = false;
  }
  r.degrees_ok = r.max_degree <= r.degree_bound;
  r.end_points_exist = g.vertices.empty() || !g.initial.empty() || !g.final_points.empty();
  return r;
}

PerestroikaState peel_step(const PerestroikaState& s, const Kernel& k, PeelMode mode, const Window& window) {
  SatGraph g = build_sat_graph(k, s.phi, window, s.spread);
  const auto& pts = mode == PeelMode::Final ? g.final_points : g.initial;
  PerestroikaState next = s;
  if (pts.empty()) return next;
  const Window& w = g.window;
  std::vector<double> vals;
  for (Index x = w.lo; x <= w.hi; ++x) vals.push_back(s.phi(x));
  PeelRecord rec;
  rec.round = static_cast<Index>(s.history.size()) + 1;
  rec.mode = mode;
  const double fsup = sup_with_zero(s.phi), finf = inf_with_zero(s.phi);
  for (Index x : pts) {
    double px = s.phi(x), step;
    if (mode == PeelMode::Final) {
      // φ'_x = φ_x − min(ψ_x, (φ_x − A(−φ)_x) / 2)
      double gap = px - off_sup(k, s.phi, x, g.reach, fsup, false);
      if (!(gap > 0.0)) throw std::logic_error("final point without slack at " + std::to_string(x));
      step = -std::min(s.budget(x), gap / 2.0);
    } else {
      // mirror image on the transposed kernel with −φ
      double gap = -px - off_sup(k, -s.phi, x, g.reach, -finf, true);
      if (!(gap > 0.0)) throw std::logic_error("initial point without slack at " + std::to_string(x));
      step = std::min(s.budget(x), gap / 2.0);
    }
    double nx = px + step;
    if (nx == px) throw std::logic_error("budget below floating-point resolution at " + std::to_string(x));
    vals[static_cast<size_t>(x - w.lo)] = nx;
    rec.removed.push_back(x);
    rec.deltas.push_back(nx - px);
  }
  next.phi = Func(w, std::move(vals));
  next.history.push_back(std::move(rec));
  return next;
}

Func default_budget(const Window& window, double eps) {
  const Index centre = window.lo + (window.hi - window.lo) / 2;
  std::vector<double> v;
  for (Index x = window.lo; x <= window.hi; ++x)
    v.push_back(std::ldexp(eps, -static_cast<int>(std::min<Index>(IndexSet::distance(x, centre), 1000))));
  // outside the window the budget is never used, but it stays positive and summable
  return Func(window, std::move(v), FuncTail::power_decay(std::ldexp(eps, -40), 2.0));
}

Similarity PerestroikaResult::similarity() const {
  return Similarity::right(Bijection::identity(), phi, -phi, Space::L1);
}

namespace {

struct Attempt {
  PerestroikaState state;
  SatGraph initial_graph, final_graph;
  std::optional<Finding> finding;
  Index rounds = 0;
};

Attempt peel(const Kernel& k, const Func& budget, const Window& work, double spread, Index max_rounds) {
  Attempt a;
  std::vector<double> zeros(static_cast<size_t>(work.size()), 0.0);
  a.state.phi = a.state.phi0 = Func(work, zeros);
  a.state.budget = budget;
  a.state.spread = spread;
  a.initial_graph = build_sat_graph(k, a.state.phi, work, spread);
  StructuralReport sc = structural_checks(a.initial_graph);
  if (sc.circuit) {
    a.finding = Finding{FindingKind::Circuit, *sc.circuit,
                        "the identity is not a strong local solution: this circuit is an exchange of zero weight"};
    a.final_graph = a.initial_graph;
    return a;
  }
  for (PeelMode mode : {PeelMode::Final, PeelMode::Initial}) {
    while (true) {
      if (a.rounds >= max_rounds) {
        a.finding = Finding{FindingKind::RoundLimit, {}, "round limit reached; enlarge the window or the limit"};
        a.final_graph = build_sat_graph(k, a.state.phi, work, spread);
        return a;
      }
      auto before = a.state.history.size();
      a.state = peel_step(a.state, k, mode, work);
      if (a.state.history.size() == before) break;
      ++a.rounds;
    }
  }
  a.final_graph = build_sat_graph(k, a.state.phi, work, spread);
  return a;
}

std::vector<Index> residue_in(const SatGraph& g, const Window& w) {
  std::vector<Index> r;
  for (Index x : g.vertices)
    if (w.contains(x)) r.push_back(x);
  return r;
}

}  // namespace

PerestroikaResult run_perestroika(const Kernel& k, const std::optional<Func>& budget, const Window& window,
                                  const PerestroikaOptions& opt) {
  const IndexSet& set = k.index_set();
  PerestroikaResult res;
  res.window = set.clip(window);
  res.window_relative = !set.is_finite();
  NormalReport nr = is_normal(k, res.window);
  if (!nr.ok) throw std::invalid_argument("perestroika needs a normal kernel: " + nr.detail);
  res.budget = budget ? *budget : default_budget(res.window, opt.budget_eps);
  double bsup = 0.0;
  for (Index x = res.window.lo; x <= res.window.hi; ++x) {
    if (!(res.budget(x) > 0.0)) throw std::invalid_argument("budget must be positive");
    bsup = std::max(bsup, res.budget(x));
  }
  bsup = std::max(bsup, res.budget.sup_over(set));
  const double spread = 2.0 * bsup;
  Index reach = saturation_reach(k, spread, std::max<Index>(res.window.size(), 1));
  Index pad = opt.pad < 0 ? 2 * reach + 2 : opt.pad;

  Window work = set.clip(res.window.expanded(pad));
  Attempt a = peel(k, res.budget, work, spread, opt.max_rounds);
  auto residue = residue_in(a.final_graph, res.window);
  if (!a.finding && !residue.empty() && opt.retry && !set.is_finite()) {
    // strings are global objects: look again on a window twice as large
    work = set.clip(work.expanded((work.size() + 1) / 2));
    a = peel(k, res.budget, work, spread, opt.max_rounds);
    residue = residue_in(a.final_graph, res.window);
  }
  res.working = work;
  res.rounds = a.rounds;
  res.trace = a.state.history;
  res.phi = a.state.phi;
  if (a.finding) {
    res.finding = a.finding;
  } else if (!residue.empty()) {
    StructuralReport sc = structural_checks(a.final_graph);
    if (sc.string_path)
      res.finding = Finding{FindingKind::String, *sc.string_path,
                            "saturated path crosses the whole working window; a string rules out strong "
                            "regularity, though a larger window could still end it"};
    else
      res.finding = Finding{FindingKind::Unresolved, residue, "saturation left near the window; enlarge it"};
  }
  res.within_budget = true;
  for (Index x = work.lo; x <= work.hi; ++x)
    if (std::abs(res.phi(x) - a.state.phi0(x)) > res.budget(x)) res.within_budget = false;
  double margin = kInf;
  for (Index x = res.window.lo; x <= res.window.hi; ++x)
    for (Index y = res.window.lo; y <= res.window.hi; ++y) {
      if (x == y) continue;
      ExtReal e = k(x, y);
      if (e.is_bottom()) continue;
      margin = std::min(margin, res.phi(x) - e.value() - res.phi(y));
    }
  res.margin = margin;
  return res;
}

PipelineReport certify_strong_regularity(const Kernel& k, const Window& window, const PerestroikaOptions& opt) {
  const IndexSet& set = k.index_set();
  PipelineReport rep;
  Window w = set.clip(window);
  if (set.is_finite()) {
    try {
      rep.normalization = normalize_finite(k);
    } catch (const Infeasible&) {
      rep.notes.push_back("assignment problem is infeasible");
      rep.certificate = decide_strong_regularity(k, {}, w);
      return rep;
    }
    const Normalization& nz = *rep.normalization;
    rep.run = run_perestroika(nz.normal, std::nullopt, set.full_window(), opt);
    if (rep.run->ok()) {
      // g = φ + φ* separates b exactly when φ separates the normal form
      rep.candidates.push_back(rep.run->phi + Func::from_values(0, nz.phi_star));
    } else {
      rep.notes.push_back("perestroika: " + finding_name(rep.run->finding->kind));
    }
    rep.candidates.push_back(Func::zero());
    rep.candidates.push_back(Func::from_values(0, solve_assignment(k).phi));
  } else {
    if (!is_normal(k, w).ok) {
      rep.notes.push_back("countable kernels are peeled only in normal form; trying g = 0 alone");
    } else {
      rep.run = run_perestroika(k, std::nullopt, w, opt);
      if (rep.run->ok())
        rep.candidates.push_back(rep.run->phi);
      else
        rep.notes.push_back("perestroika: " + finding_name(rep.run->finding->kind));
    }
    rep.candidates.push_back(Func::zero());
  }
  rep.certificate = decide_strong_regularity(k, rep.candidates, w);
  return rep;
}

}  // namespace tropreg
