#include "tropreg/closure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tropreg {

namespace {

using Grid = std::vector<std::vector<ExtReal>>;

// A circuit of positive weight, found as a negative cycle of the negated
// weights (Bellman-Ford from a virtual source).
std::optional<std::vector<size_t>> positive_circuit(const Grid& c) {
  const size_t n = c.size();
  for (size_t i = 0; i < n; ++i)
    if (c[i][i].is_finite() && c[i][i].value() > 0.0) return std::vector<size_t>{i};
  std::vector<double> dist(n, 0.0);
  std::vector<size_t> pred(n, n);
  size_t touched = n;
  for (size_t round = 0; round < n; ++round) {
    touched = n;
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        if (!c[a][b].is_finite()) continue;
        double w = -c[a][b].value();
        if (dist[a] + w < dist[b]) {
          dist[b] = dist[a] + w;
          pred[b] = a;
          touched = b;
        }
      }
    if (touched == n) return std::nullopt;
  }
  size_t v = touched;
  for (size_t i = 0; i < n; ++i) v = pred[v];
  std::vector<size_t> cyc{v};
  for (size_t u = pred[v]; u != v; u = pred[u]) cyc.push_back(u);
  std::reverse(cyc.begin(), cyc.end());
  return cyc;
}

bool close_to(ExtReal a, ExtReal b, double tol) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value()) <= tol;
  return a == b;
}

ExtReal neg(ExtReal a) { return ExtReal(-a.value()); }

}  // namespace

ClosureResult kleene_plus(const Kernel& c, const Window& window) {
  ClosureResult r;
  r.window = c.index_set().clip(window);
  const auto n = static_cast<size_t>(r.window.size());
  Grid d(n, std::vector<ExtReal>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      d[i][j] = c(r.window.lo + static_cast<Index>(i), r.window.lo + static_cast<Index>(j));
  if (auto cyc = positive_circuit(d)) {
    r.positive_circuit = true;
    double w = 0.0;
    for (size_t i = 0; i < cyc->size(); ++i) {
      w += d[(*cyc)[i]][(*cyc)[(i + 1) % cyc->size()]].value();
      r.circuit.push_back(r.window.lo + static_cast<Index>((*cyc)[i]));
    }
    r.circuit_weight = w;
  }
  for (size_t m = 0; m < n; ++m) {
    for (size_t i = 0; i < n; ++i) {
      if (d[i][m].is_bottom()) continue;
      for (size_t j = 0; j < n; ++j) {
        ExtReal cand = d[i][m] + d[m][j];
        if (cand > d[i][j]) d[i][j] = cand;
      }
    }
    ++r.iterations;
  }
  if (r.positive_circuit) {
    // anything that can pass through a vertex of a positive circuit is unbounded
    std::vector<size_t> hot;
    for (size_t m = 0; m < n; ++m)
      if (d[m][m] > ExtReal(0.0)) hot.push_back(m);
    Grid e = d;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        for (size_t m : hot)
          if (!d[i][m].is_bottom() && !d[m][j].is_bottom()) e[i][j] = ExtReal::top();
    d = std::move(e);
  }
  r.plus = std::move(d);
  return r;
}

Kernel btilde(const Kernel& k, const Bijection& F, const Window& window) {
  Window w = k.index_set().clip(window);
  const Index n = w.size();
  std::vector<ExtReal> e;
  e.reserve(static_cast<size_t>(n * n));
  for (Index x = w.lo; x <= w.hi; ++x)
    for (Index y = w.lo; y <= w.hi; ++y) {
      ExtReal own = k(y, F(y));
      if (!own.is_finite()) throw std::invalid_argument("F uses a -inf entry of the kernel");
      e.push_back(k(x, F(y)) - own.value());
    }
  return Kernel::dense(n, std::move(e));
}

Potentials potentials(const Kernel& bt, const ClosureResult& cl, bool countable, double tol) {
  Potentials p;
  p.window = cl.window;
  p.window_relative = countable;
  const auto n = cl.plus.size();
  p.phi.assign(n, ExtReal::bottom());
  p.psi.assign(n, ExtReal::bottom());
  ExtReal top_all = ExtReal::bottom();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      p.phi[i] = oplus(p.phi[i], cl.plus[i][j]);
      p.psi[j] = oplus(p.psi[j], cl.plus[i][j]);
      top_all = oplus(top_all, cl.plus[i][j]);
    }
  auto finite = [](const std::vector<ExtReal>& v) {
    return std::all_of(v.begin(), v.end(), [](ExtReal a) { return a.is_finite(); });
  };
  p.phi_finite = finite(p.phi);
  p.psi_finite = finite(p.psi);
  p.nonnegative = std::all_of(p.phi.begin(), p.phi.end(), [](ExtReal a) { return a >= ExtReal(0.0); }) &&
                  std::all_of(p.psi.begin(), p.psi.end(), [](ExtReal a) { return a >= ExtReal(0.0); });
  if (cl.positive_circuit || !p.phi_finite || !p.psi_finite) {
    p.notes.push_back("closure is unbounded; fixed-point identities skipped");
    return p;
  }
  auto b = [&](size_t i, size_t j) { return bt(static_cast<Index>(i), static_cast<Index>(j)); };
  auto plus = [&](size_t i, size_t j) { return cl.plus[i][j]; };
  // x -> sup_y (w(x, y) + s * v_y) compared against s * v_x
  auto row_fixed = [&](auto&& w, const std::vector<ExtReal>& v, double s) {
    for (size_t i = 0; i < n; ++i) {
      ExtReal best = ExtReal::bottom();
      for (size_t j = 0; j < n; ++j) best = oplus(best, w(i, j) + (s > 0 ? v[j] : neg(v[j])));
      if (!close_to(best, s > 0 ? v[i] : neg(v[i]), tol)) return false;
    }
    return true;
  };
  auto col_fixed = [&](auto&& w, const std::vector<ExtReal>& v, double s) {
    for (size_t j = 0; j < n; ++j) {
      ExtReal best = ExtReal::bottom();
      for (size_t i = 0; i < n; ++i) best = oplus(best, w(i, j) + (s > 0 ? v[i] : neg(v[i])));
      if (!close_to(best, s > 0 ? v[j] : neg(v[j]), tol)) return false;
    }
    return true;
  };
  p.phi_row_fixed = row_fixed(b, p.phi, 1);
  p.psi_col_fixed = col_fixed(b, p.psi, 1);
  p.neg_psi_row_fixed = row_fixed(b, p.psi, -1);
  p.neg_phi_col_fixed = col_fixed(b, p.phi, -1);
  p.phi_closure_fixed = row_fixed(plus, p.phi, 1);
  p.neg_psi_closure_fixed = row_fixed(plus, p.psi, -1);
  ExtReal sphi = *std::max_element(p.phi.begin(), p.phi.end());
  ExtReal spsi = *std::max_element(p.psi.begin(), p.psi.end());
  p.sup_identity = close_to(sphi, spsi, tol) && close_to(sphi, top_all, tol);

  if (!countable) {
    p.far_nonpositive = true;
    p.pc = true;
    return p;
  }
  // Window proxies: the outer quarter on each side stands in for "far away".
  size_t band = std::max<size_t>(1, n / 4);
  auto outer = [&](size_t i) { return i < band || i + band >= n; };
  p.far_nonpositive = true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (outer(i) && outer(j) && cl.plus[i][j] > ExtReal(tol)) p.far_nonpositive = false;
  auto vanishes_outside = [&](const std::vector<ExtReal>& v) {
    for (size_t i = 0; i < n; ++i)
      if (outer(i) && !close_to(v[i], 0.0, tol)) return false;
    return true;
  };
  p.pc = vanishes_outside(p.phi) || vanishes_outside(p.psi);
  p.notes.push_back("limsup and space conditions checked on the outer band of the window");
  if (!p.pc)
    p.notes.push_back(
        "potentials are bounded but not shown to vanish at infinity: bounded potentials are necessary, "
        "membership in l01 is what the sufficient direction asks for, and this kernel sits between them");
  return p;
}

Eq110Report check_eq_1_10(const Kernel& k, const Bijection& F, const Func& f, const Window& window, double tol) {
  Window w = k.index_set().clip(window);
  for (Index x = w.lo; x <= w.hi; ++x)
    if (!w.contains(F(x))) throw std::invalid_argument("F must map the window onto itself");
  Bijection Finv = F.inverse();
  Eq110Report r;
  r.fixed_point = r.conjugate_form = true;
  for (Index x = w.lo; x <= w.hi; ++x) {
    ExtReal a = ExtReal::bottom(), b = ExtReal::bottom();
    for (Index y = w.lo; y <= w.hi; ++y) {
      ExtReal own = k(y, F(y));
      if (!own.is_finite()) throw std::invalid_argument("F uses a -inf entry of the kernel");
      a = oplus(a, k(x, F(y)) - own.value() + f(y));
      double psi = k(Finv(y), y).value() - f(Finv(y));
      b = oplus(b, k(x, y) - psi);
    }
    bool fa = close_to(a, f(x), tol), fb = close_to(b, f(x), tol);
    if (!fa && !r.witness) r.witness = x;
    r.fixed_point = r.fixed_point && fa;
    r.conjugate_form = r.conjugate_form && fb;
  }
  r.equivalent = r.fixed_point == r.conjugate_form;
  return r;
}

}  // namespace tropreg
