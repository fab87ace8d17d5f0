#include "tropreg/subdiff.hpp"

#include <algorithm>
#include <set>

#include "tropreg/core.hpp"

namespace tropreg {

std::string regularity_name(RegularityStatus s) {
  switch (s) {
    case RegularityStatus::Certified: return "certified";
    case RegularityStatus::Refuted: return "refuted";
    case RegularityStatus::NoWitnessFound: return "no_witness_found";
  }
  return "?";
}

std::string refutation_name(RefutationKind r) {
  switch (r) {
    case RefutationKind::None: return "none";
    case RefutationKind::SecondSolution: return "second_solution";
    case RefutationKind::SecondOptimalAssignment: return "second_optimal_assignment";
    case RefutationKind::NoFiniteAssignment: return "no_finite_assignment";
    case RefutationKind::MinusInfinityLine: return "minus_infinity_line";
    case RefutationKind::TailCounterExample: return "tail_counter_example";
  }
  return "?";
}

namespace {

// Membership of a candidate value c in the certified supremum v.
// Returns 1 (member), 0 (not), -1 (cannot tell).
int attains(const CertifiedValue& v, double c) {
  if (v.value.is_bottom()) return -1;
  double lo = v.value.value();
  if (v.exact()) return c == lo ? 1 : 0;
  if (c < lo || c > lo + v.eps) return 0;
  return -1;
}

void collect(SubdiffSet& out, int verdict, Index who) {
  if (verdict == 1) out.members.push_back(who);
  if (verdict < 0) out.certain = false;
}

}  // namespace

SubdiffSet subdiff(const Kernel& k, const Func& f, Index y, const Window& window) {
  CertifiedFunc bf = apply_B(k, f, window);
  SubdiffSet out;
  for (Index x = bf.window.lo; x <= bf.window.hi; ++x) {
    ExtReal e = k(x, y);
    if (e.is_bottom()) continue;
    collect(out, attains(bf.at(x), e.value() - f(y)), x);
  }
  return out;
}

SubdiffSet subdiffT(const Kernel& k, const Func& g, Index x, const Window& window) {
  CertifiedFunc f = apply_BT(k, g, window);
  SubdiffSet out;
  for (Index y = f.window.lo; y <= f.window.hi; ++y) {
    ExtReal e = k(x, y);
    if (e.is_bottom()) continue;
    collect(out, attains(f.at(y), e.value() - g(x)), y);
  }
  return out;
}

IdentityCheck inverse_subdiff_identity_check(const Kernel& k, const Func& g, const Window& window) {
  IdentityCheck r;
  EquationResult eq = solve_equation(k, g, window);
  if (eq.status == Verdict::False) {
    r.applicable = false;
    return r;
  }
  if (eq.status == Verdict::Inconclusive) return r;
  const CertifiedFunc& f = eq.candidate;
  Window w = k.index_set().clip(window);
  CertifiedFunc bf = apply_B(k, f, w);
  r.status = Verdict::True;
  for (Index y = w.lo; y <= w.hi && r.status == Verdict::True; ++y) {
    const CertifiedValue& fy = f.at(y);
    for (Index x = w.lo; x <= w.hi; ++x) {
      ExtReal e = k(x, y);
      if (e.is_bottom() || !fy.value.is_finite()) continue;
      int lhs = attains(fy, e.value() - g(x));
      int rhs = attains(bf.at(x), e.value() - fy.value.value());
      if (lhs < 0 || rhs < 0) {
        r.status = Verdict::Inconclusive;
      } else if (lhs != rhs) {
        r.status = Verdict::False;
        r.mismatch = y;
        break;
      }
    }
  }
  return r;
}

Covering build_covering(const Kernel& k, const Func& g, const Window& window, const ConjugacyOptions& opt) {
  const IndexSet& set = k.index_set();
  Covering c;
  c.g = g;
  c.window = set.clip(window);
  c.outer = search_range(set, c.window, opt);
  c.columns = search_range(set, c.outer, opt);
  c.f = apply_BT(k, g, c.columns, opt);
  for (Index x = c.outer.lo; x <= c.outer.hi; ++x) c.targets[x];
  for (Index y = c.columns.lo; y <= c.columns.hi; ++y) {
    const CertifiedValue& fy = c.f.at(y);
    auto& s = c.sets[y];
    if (!fy.exact()) {
      // membership unknown for anything the interval admits
      for (Index x = c.outer.lo; x <= c.outer.hi; ++x) {
        ExtReal e = k(x, y);
        if (!e.is_bottom() && attains(fy, e.value() - g(x)) != 0) c.certain = false;
      }
    }
    if (!fy.value.is_finite()) continue;
    for (Index x : fy.argmax)
      if (c.outer.contains(x) && fy.exact()) {
        s.push_back(x);
        c.targets[x].push_back(y);
      }
  }
  // Columns beyond the computed range can only join ∂ᵀg(x) if the far
  // entries can reach the lower bound of Bᵀg.
  if (!set.covers(c.columns)) {
    for (Index x = c.outer.lo; x <= c.outer.hi; ++x) {
      Index d = set.distance_to_complement(x, c.columns);
      ExtReal env = k.envelope(d);
      if (env.is_bottom()) continue;
      if (!(env.value() - g(x) < c.f.lower)) c.certain = false;
    }
  }
  for (Index x = c.window.lo; x <= c.window.hi; ++x)
    if (c.targets[x].empty()) c.uncovered.push_back(x);
  c.covers = c.uncovered.empty();
  for (Index y = c.window.lo; y <= c.window.hi; ++y) {
    bool ess = false;
    for (Index x : c.sets[y])
      if (c.targets[x].size() == 1) ess = true;
    c.essential[y] = ess;
    if (!ess) c.inessential.push_back(y);
  }
  c.minimal = c.covers && c.inessential.empty();
  return c;
}

SecondSolution second_solution(const Kernel& k, const Covering& cov, Index y0) {
  auto it = cov.essential.find(y0);
  if (it == cov.essential.end()) throw std::invalid_argument("y0 lies outside the covering window");
  if (it->second) throw std::invalid_argument("y0 is essential; no second solution from it");
  if (!cov.covers) throw std::invalid_argument("the family does not cover the window");
  CertifiedFunc h = cov.f;
  CertifiedValue& v = h.values.at(static_cast<size_t>(y0 - h.window.lo));
  v.value = v.value + 1.0;
  h.upper = h.upper + 1.0;
  SecondSolution out;
  out.y0 = y0;
  out.h = h.to_func();
  CertifiedFunc bh = apply_B(k, h, cov.window);
  out.verified = Verdict::True;
  for (Index x = cov.window.lo; x <= cov.window.hi; ++x) {
    int hit = attains(bh.at(x), cov.g(x));
    if (hit == 0) {
      out.verified = Verdict::False;
      break;
    }
    if (hit < 0) out.verified = Verdict::Inconclusive;
  }
  return out;
}

namespace {

// Strict gaps of the equality pattern b_{xF(x)} = g_x + f_{F(x)}: the row gap
// g_x − sup_{z≠F(x)}(b_xz − f_z) and the column gap f_{F(x)} − sup_{z≠x}(b_{zF(x)} − g_z).
double strict_margin(const Kernel& k, const Covering& c, const std::map<Index, Index>& F,
                     const ConjugacyOptions& opt) {
  const IndexSet& set = k.index_set();
  Window rows = search_range(set, c.columns, opt);
  double g_lower = c.g.inf_outside(set, rows);
  double delta = kInf;
  for (auto [x, y] : F) {
    if (!c.window.contains(x)) continue;
    double gx = c.g(x), fy = c.f.at(y).value.value();
    double row = -kInf, col = -kInf;
    for (Index z = c.columns.lo; z <= c.columns.hi; ++z) {
      ExtReal e = k(x, z);
      if (z == y || e.is_bottom()) continue;
      row = std::max(row, e.value() - c.f.at(z).value.value());
    }
    if (!set.covers(c.columns)) {
      ExtReal env = k.envelope(set.distance_to_complement(x, c.columns));
      if (!env.is_bottom()) row = std::max(row, c.f.lower == -kInf ? kInf : env.value() - c.f.lower);
    }
    for (Index z = rows.lo; z <= rows.hi; ++z) {
      ExtReal e = k(z, y);
      if (z == x || e.is_bottom()) continue;
      col = std::max(col, e.value() - c.g(z));
    }
    if (!set.covers(rows)) {
      ExtReal env = k.envelope(set.distance_to_complement(y, rows));
      if (!env.is_bottom()) col = std::max(col, env.value() - g_lower);
    }
    delta = std::min({delta, gx - row, fy - col});
  }
  return delta;
}

std::optional<Bijection> close_bijection(const std::map<Index, Index>& F, const Window& w) {
  std::vector<Index> img;
  std::set<Index> seen;
  for (Index x = w.lo; x <= w.hi; ++x) {
    auto it = F.find(x);
    if (it == F.end() || !w.contains(it->second) || !seen.insert(it->second).second) return std::nullopt;
    img.push_back(it->second);
  }
  return Bijection(w, std::move(img)).canonical();
}

}  // namespace

RegularityCertificate decide_strong_regularity(const Kernel& k, const std::vector<Func>& candidates,
                                               const Window& window, const ConjugacyOptions& opt) {
  const IndexSet& set = k.index_set();
  RegularityCertificate cert;
  cert.window = set.clip(window);
  cert.window_relative = !set.is_finite() || !k.satisfies_tc();
  if (!set.is_finite()) cert.notes.push_back("verdict is relative to the window and its search ranges");
  if (!k.satisfies_tc()) cert.notes.push_back("tightness fails; conclusions are window-relative only");

  ZcReport zc = check_zc(k, cert.window);
  if (!zc.ok) {
    // such a column makes Bᵀg = −∞ there; such a row makes Bh = g unsolvable
    cert.notes.push_back("kernel has a row or column of -inf entries");
    cert.status = RegularityStatus::Refuted;
    cert.refutation = RefutationKind::MinusInfinityLine;
    return cert;
  }

  std::vector<Func> list = candidates.empty() ? std::vector<Func>{Func::zero()} : candidates;
  std::optional<Covering> first;
  for (size_t i = 0; i < list.size(); ++i) {
    Covering c = build_covering(k, list[i], cert.window, opt);
    if (!first) first = c;
    if (!c.certain || !c.f.all_exact()) {
      cert.notes.push_back("candidate " + std::to_string(i) + ": uncertified subdifferentials");
      continue;
    }
    bool real = std::all_of(c.f.values.begin(), c.f.values.end(),
                            [](const CertifiedValue& v) { return v.value.is_finite(); });
    if (!real) {
      cert.notes.push_back("candidate " + std::to_string(i) + ": B^T g is not real");
      continue;
    }
    // F(x) = y whenever ∂ᵀg(x) = {y} and (∂ᵀg)⁻¹(y) = {x}.
    std::map<Index, Index> F;
    bool ok = true;
    for (Index x = c.outer.lo; x <= c.outer.hi; ++x) {
      const auto& t = c.targets[x];
      bool pinned = t.size() == 1 && c.sets[t[0]].size() == 1;
      if (pinned) F[x] = t[0];
      if (!pinned && c.window.contains(x)) ok = false;
    }
    if (!ok) {
      cert.notes.push_back("candidate " + std::to_string(i) + ": some subdifferential is not a singleton");
      continue;
    }
    std::optional<Bijection> bij = close_bijection(F, c.window);
    if (!bij) bij = close_bijection(F, c.outer);
    if (!bij) {
      cert.notes.push_back("candidate " + std::to_string(i) + ": extracted map does not close on the window");
      continue;
    }
    double delta = strict_margin(k, c, F, opt);
    if (!(delta > 0.0)) {
      cert.notes.push_back("candidate " + std::to_string(i) + ": no strict margin");
      continue;
    }
    cert.status = RegularityStatus::Certified;
    cert.candidate = i;
    cert.g = list[i];
    cert.f = c.f;
    cert.F = bij;
    cert.margin = delta;
    for (Index x = c.window.lo; x <= c.window.hi; ++x)
      cert.displacement = std::max(cert.displacement, IndexSet::distance(x, (*bij)(x)));
    cert.condition_iii = true;
    for (Index x = c.window.lo; x <= c.window.hi; ++x) {
      bool hit = false;
      for (auto& [y, s] : c.sets)
        if (s.size() == 1 && s[0] == x) hit = true;
      cert.condition_iii = cert.condition_iii && hit;
    }
    return cert;
  }

  if (!set.is_finite()) return cert;
  UniquenessResult u;
  try {
    u = is_unique_optimal(k);
  } catch (const Infeasible&) {
    // b_{xF(x)} = g_x + f_{F(x)} would be real along the bijection of any certificate
    cert.notes.push_back("assignment problem is infeasible");
    cert.status = RegularityStatus::Refuted;
    cert.refutation = RefutationKind::NoFiniteAssignment;
    return cert;
  }
  if (u.unique) {
    cert.notes.push_back("optimal assignment is unique but no candidate certified it");
    return cert;
  }
  cert.status = RegularityStatus::Refuted;
  cert.refutation = RefutationKind::SecondOptimalAssignment;
  const Index n = set.size();
  cert.second_assignment = Bijection({0, n - 1}, *u.second).canonical();
  if (first && first->covers && !first->inessential.empty()) {
    SecondSolution s = second_solution(k, *first, first->inessential.back());
    if (s.verified == Verdict::True) {
      cert.refutation = RefutationKind::SecondSolution;
      cert.second = s.h;
      cert.g = first->g;
      cert.f = first->f;
    }
  }
  return cert;
}

TailRefutation tail_refutation(const Kernel& k, Index N, const ConjugacyOptions& opt) {
  const IndexSet& set = k.index_set();
  TailRefutation r;
  r.window = set.clip({0, N});
  r.tc_fails = !k.satisfies_tc();
  CertifiedFunc f = apply_BT(k, Func::zero(), r.window, opt);
  r.bt_zero_is_zero = std::all_of(f.values.begin(), f.values.end(), [](const CertifiedValue& v) {
    return v.value == ExtReal(0.0) && v.eps == 0.0;
  });
  Func h({0, -1}, {}, FuncTail::power_decay(1.0, 2.0));
  r.bh = apply_B(k, h, r.window, opt);
  r.bh_is_zero = true;
  for (auto& v : r.bh.values) {
    r.eps = std::max(r.eps, v.eps);
    if (!v.value.is_finite() || v.value.value() > 0.0 || v.value.value() + v.eps < 0.0) r.bh_is_zero = false;
  }
  r.h_in_l1 = h.in_space(set, Space::L1);
  r.distinct = h(r.window.lo) != 0.0;
  return r;
}

}  // namespace tropreg
