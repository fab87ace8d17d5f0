#include "tropreg/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tropreg/closure.hpp"
#include "tropreg/core.hpp"

namespace tropreg {

std::string variant_name(SimilarityVariant v) {
  switch (v) {
    case SimilarityVariant::TwoSided: return "two-sided";
    case SimilarityVariant::Right: return "right";
    case SimilarityVariant::Left: return "left";
  }
  return "?";
}

std::string property_name(Property p) {
  switch (p) {
    case Property::ZC: return "ZC";
    case Property::TC: return "TC";
    case Property::StrongRegularity: return "strong-regularity";
    case Property::SolutionExistence: return "solution-existence";
  }
  return "?";
}

std::string agreement_name(Agreement a) {
  switch (a) {
    case Agreement::Agree: return "agree";
    case Agreement::Disagree: return "disagree";
    case Agreement::Refused: return "refused";
    case Agreement::Inconclusive: return "inconclusive";
  }
  return "?";
}

Similarity Similarity::right(Bijection K, Func phi, Func psi, Space space) {
  return {Bijection::identity(), std::move(K), std::move(phi), std::move(psi), SimilarityVariant::Right, space};
}

Similarity Similarity::left(Bijection H, Func phi, Func psi, Space space) {
  return {std::move(H), Bijection::identity(), std::move(phi), std::move(psi), SimilarityVariant::Left, space};
}

// b_uv = c_{H⁻¹u, K⁻¹v} + φ_{H⁻¹u} + ψ_{K⁻¹v}
Similarity Similarity::inverse() const {
  Bijection Hi = H.inverse(), Ki = K.inverse();
  return {Hi, Ki, -phi.compose(Hi), -psi.compose(Ki), variant, space};
}

Similarity compose(const Similarity& first, const Similarity& second) {
  // d_xy = b_{H1 H2 x, K1 K2 y} − φ1(H2 x) − φ2(x) − ψ1(K2 y) − ψ2(y)
  Similarity r;
  r.H = compose(first.H, second.H);
  r.K = compose(first.K, second.K);
  try {
    r.phi = first.phi.compose(second.H) + second.phi;
    r.psi = first.psi.compose(second.K) + second.psi;
  } catch (const std::invalid_argument& e) {
    throw SimilarityRefused(std::string("composite potentials: ") + e.what());
  }
  r.variant = first.variant == second.variant ? first.variant : SimilarityVariant::TwoSided;
  if (r.H.is_identity() && r.variant == SimilarityVariant::TwoSided && first.variant != SimilarityVariant::Left &&
      second.variant != SimilarityVariant::Left)
    r.variant = SimilarityVariant::Right;
  r.space = std::max(first.space, second.space);
  return r;
}

Kernel apply_similarity(const Kernel& k, const Similarity& s) {
  if (s.variant == SimilarityVariant::Right && !s.H.is_identity())
    throw SimilarityRefused("right similarity must keep rows in place (H = I)");
  if (s.variant == SimilarityVariant::Left && !s.K.is_identity())
    throw SimilarityRefused("left similarity must keep columns in place (K = I)");
  const IndexSet& set = k.index_set();
  if (!s.phi.in_space(set, s.space))
    throw SimilarityRefused("phi is not in the declared space " + space_name(s.space));
  if (!s.psi.in_space(set, s.space))
    throw SimilarityRefused("psi is not in the declared space " + space_name(s.space));
  try {
    return Kernel::transformed(k, s.H, s.K, s.phi, s.psi);
  } catch (const std::invalid_argument& e) {
    throw SimilarityRefused(e.what());
  }
}

namespace {

struct OffDiag {
  bool diag_zero = true;
  std::optional<std::pair<Index, Index>> bad_diag;
  ExtReal sup = ExtReal::bottom();
  bool attained = true;
  std::optional<std::pair<Index, Index>> argsup;
  bool window_relative = false;
};

void absorb(OffDiag& o, ExtReal v, Index x, Index y) {
  if (!o.argsup || v > o.sup) {
    o.argsup = std::pair{x, y};
    o.sup = oplus(o.sup, v);
  }
}

OffDiag scan(const Kernel& k, const Window& window) {
  OffDiag o;
  auto section = [&](const Window& w) {
    for (Index x = w.lo; x <= w.hi; ++x)
      for (Index y = w.lo; y <= w.hi; ++y) {
        ExtReal v = k(x, y);
        if (x == y) {
          if (v != ExtReal(0.0) && !o.bad_diag) {
            o.diag_zero = false;
            o.bad_diag = std::pair{x, y};
          }
        } else {
          absorb(o, v, x, y);
        }
      }
  };
  if (k.is_dense()) {
    section(k.index_set().full_window());
    return o;
  }
  if (k.is_transformed()) {
    o.window_relative = true;
    section(k.index_set().clip(window));
    return o;
  }
  const auto& b = k.banded_body();
  const Index p = b.period, W = b.width;
  for (Index r = 0; r < p; ++r) {
    // representative row with the right residue and room for every band offset
    Index x = r + p * W;
    if (b.diagonal[static_cast<size_t>(r)] != ExtReal(0.0) && !o.bad_diag) {
      o.diag_zero = false;
      o.bad_diag = std::pair{x, x};
    }
    for (Index off = -W; off <= W; ++off)
      if (off != 0) absorb(o, k(x, x + off), x, x + off);
  }
  ExtReal band = o.sup;
  ExtReal tail = b.tail.sup_from(W + 1);
  if (tail > band) {
    o.sup = tail;
    o.attained = b.tail.sup_attained();
    o.argsup = std::pair{Index{0}, W + 1};
  }
  return o;
}

NormalReport report(const OffDiag& o, bool strict) {
  NormalReport r;
  r.window_relative = o.window_relative;
  r.margin = o.sup.is_bottom() ? std::numeric_limits<double>::infinity() : -o.sup.value();
  r.margin_attained = o.attained;
  if (!o.diag_zero) {
    r.offending = o.bad_diag;
    r.detail = "diagonal entry differs from 0";
    return r;
  }
  ExtReal zero(0.0);
  if (!strict) {
    r.ok = o.sup <= zero;
  } else {
    // a supremum of 0 reached only in the limit still leaves every entry negative
    r.ok = o.sup < zero || (o.sup == zero && !o.attained);
    if (r.ok && o.sup == zero) r.detail = "margin-zero: off-diagonal supremum 0 is approached but not attained";
  }
  if (!r.ok) {
    r.offending = o.argsup;
    r.detail = strict ? "off-diagonal entry is not negative" : "off-diagonal entry is positive";
  }
  return r;
}

}  // namespace

NormalReport is_normal(const Kernel& k, const Window& window) { return report(scan(k, window), false); }

NormalReport is_strongly_normal(const Kernel& k, const Window& window) { return report(scan(k, window), true); }

Normalization normalize_finite(const Kernel& k) {
  if (!k.index_set().is_finite()) throw std::invalid_argument("normalize_finite needs a finite kernel");
  const Index n = k.size();
  const Window w{0, n - 1};
  AssignmentResult sol = solve_assignment(k);
  Bijection F(w, sol.perm);
  ClosureResult cl = kleene_plus(btilde(k, F, w), w);
  if (cl.positive_circuit) throw std::logic_error("optimal assignment left a positive circuit in the deviation kernel");
  const auto un = static_cast<size_t>(n);
  std::vector<double> phi(un), psi(un), psi_star(un);
  for (size_t i = 0; i < un; ++i) phi[i] = std::max_element(cl.plus[i].begin(), cl.plus[i].end())->value();
  for (Index y = 0; y < n; ++y) {
    const auto i = static_cast<size_t>(y);
    psi[i] = k(y, F(y)).value() - phi[i];
    psi_star[static_cast<size_t>(F(y))] = psi[i];
  }
  auto sim = Similarity::right(F, Func::from_values(0, phi), Func::from_values(0, psi));
  Kernel normal = apply_similarity(k, sim);
  return {F, sol.value.value(), std::move(sim), std::move(normal), std::move(phi), std::move(psi_star)};
}

bool InvarianceReport::consistent() const {
  return std::none_of(outcomes.begin(), outcomes.end(),
                      [](const PropertyOutcome& o) { return o.agreement == Agreement::Disagree; });
}

bool InvarianceReport::all_agree() const {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const PropertyOutcome& o) { return o.agreement == Agreement::Agree; });
}

namespace {

std::string yes_no(bool b) { return b ? "holds" : "fails"; }

PropertyOutcome compare_bools(Property p, bool before, bool after) {
  PropertyOutcome o;
  o.property = p;
  o.before = yes_no(before);
  o.after = yes_no(after);
  o.agreement = before == after ? Agreement::Agree : Agreement::Disagree;
  return o;
}

// Which similarities are known to transport local solutions in each mode.
std::optional<std::string> solution_refusal(const Kernel& k, const Similarity& s, SolutionMode mode) {
  if (k.index_set().is_finite()) return std::nullopt;  // finite sums: every space behaves like l1
  bool right = s.H.is_identity();
  if (mode == SolutionMode::Compact) {
    if (s.space == Space::L1 || s.space == Space::L01) return std::nullopt;
    return "local solutions are only known to be invariant under l1 and l01 similarities";
  }
  if (!right) return "restricted solutions fix the order of rows: only right similarities are supported";
  if (s.space == Space::Linf) return "restricted solutions are only known to be invariant up to l0 right similarities";
  return std::nullopt;
}

}  // namespace

InvarianceReport invariance_suite(const Kernel& k, const Similarity& s, const std::vector<Property>& props,
                                  const InvarianceOptions& opt) {
  InvarianceReport rep;
  std::optional<Kernel> c;
  std::string refusal;
  try {
    c = apply_similarity(k, s);
  } catch (const SimilarityRefused& e) {
    refusal = e.what();
  }
  for (Property p : props) {
    if (!c) {
      PropertyOutcome o;
      o.property = p;
      o.agreement = Agreement::Refused;
      o.reason = refusal;
      rep.outcomes.push_back(std::move(o));
      continue;
    }
    switch (p) {
      case Property::ZC:
        rep.outcomes.push_back(compare_bools(p, check_zc(k, opt.window).ok, check_zc(*c, opt.window).ok));
        break;
      case Property::TC:
        rep.outcomes.push_back(compare_bools(p, check_tc(k).holds, check_tc(*c).holds));
        break;
      case Property::StrongRegularity: {
        PropertyOutcome o;
        o.property = p;
        RegularityCertificate before, after;
        try {
          if (opt.decider) {
            before = opt.decider(k, opt.window);
            after = opt.decider(*c, opt.window);
          } else {
            std::vector<Func> moved;
            for (const Func& g : opt.candidates) moved.push_back(g.compose(s.H) - s.phi);
            before = decide_strong_regularity(k, opt.candidates, opt.window);
            after = decide_strong_regularity(*c, moved, opt.window);
          }
        } catch (const std::invalid_argument& e) {
          o.agreement = Agreement::Refused;
          o.reason = e.what();
          rep.outcomes.push_back(std::move(o));
          break;
        }
        o.before = regularity_name(before.status);
        o.after = regularity_name(after.status);
        auto definite = [](RegularityStatus st) { return st != RegularityStatus::NoWitnessFound; };
        if (definite(before.status) && definite(after.status))
          o.agreement = before.status == after.status ? Agreement::Agree : Agreement::Disagree;
        else
          o.agreement = Agreement::Inconclusive;
        if (o.agreement == Agreement::Inconclusive) o.reason = "no witness on at least one side";
        rep.outcomes.push_back(std::move(o));
        break;
      }
      case Property::SolutionExistence: {
        PropertyOutcome o;
        o.property = p;
        if (auto why = solution_refusal(k, s, opt.mode)) {
          o.agreement = Agreement::Refused;
          o.reason = *why;
          rep.outcomes.push_back(std::move(o));
          break;
        }
        Bijection T = compose(compose(s.K, opt.solution), s.H.inverse());
        o.transported = T;
        // a bijection through a −∞ entry is not a solution at all
        auto verified = [&](const Kernel& kk, const Bijection& F) {
          Window w = kk.index_set().clip(opt.window);
          for (Index x = w.lo; x <= w.hi; ++x)
            if (kk(x, F(x)).is_bottom()) return false;
          return verify_local_strong_solution(kk, F, opt.distance, opt.window, opt.mode).verified;
        };
        bool after = verified(*c, opt.solution), before = verified(k, T);
        o.after = yes_no(after);
        o.before = yes_no(before);
        o.agreement = after == before ? Agreement::Agree : Agreement::Disagree;
        if (k.index_set().is_finite() && opt.mode == SolutionMode::RestrictedBalls)
          o.reason = "ball-growth hypothesis is vacuous on a finite index set";
        rep.outcomes.push_back(std::move(o));
        break;
      }
    }
  }
  return rep;
}

}  // namespace tropreg
