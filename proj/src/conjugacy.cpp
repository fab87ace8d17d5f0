#include "tropreg/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tropreg {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool CertifiedFunc::all_exact() const {
  return std::all_of(values.begin(), values.end(), [](const CertifiedValue& v) { return v.exact(); });
}

double CertifiedFunc::max_eps() const {
  double e = 0.0;
  for (auto& v : values) e = std::max(e, v.eps);
  return e;
}

Func CertifiedFunc::to_func(FuncTail tail) const {
  std::vector<double> v;
  v.reserve(values.size());
  for (auto& c : values) {
    if (!c.value.is_finite()) throw std::domain_error("certified function takes the value -inf");
    v.push_back(c.value.value());
  }
  return Func(window, std::move(v), tail);
}

Window search_range(const IndexSet& set, const Window& w, const ConjugacyOptions& opt) {
  if (opt.enlargement < 1.0) throw std::invalid_argument("window enlargement must be >= 1");
  auto r = static_cast<Index>(std::ceil(static_cast<double>(w.size()) * (opt.enlargement - 1.0)));
  return set.clip(w.expanded(r));
}

namespace {

// What the evaluator needs to know about the function being conjugated.
struct Operand {
  virtual ~Operand() = default;
  virtual Window known(const Window& want) const = 0;
  virtual double value(Index y) const = 0;
  virtual double eps(Index y) const = 0;
  virtual double inf_outside(const Window& s) const = 0;
  double lower = -kInf, upper = kInf;
};

struct FuncOperand final : Operand {
  FuncOperand(const Func& f, const IndexSet& set) : f(f), set(set) {
    lower = f.inf_over(set);
    upper = f.sup_over(set);
  }
  Window known(const Window& want) const override { return want; }
  double value(Index y) const override { return f(y); }
  double eps(Index) const override { return 0.0; }
  double inf_outside(const Window& s) const override { return f.inf_outside(set, s); }
  const Func& f;
  const IndexSet& set;
};

struct CertOperand final : Operand {
  CertOperand(const CertifiedFunc& g, const IndexSet& set) : g(g), set(set) {
    lower = g.lower;
    upper = g.upper;
  }
  Window known(const Window& want) const override { return want.intersect(g.window); }
  double value(Index y) const override {
    ExtReal v = g.at(y).value;
    return v.is_bottom() ? -kInf : v.value();
  }
  double eps(Index y) const override { return g.at(y).eps; }
  double inf_outside(const Window& s) const override {
    double best = kInf;
    for (Index y = g.window.lo; y <= g.window.hi; ++y)
      if (!s.contains(y)) best = std::min(best, value(y));
    if (!set.covers(g.window)) best = std::min(best, lower);
    return best;
  }
  const CertifiedFunc& g;
  const IndexSet& set;
};

CertifiedFunc conjugate(const Kernel& kk, const Operand& op, const Window& window, const ConjugacyOptions& opt) {
  const IndexSet& set = kk.index_set();
  CertifiedFunc out;
  out.window = set.clip(window);
  if (out.window.empty()) throw std::invalid_argument("conjugacy needs a nonempty window");
  Window s = op.known(search_range(set, out.window, opt));
  if (!s.contains(out.window.lo) || !s.contains(out.window.hi))
    throw std::invalid_argument("operand is not known on the requested window");
  double in_lower = op.inf_outside(s);
  for (Index x = out.window.lo; x <= out.window.hi; ++x) {
    double hi = -kInf, lo = -kInf;
    bool fuzzy = false;
    std::vector<Index> arg;
    for (Index y = s.lo; y <= s.hi; ++y) {
      ExtReal e = kk(x, y);
      double fy = op.value(y);
      if (e.is_bottom() || fy == kInf) continue;
      double c = e.value() - fy;
      double ey = op.eps(y);
      if (ey > 0.0) fuzzy = true;
      lo = std::max(lo, c - ey);
      if (c > hi) {
        hi = c;
        arg.assign(1, y);
      } else if (c == hi) {
        arg.push_back(y);
      }
    }
    // Everything beyond the search range is at distance >= d from x.
    double tail = -kInf;
    Index d = set.distance_to_complement(x, s);
    if (d >= 0) {
      ExtReal env = kk.envelope(d);
      if (!env.is_bottom()) tail = in_lower == -kInf ? kInf : env.value() - in_lower;
    }
    CertifiedValue cv;
    if (!fuzzy && (tail < hi || (tail == -kInf && hi == -kInf))) {
      cv.value = hi == -kInf ? ExtReal::bottom() : ExtReal(hi);
    } else {
      cv.status = Certainty::WithinEps;
      cv.value = lo == -kInf ? ExtReal::bottom() : ExtReal(lo);
      double top = std::max(hi, tail);
      cv.eps = lo == -kInf ? kInf : top - lo;
    }
    if (hi != -kInf) cv.argmax = std::move(arg);
    out.values.push_back(std::move(cv));
  }
  // Global bounds: (Bf)_x >= b_xx - f_x and (Bf)_x <= sup b - inf f.
  ExtReal dlb = kk.diagonal_lower_bound();
  out.lower = (dlb.is_bottom() || op.upper == kInf) ? -kInf : dlb.value() - op.upper;
  ExtReal sup = kk.sup_entry();
  out.upper = sup.is_bottom() ? -kInf : (op.lower == -kInf ? kInf : sup.value() - op.lower);
  return out;
}

}  // namespace

CertifiedFunc apply_B(const Kernel& k, const Func& f, const Window& window, const ConjugacyOptions& opt) {
  return conjugate(k, FuncOperand(f, k.index_set()), window, opt);
}

CertifiedFunc apply_BT(const Kernel& k, const Func& g, const Window& window, const ConjugacyOptions& opt) {
  return conjugate(k.transpose(), FuncOperand(g, k.index_set()), window, opt);
}

CertifiedFunc apply_B(const Kernel& k, const CertifiedFunc& f, const Window& window, const ConjugacyOptions& opt) {
  return conjugate(k, CertOperand(f, k.index_set()), window, opt);
}

CertifiedFunc apply_BT(const Kernel& k, const CertifiedFunc& g, const Window& window, const ConjugacyOptions& opt) {
  return conjugate(k.transpose(), CertOperand(g, k.index_set()), window, opt);
}

GaloisReport galois_check(const Kernel& k, const Func& f, const Window& window, const ConjugacyOptions& opt) {
  const IndexSet& set = k.index_set();
  Window w1 = set.clip(window);
  Window w2 = search_range(set, w1, opt);
  Window w3 = search_range(set, w2, opt);
  CertifiedFunc g1 = apply_B(k, f, w3, opt);
  CertifiedFunc f2 = apply_BT(k, g1, w2, opt);
  CertifiedFunc g3 = apply_B(k, f2, w1, opt);
  GaloisReport r;
  if (!g1.all_exact() || !f2.all_exact() || !g3.all_exact()) return r;
  r.status = Verdict::True;
  for (Index x = w1.lo; x <= w1.hi; ++x)
    if (!(g3.at(x).value == g1.at(x).value)) {
      r.status = Verdict::False;
      r.mismatch = x;
      break;
    }
  return r;
}

EquationResult solve_equation(const Kernel& k, const Func& g, const Window& window, const ConjugacyOptions& opt) {
  const IndexSet& set = k.index_set();
  Window w = set.clip(window);
  EquationResult r;
  r.candidate = apply_BT(k, g, search_range(set, w, opt), opt);
  CertifiedFunc back = apply_B(k, r.candidate, w, opt);
  bool exact = r.candidate.all_exact() && back.all_exact();
  r.residual = 0.0;
  for (Index x = w.lo; x <= w.hi; ++x) {
    const CertifiedValue& v = back.at(x);
    double hi = v.value.is_bottom() ? -kInf : v.value.value() + v.eps;
    // B Bᵀ g <= g always holds, so any certified shortfall is a definite miss.
    if (hi < g(x)) {
      r.status = Verdict::False;
      if (!r.witness) r.witness = x;
    }
    double lo = v.value.is_bottom() ? -kInf : v.value.value();
    r.residual = std::max(r.residual, std::abs(g(x) - lo));
  }
  if (r.status == Verdict::False) return r;
  r.status = exact ? Verdict::True : Verdict::Inconclusive;
  return r;
}

}  // namespace tropreg
