#include "tropreg/func.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tropreg/bijection.hpp"
#include "tropreg/ext_real.hpp"

namespace tropreg {

namespace {

FuncTail canonical(FuncTail t) {
  if (t.kind != FuncTailKind::Zero && t.c == 0.0) return FuncTail::zero();
  return t;
}

// Smallest |x| over points of `set` outside both windows; -1 when there are none.
Index min_abs_outside(const IndexSet& set, const Window& a, const Window& b) {
  const Index candidates[] = {0, a.lo - 1, a.hi + 1, b.lo - 1, b.hi + 1};
  Index best = -1;
  for (Index x : candidates) {
    if (!set.contains(x) || a.contains(x) || b.contains(x)) continue;
    Index ax = x < 0 ? -x : x;
    if (best < 0 || ax < best) best = ax;
  }
  return best;
}

}  // namespace

FuncTail FuncTail::power_decay(double c, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("power-decay tail needs q > 0");
  return {FuncTailKind::PowerDecay, c, q};
}

double FuncTail::at(Index x) const {
  switch (kind) {
    case FuncTailKind::Zero: return 0.0;
    case FuncTailKind::Constant: return c;
    case FuncTailKind::PowerDecay: {
      double ax = static_cast<double>(x < 0 ? -x : x);
      return c * std::pow(ax + 1.0, -q);
    }
  }
  return 0.0;
}

double FuncTail::limit() const { return kind == FuncTailKind::Constant ? c : 0.0; }

std::string space_name(Space s) {
  switch (s) {
    case Space::L1: return "l1";
    case Space::L01: return "l01";
    case Space::L0: return "l0";
    case Space::Linf: return "linf";
  }
  return "?";
}

Func::Func(Window window, std::vector<double> values, FuncTail tail)
    : window_(window), values_(std::move(values)), tail_(canonical(tail)) {
  if (window_.empty()) {
    window_ = {0, -1};
    if (!values_.empty()) throw std::invalid_argument("values given for an empty window");
  } else if (static_cast<Index>(values_.size()) != window_.size()) {
    throw std::invalid_argument("window size and number of values differ");
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("function values must be finite reals");
}

Func Func::from_values(Index lo, std::vector<double> values, FuncTail tail) {
  Window w{lo, lo + static_cast<Index>(values.size()) - 1};
  return Func(w, std::move(values), tail);
}

double Func::operator()(Index x) const {
  if (window_.contains(x)) return values_[static_cast<size_t>(x - window_.lo)];
  return tail_.at(x);
}

double Func::inf_outside(const IndexSet& set, const Window& w) const {
  double best = kInf;
  for (Index x = window_.lo; x <= window_.hi; ++x)
    if (set.contains(x) && !w.contains(x)) best = std::min(best, (*this)(x));
  if (set.is_finite()) {
    for (Index x = 0; x < set.size(); ++x)
      if (!window_.contains(x) && !w.contains(x)) best = std::min(best, tail_.at(x));
    return best;
  }
  Index m = min_abs_outside(set, window_, w);
  if (m < 0) return best;
  switch (tail_.kind) {
    case FuncTailKind::Zero: return std::min(best, 0.0);
    case FuncTailKind::Constant: return std::min(best, tail_.c);
    case FuncTailKind::PowerDecay:
      return std::min(best, tail_.c > 0 ? 0.0 : tail_.at(m));
  }
  return best;
}

double Func::sup_outside(const IndexSet& set, const Window& w) const {
  return -(-*this).inf_outside(set, w);
}

bool Func::in_space(const IndexSet& set, Space s) const {
  if (set.is_finite()) return true;
  switch (tail_.kind) {
    case FuncTailKind::Zero: return true;
    case FuncTailKind::Constant: return s != Space::L1;
    case FuncTailKind::PowerDecay: return s != Space::L1 || tail_.q > 1.0;
  }
  return false;
}

double Func::l1_bound(const IndexSet& set) const {
  double sum = 0.0;
  for (Index x = window_.lo; x <= window_.hi; ++x)
    if (set.contains(x)) sum += std::abs((*this)(x));
  if (set.is_finite()) {
    for (Index x = 0; x < set.size(); ++x)
      if (!window_.contains(x)) sum += std::abs(tail_.at(x));
    return sum;
  }
  switch (tail_.kind) {
    case FuncTailKind::Zero: return sum;
    case FuncTailKind::Constant: return kInf;
    case FuncTailKind::PowerDecay: {
      if (tail_.q <= 1.0) return kInf;
      // zeta(q) <= 1 + 1/(q-1); two sides on Z
      double zeta = 1.0 + 1.0 / (tail_.q - 1.0);
      double sides = set.kind() == IndexKind::Integers ? 2.0 : 1.0;
      return sum + std::abs(tail_.c) * sides * zeta;
    }
  }
  return sum;
}

double Func::linf_norm(const IndexSet& set) const {
  return std::max(std::abs(inf_over(set)), std::abs(sup_over(set)));
}

Func Func::widened(const Window& w) const {
  Window h = window_.hull(w);
  std::vector<double> v;
  v.reserve(static_cast<size_t>(h.size()));
  for (Index x = h.lo; x <= h.hi; ++x) v.push_back((*this)(x));
  return Func(h, std::move(v), tail_);
}

Func Func::restricted(const Window& w, FuncTail tail) const {
  std::vector<double> v;
  for (Index x = w.lo; x <= w.hi; ++x) v.push_back((*this)(x));
  return Func(w, std::move(v), tail);
}

Func Func::operator+(const Func& o) const {
  FuncTail a = tail_, b = o.tail_, t;
  if (a.kind == FuncTailKind::Zero) {
    t = b;
  } else if (b.kind == FuncTailKind::Zero) {
    t = a;
  } else if (a.kind == FuncTailKind::Constant && b.kind == FuncTailKind::Constant) {
    t = FuncTail::constant(a.c + b.c);
  } else if (a.kind == FuncTailKind::PowerDecay && b.kind == FuncTailKind::PowerDecay && a.q == b.q) {
    t = {FuncTailKind::PowerDecay, a.c + b.c, a.q};
  } else {
    throw std::invalid_argument("sum of these tail families is not representable");
  }
  Window h = window_.hull(o.window_);
  std::vector<double> v;
  for (Index x = h.lo; x <= h.hi; ++x) v.push_back((*this)(x) + o(x));
  return Func(h, std::move(v), t);
}

Func Func::operator-() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](double a) { return -a; });
  FuncTail t = tail_;
  t.c = -t.c;
  return Func(window_, std::move(v), t);
}

Func Func::compose(const Bijection& F) const {
  Window h = window_.hull(F.support());
  std::vector<double> v;
  for (Index x = h.lo; x <= h.hi; ++x) v.push_back((*this)(F(x)));
  return Func(h, std::move(v), tail_);
}

bool Func::operator==(const Func& o) const {
  if (!(tail_ == o.tail_)) return false;
  Window h = window_.hull(o.window_);
  for (Index x = h.lo; x <= h.hi; ++x)
    if ((*this)(x) != o(x)) return false;
  return true;
}

Func delta(Index y) { return Func({y, y}, {1.0}); }

}  // namespace tropreg
