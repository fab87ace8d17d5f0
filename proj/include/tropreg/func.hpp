#pragma once

#include <span>
#include <string>
#include <vector>

#include "tropreg/index_set.hpp"

namespace tropreg {

class Bijection;

enum class FuncTailKind { Zero, Constant, PowerDecay };

/// Behaviour of a function outside its explicit window:
/// Zero, Constant(c), or PowerDecay(c, q) meaning c * (|x| + 1)^(-q).
struct FuncTail {
  FuncTailKind kind = FuncTailKind::Zero;
  double c = 0.0;
  double q = 0.0;

  static FuncTail zero() { return {}; }
  static FuncTail constant(double c) { return {FuncTailKind::Constant, c, 0.0}; }
  static FuncTail power_decay(double c, double q);

  double at(Index x) const;
  /// Limit as |x| -> infinity.
  double limit() const;
  bool operator==(const FuncTail&) const = default;
};

/// Sequence spaces, ordered by inclusion: L1 ⊂ L01 ⊂ L0 ⊂ Linf.
enum class Space { L1, L01, L0, Linf };
std::string space_name(Space s);

/// Real-valued function on an index set: explicit values on a window plus a
/// parametric tail elsewhere. Evaluation is total and never -inf.
class Func {
 public:
  Func() = default;
  Func(Window window, std::vector<double> values, FuncTail tail = FuncTail::zero());

  static Func zero() { return Func(); }
  static Func constant(double c) { return Func({0, -1}, {}, FuncTail::constant(c)); }
  /// Values indexed from `lo`.
  static Func from_values(Index lo, std::vector<double> values, FuncTail tail = FuncTail::zero());

  double operator()(Index x) const;
  const Window& window() const { return window_; }
  std::span<const double> values() const { return values_; }
  const FuncTail& tail() const { return tail_; }

  /// Bounds of the values taken at points of `set` outside `w`
  /// (infimum / supremum; +inf/-inf when that region is empty).
  double inf_outside(const IndexSet& set, const Window& w) const;
  double sup_outside(const IndexSet& set, const Window& w) const;
  double inf_over(const IndexSet& set) const { return inf_outside(set, {0, -1}); }
  double sup_over(const IndexSet& set) const { return sup_outside(set, {0, -1}); }

  /// Exact membership in a sequence space, decided from the tail family.
  bool in_space(const IndexSet& set, Space s) const;
  /// Upper bound on the l1 norm (+inf when not summable).
  double l1_bound(const IndexSet& set) const;
  double linf_norm(const IndexSet& set) const;

  Func operator+(const Func& o) const;
  Func operator-() const;
  Func operator-(const Func& o) const { return *this + (-o); }
  /// x -> this(F(x)).
  Func compose(const Bijection& F) const;
  /// Same function with the explicit window widened to `w` (values sampled from the tail).
  Func widened(const Window& w) const;
  /// Restrict explicit values to w and use the given tail elsewhere.
  Func restricted(const Window& w, FuncTail tail) const;

  /// Pointwise equality on every point of the hull of both windows, and equal tails.
  bool operator==(const Func& o) const;

 private:
  Window window_{0, -1};
  std::vector<double> values_;
  FuncTail tail_;
};

/// δ_y: 1 at y, 0 elsewhere.
Func delta(Index y);

}  // namespace tropreg
