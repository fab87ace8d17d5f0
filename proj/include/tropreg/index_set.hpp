#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tropreg {

using Index = std::int64_t;

/// Contiguous inclusive range [lo, hi]. Empty when lo > hi.
struct Window {
  Index lo = 0;
  Index hi = -1;

  bool empty() const { return lo > hi; }
  Index size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(Index x) const { return lo <= x && x <= hi; }
  /// Distance from x to the nearest integer outside the window.
  Index distance_to_outside(Index x) const { return std::min(x - lo + 1, hi - x + 1); }
  Window expanded(Index r) const { return {lo - r, hi + r}; }
  Window shrunk(Index r) const { return {lo + r, hi - r}; }
  Window hull(const Window& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    return {std::min(lo, o.lo), std::max(hi, o.hi)};
  }
  Window intersect(const Window& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
  bool operator==(const Window&) const = default;
};

enum class IndexKind { Finite, Naturals, Integers };

/// Finite {0..n-1}, N or Z, all with d(x,y) = |x - y| and basepoint 0.
class IndexSet {
 public:
  static IndexSet finite(Index n) {
    if (n <= 0) throw std::invalid_argument("finite index set needs n >= 1");
    return IndexSet(IndexKind::Finite, n);
  }
  static IndexSet naturals() { return IndexSet(IndexKind::Naturals, 0); }
  static IndexSet integers() { return IndexSet(IndexKind::Integers, 0); }

  IndexKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == IndexKind::Finite; }
  Index size() const { return n_; }

  bool contains(Index x) const {
    switch (kind_) {
      case IndexKind::Finite: return 0 <= x && x < n_;
      case IndexKind::Naturals: return x >= 0;
      case IndexKind::Integers: return true;
    }
    return false;
  }

  static Index distance(Index x, Index y) { return x > y ? x - y : y - x; }

  Window clip(Window w) const {
    switch (kind_) {
      case IndexKind::Finite: return w.intersect({0, n_ - 1});
      case IndexKind::Naturals: return w.intersect({0, w.hi});
      case IndexKind::Integers: return w;
    }
    return w;
  }

  Window full_window() const {
    if (!is_finite()) throw std::logic_error("countable index set has no full window");
    return {0, n_ - 1};
  }

  /// The ball B_n around the basepoint.
  Window ball(Index n) const { return clip({-n, n}); }

  /// Default symmetric window of radius r (whole set when finite).
  Window window(Index r) const { return is_finite() ? full_window() : clip({-r, r}); }

  /// True when `w` covers everything (only possible for finite sets).
  bool covers(const Window& w) const { return is_finite() && w.lo <= 0 && w.hi >= n_ - 1; }

  /// Smallest distance from x to a point of the set outside `w`, or -1 if none.
  Index distance_to_complement(Index x, const Window& w) const;

  std::string name() const;
  bool operator==(const IndexSet&) const = default;

 private:
  IndexSet(IndexKind k, Index n) : kind_(k), n_(n) {}
  IndexKind kind_;
  Index n_;
};

inline Index IndexSet::distance_to_complement(Index x, const Window& w) const {
  Index best = -1;
  auto consider = [&](Index y) {
    if (!contains(y)) return;
    Index d = distance(x, y);
    if (best < 0 || d < best) best = d;
  };
  if (kind_ == IndexKind::Finite) {
    // nearest outside points are just beyond each edge of the window, if inside the set
    consider(w.lo - 1);
    consider(w.hi + 1);
    if (!w.contains(x)) best = 0;
    return best;
  }
  if (!w.contains(x)) return 0;
  consider(w.lo - 1);
  consider(w.hi + 1);
  return best;
}

inline std::string IndexSet::name() const {
  switch (kind_) {
    case IndexKind::Finite: return "finite(" + std::to_string(n_) + ")";
    case IndexKind::Naturals: return "naturals";
    case IndexKind::Integers: return "integers";
  }
  return "?";
}

}  // namespace tropreg
