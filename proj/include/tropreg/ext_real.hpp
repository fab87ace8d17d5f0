#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace tropreg {

/// Element of R ∪ {−∞}. The bottom element absorbs addition from either
/// side, including against +∞ (which only appears in path closures).
class ExtReal {
 public:
  constexpr ExtReal() : v_(-std::numeric_limits<double>::infinity()) {}
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal bottom() { return ExtReal(); }
  static constexpr ExtReal top() { return ExtReal(std::numeric_limits<double>::infinity()); }

  constexpr bool is_bottom() const { return v_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_top() const { return v_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_bottom() && !is_top(); }
  constexpr double value() const { return v_; }

  friend constexpr ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.is_bottom() || b.is_bottom()) return bottom();
    return ExtReal(a.v_ + b.v_);
  }
  friend constexpr ExtReal operator-(ExtReal a, double b) { return a + ExtReal(-b); }
  friend constexpr ExtReal operator+(ExtReal a, double b) { return a + ExtReal(b); }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

  std::string str() const;

 private:
  double v_;
};

/// Tropical sum.
constexpr ExtReal oplus(ExtReal a, ExtReal b) { return std::max(a, b); }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace tropreg
