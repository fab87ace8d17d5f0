#pragma once

#include <vector>

#include "tropreg/index_set.hpp"

namespace tropreg {

/// Bijection of the index set that moves only points of a finite window.
/// Such maps are automatically locally bounded.
class Bijection {
 public:
  Bijection() = default;  // identity
  /// `images[i]` is the image of `support.lo + i`; must permute the window.
  Bijection(Window support, std::vector<Index> images);

  static Bijection identity() { return {}; }
  static Bijection transposition(Index a, Index b);
  /// a0 -> a1 -> ... -> ak -> a0
  static Bijection cycle(const std::vector<Index>& points);

  Index operator()(Index x) const {
    return support_.contains(x) ? images_[static_cast<size_t>(x - support_.lo)] : x;
  }
  const Window& support() const { return support_; }
  bool is_identity() const;

  Bijection inverse() const;
  /// (F ∘ G)(x) = F(G(x)).
  friend Bijection compose(const Bijection& F, const Bijection& G);

  /// Same map with the support window tightened to the moved points.
  Bijection canonical() const;
  bool operator==(const Bijection& o) const;

 private:
  Window support_{0, -1};
  std::vector<Index> images_;
};

/// sup_x d(F(x), G(x)); attained on the union of supports.
Index rho(const Bijection& F, const Bijection& G);
inline Index rho(const Bijection& F) { return rho(F, Bijection::identity()); }

}  // namespace tropreg
