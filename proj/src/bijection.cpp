#include "tropreg/bijection.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropreg {

Bijection::Bijection(Window support, std::vector<Index> images)
    : support_(support), images_(std::move(images)) {
  if (support_.empty()) {
    support_ = {0, -1};
    if (!images_.empty()) throw std::invalid_argument("images given for an empty window");
    return;
  }
  if (static_cast<Index>(images_.size()) != support_.size())
    throw std::invalid_argument("bijection image table has the wrong length");
  std::vector<char> hit(images_.size(), 0);
  for (Index y : images_) {
    if (!support_.contains(y)) throw std::invalid_argument("bijection image leaves its window");
    auto& h = hit[static_cast<size_t>(y - support_.lo)];
    if (h) throw std::invalid_argument("bijection image table repeats a point");
    h = 1;
  }
}

Bijection Bijection::transposition(Index a, Index b) {
  if (a == b) return {};
  Index lo = std::min(a, b), hi = std::max(a, b);
  std::vector<Index> img;
  for (Index x = lo; x <= hi; ++x) img.push_back(x == a ? b : x == b ? a : x);
  return Bijection({lo, hi}, std::move(img));
}

Bijection Bijection::cycle(const std::vector<Index>& points) {
  if (points.size() < 2) return {};
  auto [mn, mx] = std::minmax_element(points.begin(), points.end());
  Window w{*mn, *mx};
  std::vector<Index> img;
  for (Index x = w.lo; x <= w.hi; ++x) img.push_back(x);
  for (size_t i = 0; i < points.size(); ++i)
    img[static_cast<size_t>(points[i] - w.lo)] = points[(i + 1) % points.size()];
  return Bijection(w, std::move(img));
}

bool Bijection::is_identity() const {
  for (Index x = support_.lo; x <= support_.hi; ++x)
    if ((*this)(x) != x) return false;
  return true;
}

Bijection Bijection::inverse() const {
  std::vector<Index> img(images_.size());
  for (Index x = support_.lo; x <= support_.hi; ++x)
    img[static_cast<size_t>((*this)(x) - support_.lo)] = x;
  return Bijection(support_, std::move(img));
}

Bijection compose(const Bijection& F, const Bijection& G) {
  Window w = F.support_.hull(G.support_);
  std::vector<Index> img;
  for (Index x = w.lo; x <= w.hi; ++x) img.push_back(F(G(x)));
  return Bijection(w, std::move(img)).canonical();
}

Bijection Bijection::canonical() const {
  Index lo = support_.hi + 1, hi = support_.lo - 1;
  for (Index x = support_.lo; x <= support_.hi; ++x)
    if ((*this)(x) != x) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (lo > hi) return {};
  std::vector<Index> img;
  for (Index x = lo; x <= hi; ++x) img.push_back((*this)(x));
  return Bijection({lo, hi}, std::move(img));
}

bool Bijection::operator==(const Bijection& o) const {
  Window w = support_.hull(o.support_);
  for (Index x = w.lo; x <= w.hi; ++x)
    if ((*this)(x) != o(x)) return false;
  return true;
}

Index rho(const Bijection& F, const Bijection& G) {
  Window w = F.support().hull(G.support());
  Index r = 0;
  for (Index x = w.lo; x <= w.hi; ++x) r = std::max(r, IndexSet::distance(F(x), G(x)));
  return r;
}

}  // namespace tropreg
