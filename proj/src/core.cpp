#include "tropreg/core.hpp"

#include <cmath>

#include "tropreg/assignment.hpp"

namespace tropreg {

ZcReport check_zc(const Kernel& k, const Window& window) {
  ZcReport r;
  const IndexSet& set = k.index_set();
  Window w = set.clip(window);
  if (w.empty()) throw std::invalid_argument("check_zc needs a nonempty window");
  // Far entries are real when the tail is, and a countable set always has far points.
  bool far_real = k.tail_finite() && !set.is_finite();
  Index reach = k.band_radius();
  auto line_ok = [&](Index x, bool row) {
    if (far_real) return true;
    Window near = set.clip({x - reach, x + reach});
    for (Index y = near.lo; y <= near.hi; ++y)
      if (!(row ? k(x, y) : k(y, x)).is_bottom()) return true;
    return false;
  };
  for (Index x = w.lo; x <= w.hi; ++x) {
    if (!line_ok(x, true)) r.bad_rows.push_back(x);
    if (!line_ok(x, false)) r.bad_cols.push_back(x);
  }
  r.ok = r.bad_rows.empty() && r.bad_cols.empty();
  return r;
}

TcReport check_tc(const Kernel& k) {
  TcReport r;
  r.holds = k.satisfies_tc();
  Index top = k.index_set().is_finite() ? k.size() : k.band_radius() + 3;
  for (Index m = 1; m <= top; ++m) {
    r.envelope.push_back(k.envelope(m));
    r.profile.push_back(k.profile(m));
  }
  return r;
}

double seminorm_01(const Func& s, Index M, const Window& window) {
  if (M < 1) throw std::invalid_argument("seminorm needs M >= 1");
  if (window.size() < 2 * M + 1) throw DegenerateWindow("window smaller than 2M+1");
  const auto n = static_cast<size_t>(window.size());
  Matrix w(n, std::vector<ExtReal>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (IndexSet::distance(static_cast<Index>(i), static_cast<Index>(j)) <= M)
        w[i][j] = std::abs(s(window.lo + static_cast<Index>(j)) - s(window.lo + static_cast<Index>(i)));
  return max_weight_assignment(w).value.value();
}

double seminorm_01_prime(const Func& s, Index M, const Window& window) {
  if (M < 1) throw std::invalid_argument("seminorm needs M >= 1");
  double sum = 0.0;
  for (Index x = window.lo; x <= window.hi; ++x) {
    double best = 0.0;
    for (Index y = std::max(window.lo, x - M); y <= std::min(window.hi, x + M); ++y) best = std::max(best, std::abs(s(y) - s(x)));
    sum += best;
  }
  return sum;
}

}  // namespace tropreg
