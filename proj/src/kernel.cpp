#include "tropreg/kernel.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace tropreg {

std::string ExtReal::str() const {
  if (is_bottom()) return "-inf";
  if (is_top()) return "+inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v_);
  return std::string(buf, res.ptr);
}

KernelTail KernelTail::linear(double a, double b) {
  if (!(a > 0)) throw std::invalid_argument("linear tail: a must be > 0");
  return {TailFamily::Linear, a, b};
}
KernelTail KernelTail::power(double c, double q) {
  if (!(c > 0) || !(q > 0)) throw std::invalid_argument("power tail: c and q must be > 0");
  return {TailFamily::Power, c, q};
}
KernelTail KernelTail::reciprocal(double c, double q) {
  if (!(c > 0) || !(q > 0)) throw std::invalid_argument("reciprocal tail: c and q must be > 0");
  return {TailFamily::Reciprocal, c, q};
}

ExtReal KernelTail::at(Index d) const {
  double dd = static_cast<double>(d);
  switch (family) {
    case TailFamily::MinusInfinity: return ExtReal::bottom();
    case TailFamily::Linear: return -p1 * dd - p2;
    case TailFamily::Power: return -p1 * std::pow(dd, p2);
    case TailFamily::Reciprocal: return -p1 * std::pow(dd, -p2);
  }
  return ExtReal::bottom();
}

ExtReal KernelTail::sup_from(Index d) const {
  // Linear and Power decrease with distance; Reciprocal increases towards 0.
  if (family == TailFamily::Reciprocal) return 0.0;
  return at(d);
}

std::string KernelTail::name() const {
  auto num = [](double v) { return ExtReal(v).str(); };
  switch (family) {
    case TailFamily::MinusInfinity: return "minus_infinity";
    case TailFamily::Linear: return "linear(" + num(p1) + "," + num(p2) + ")";
    case TailFamily::Power: return "power(" + num(p1) + "," + num(p2) + ")";
    case TailFamily::Reciprocal: return "reciprocal(" + num(p1) + "," + num(p2) + ")";
  }
  return "?";
}

Kernel Kernel::dense(std::vector<std::vector<ExtReal>> rows) {
  Index n = static_cast<Index>(rows.size());
  std::vector<ExtReal> flat;
  for (auto& r : rows) {
    if (static_cast<Index>(r.size()) != n) throw std::invalid_argument("kernel table is not square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return dense(n, std::move(flat));
}

Kernel Kernel::dense(Index n, std::vector<ExtReal> row_major) {
  if (static_cast<Index>(row_major.size()) != n * n)
    throw std::invalid_argument("kernel table is not square");
  for (auto e : row_major)
    if (e.is_top()) throw std::invalid_argument("kernel entries cannot be +inf");
  return Kernel(IndexSet::finite(n), Dense{n, std::move(row_major)});
}

Kernel Kernel::banded(IndexSet set, Index period, std::vector<ExtReal> diagonal, Index width,
                      std::vector<std::vector<ExtReal>> band, KernelTail tail) {
  if (set.is_finite()) throw std::invalid_argument("banded kernels live on N or Z");
  if (period < 1) throw std::invalid_argument("period must be >= 1");
  if (width < 0) throw std::invalid_argument("band width must be >= 0");
  if (static_cast<Index>(diagonal.size()) != period)
    throw std::invalid_argument("diagonal table length must equal the period");
  if (static_cast<Index>(band.size()) != 2 * width)
    throw std::invalid_argument("band needs one table per offset -W..-1,1..W");
  for (auto& t : band)
    if (static_cast<Index>(t.size()) != period)
      throw std::invalid_argument("band table length must equal the period");
  return Kernel(set, Banded{period, std::move(diagonal), width, std::move(band), tail});
}

Kernel Kernel::banded_uniform(IndexSet set, ExtReal diagonal, std::vector<ExtReal> band_by_offset,
                              KernelTail tail) {
  Index w = static_cast<Index>(band_by_offset.size()) / 2;
  std::vector<std::vector<ExtReal>> band;
  for (auto v : band_by_offset) band.push_back({v});
  return banded(set, 1, {diagonal}, w, std::move(band), tail);
}

Kernel Kernel::transformed(const Kernel& base, const Bijection& H, const Bijection& K,
                           const Func& phi, const Func& psi) {
  const IndexSet& set = base.index_set();
  auto check_bij = [&](const Bijection& F) {
    if (F.support().empty()) return;
    if (!set.contains(F.support().lo) || !set.contains(F.support().hi))
      throw std::invalid_argument("similarity bijection moves points outside the index set");
  };
  check_bij(H);
  check_bij(K);
  if (set.is_finite()) {
    Index n = set.size();
    std::vector<ExtReal> e;
    e.reserve(static_cast<size_t>(n * n));
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) e.push_back(base(H(x), K(y)) - phi(x) - psi(y));
    return dense(n, std::move(e));
  }
  return Kernel(set, Transformed{std::make_shared<const Kernel>(base), H, K, phi, psi});
}

ExtReal Kernel::operator()(Index x, Index y) const {
  if (!set_.contains(x) || !set_.contains(y)) return ExtReal::bottom();
  if (auto* d = std::get_if<Dense>(&body_)) return d->entries[static_cast<size_t>(x * d->n + y)];
  if (auto* b = std::get_if<Banded>(&body_)) {
    Index k = y - x;
    Index r = positive_mod(x, b->period);
    if (k == 0) return b->diagonal[static_cast<size_t>(r)];
    Index ak = k < 0 ? -k : k;
    if (ak > b->width) return b->tail.at(ak);
    size_t slot = static_cast<size_t>(k < 0 ? k + b->width : k + b->width - 1);
    return b->band[slot][static_cast<size_t>(r)];
  }
  const auto& t = std::get<Transformed>(body_);
  return (*t.base)(t.H(x), t.K(y)) - t.phi(x) - t.psi(y);
}

Index Kernel::band_radius() const {
  if (auto* d = std::get_if<Dense>(&body_)) return d->n;
  if (auto* b = std::get_if<Banded>(&body_)) return b->width;
  const auto& t = std::get<Transformed>(body_);
  return t.base->band_radius() + rho(t.H) + rho(t.K);
}

bool Kernel::tail_finite() const {
  if (is_dense()) return false;
  if (auto* b = std::get_if<Banded>(&body_)) return b->tail.family != TailFamily::MinusInfinity;
  return std::get<Transformed>(body_).base->tail_finite();
}

ExtReal Kernel::envelope(Index m) const {
  if (auto* d = std::get_if<Dense>(&body_)) {
    ExtReal best = ExtReal::bottom();
    for (Index x = 0; x < d->n; ++x)
      for (Index y = 0; y < d->n; ++y)
        if (IndexSet::distance(x, y) >= m) best = oplus(best, (*this)(x, y));
    return best;
  }
  if (auto* b = std::get_if<Banded>(&body_)) {
    ExtReal best = ExtReal::bottom();
    if (m <= 0)
      for (auto v : b->diagonal) best = oplus(best, v);
    for (Index k = -b->width; k <= b->width; ++k) {
      if (k == 0 || (k < 0 ? -k : k) < m) continue;
      size_t slot = static_cast<size_t>(k < 0 ? k + b->width : k + b->width - 1);
      for (auto v : b->band[slot]) best = oplus(best, v);
    }
    return oplus(best, b->tail.sup_from(std::max(m, b->width + 1)));
  }
  const auto& t = std::get<Transformed>(body_);
  Index shift = rho(t.H) + rho(t.K);
  ExtReal base = t.base->envelope(std::max<Index>(0, m - shift));
  return base - t.phi.inf_over(set_) - t.psi.inf_over(set_);
}

ExtReal Kernel::profile(Index m) const {
  if (auto* d = std::get_if<Dense>(&body_)) {
    ExtReal best = ExtReal::bottom();
    for (Index x = 0; x < d->n; ++x)
      for (Index y = 0; y < d->n; ++y)
        if (IndexSet::distance(x, y) == m) best = oplus(best, (*this)(x, y));
    return best;
  }
  if (auto* b = std::get_if<Banded>(&body_)) {
    if (m == 0) {
      ExtReal best = ExtReal::bottom();
      for (auto v : b->diagonal) best = oplus(best, v);
      return best;
    }
    if (m > b->width) return b->tail.at(m);
    ExtReal best = ExtReal::bottom();
    for (auto v : b->band[static_cast<size_t>(b->width - m)]) best = oplus(best, v);
    for (auto v : b->band[static_cast<size_t>(b->width + m - 1)]) best = oplus(best, v);
    return best;
  }
  return envelope(m);
}

bool Kernel::satisfies_tc() const {
  if (is_dense()) return true;
  if (auto* b = std::get_if<Banded>(&body_)) return b->tail.tends_to_bottom();
  return std::get<Transformed>(body_).base->satisfies_tc();
}

ExtReal Kernel::diagonal_lower_bound() const {
  if (auto* d = std::get_if<Dense>(&body_)) {
    ExtReal best = ExtReal::top();
    for (Index x = 0; x < d->n; ++x) best = std::min(best, (*this)(x, x));
    return best;
  }
  if (auto* b = std::get_if<Banded>(&body_)) {
    ExtReal best = ExtReal::top();
    for (auto v : b->diagonal) best = std::min(best, v);
    return best;
  }
  const auto& t = std::get<Transformed>(body_);
  ExtReal best = t.base->diagonal_lower_bound() - t.phi.sup_over(set_) - t.psi.sup_over(set_);
  Window w = set_.clip(t.H.support().hull(t.K.support()));
  for (Index x = w.lo; x <= w.hi; ++x) best = std::min(best, (*this)(x, x));
  return best;
}

Kernel Kernel::transpose() const {
  if (auto* d = std::get_if<Dense>(&body_)) {
    std::vector<ExtReal> e(d->entries.size());
    for (Index x = 0; x < d->n; ++x)
      for (Index y = 0; y < d->n; ++y) e[static_cast<size_t>(y * d->n + x)] = (*this)(x, y);
    return dense(d->n, std::move(e));
  }
  if (auto* b = std::get_if<Banded>(&body_)) {
    // bT_{x,x+k} = b_{x+k,x}: offset -k read at residue (x+k) mod p
    std::vector<std::vector<ExtReal>> band(b->band.size(), std::vector<ExtReal>(static_cast<size_t>(b->period)));
    for (Index k = -b->width; k <= b->width; ++k) {
      if (k == 0) continue;
      size_t slot = static_cast<size_t>(k < 0 ? k + b->width : k + b->width - 1);
      Index mk = -k;
      size_t src = static_cast<size_t>(mk < 0 ? mk + b->width : mk + b->width - 1);
      for (Index r = 0; r < b->period; ++r)
        band[slot][static_cast<size_t>(r)] = b->band[src][static_cast<size_t>(positive_mod(r + k, b->period))];
    }
    return Kernel(set_, Banded{b->period, b->diagonal, b->width, std::move(band), b->tail});
  }
  const auto& t = std::get<Transformed>(body_);
  return Kernel(set_, Transformed{std::make_shared<const Kernel>(t.base->transpose()), t.K, t.H, t.psi, t.phi});
}

std::vector<std::vector<ExtReal>> Kernel::rows() const {
  const auto& d = dense_body();
  std::vector<std::vector<ExtReal>> r(static_cast<size_t>(d.n));
  for (Index x = 0; x < d.n; ++x)
    for (Index y = 0; y < d.n; ++y) r[static_cast<size_t>(x)].push_back((*this)(x, y));
  return r;
}

bool Kernel::operator==(const Kernel& o) const {
  if (!(set_ == o.set_) || body_.index() != o.body_.index()) return false;
  if (is_dense()) return dense_body().entries == o.dense_body().entries;
  if (is_banded()) {
    const auto &a = banded_body(), &b = o.banded_body();
    return a.period == b.period && a.diagonal == b.diagonal && a.width == b.width && a.band == b.band &&
           a.tail == b.tail;
  }
  const auto &a = transformed_body(), &b = o.transformed_body();
  return *a.base == *b.base && a.H == b.H && a.K == b.K && a.phi == b.phi && a.psi == b.psi;
}

}  // namespace tropreg
