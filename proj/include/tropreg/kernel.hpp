#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tropreg/bijection.hpp"
#include "tropreg/ext_real.hpp"
#include "tropreg/func.hpp"
#include "tropreg/index_set.hpp"

namespace tropreg {

enum class TailFamily { MinusInfinity, Linear, Power, Reciprocal };

/// Value of a banded kernel at distances beyond its band, as a function of
/// the distance d >= 1:
///   Linear(a, b):     -a d - b      (a > 0)
///   Power(c, q):      -c d^q        (c, q > 0)
///   Reciprocal(c, q): -c d^(-q)     (c, q > 0; tends to 0, violates tightness)
struct KernelTail {
  TailFamily family = TailFamily::MinusInfinity;
  double p1 = 0.0;
  double p2 = 0.0;

  static KernelTail minus_infinity() { return {}; }
  static KernelTail linear(double a, double b);
  static KernelTail power(double c, double q);
  static KernelTail reciprocal(double c, double q);

  ExtReal at(Index d) const;
  /// sup over distances >= d (d >= 1).
  ExtReal sup_from(Index d) const;
  /// Whether that supremum is attained (false only for Reciprocal).
  bool sup_attained() const { return family != TailFamily::Reciprocal; }
  bool tends_to_bottom() const { return family != TailFamily::Reciprocal; }
  std::string name() const;
  bool operator==(const KernelTail&) const = default;
};

/// Kernel b: X × X -> R ∪ {−∞}. Three representations:
///  - dense n×n table on a finite index set;
///  - periodic band on N or Z: diagonal and band tables indexed by x mod p,
///    offsets 1 <= |y - x| <= W, parametric tail beyond;
///  - a similarity transform c_xy = b_{H(x)K(y)} − φ_x − ψ_y of a countable
///    base kernel with windowed H, K.
class Kernel {
 public:
  struct Dense {
    Index n;
    std::vector<ExtReal> entries;  // row-major
  };
  struct Banded {
    Index period;
    std::vector<ExtReal> diagonal;          // [x mod p]
    Index width;
    std::vector<std::vector<ExtReal>> band;  // offsets -W..-1, 1..W; each [x mod p]
    KernelTail tail;
  };
  struct Transformed {
    std::shared_ptr<const Kernel> base;
    Bijection H, K;
    Func phi, psi;
  };

  static Kernel dense(std::vector<std::vector<ExtReal>> rows);
  static Kernel dense(Index n, std::vector<ExtReal> row_major);
  /// `band` lists offsets -W..-1 then 1..W.
  static Kernel banded(IndexSet set, Index period, std::vector<ExtReal> diagonal, Index width,
                       std::vector<std::vector<ExtReal>> band, KernelTail tail);
  /// Shorthand: constant diagonal and constant band value per offset.
  static Kernel banded_uniform(IndexSet set, ExtReal diagonal, std::vector<ExtReal> band_by_offset,
                               KernelTail tail);
  /// c_xy = base_{H(x)K(y)} − phi_x − psi_y. Finite bases are materialised.
  static Kernel transformed(const Kernel& base, const Bijection& H, const Bijection& K,
                            const Func& phi, const Func& psi);

  const IndexSet& index_set() const { return set_; }
  bool is_dense() const { return std::holds_alternative<Dense>(body_); }
  bool is_banded() const { return std::holds_alternative<Banded>(body_); }
  bool is_transformed() const { return std::holds_alternative<Transformed>(body_); }
  const Dense& dense_body() const { return std::get<Dense>(body_); }
  const Banded& banded_body() const { return std::get<Banded>(body_); }
  const Transformed& transformed_body() const { return std::get<Transformed>(body_); }

  /// b_xy; −∞ for points outside the index set.
  ExtReal operator()(Index x, Index y) const;
  Index size() const { return set_.size(); }

  /// Entries at distance > band_radius() come from the tail (countable kernels).
  Index band_radius() const;
  /// Whether every tail entry is real.
  bool tail_finite() const;
  /// Upper bound on sup{ b_xy : d(x,y) >= m }; exact for dense and banded kernels.
  ExtReal envelope(Index m) const;
  /// Largest entry at distance exactly m (dense and banded), else envelope(m).
  ExtReal profile(Index m) const;
  bool satisfies_tc() const;
  /// Lower bound on inf_x b_xx (−∞ if some diagonal entry is −∞).
  ExtReal diagonal_lower_bound() const;
  ExtReal sup_entry() const { return envelope(0); }

  Kernel transpose() const;
  std::vector<std::vector<ExtReal>> rows() const;  // dense only

  bool operator==(const Kernel& o) const;

 private:
  Kernel(IndexSet set, std::variant<Dense, Banded, Transformed> body)
      : set_(set), body_(std::move(body)) {}

  IndexSet set_;
  std::variant<Dense, Banded, Transformed> body_;
};

inline Index positive_mod(Index x, Index p) {
  Index r = x % p;
  return r < 0 ? r + p : r;
}

}  // namespace tropreg
