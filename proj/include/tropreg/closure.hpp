#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropreg/bijection.hpp"
#include "tropreg/func.hpp"
#include "tropreg/kernel.hpp"

namespace tropreg {

/// Maximal path weights c⁺ on a window section (paths of length >= 1 whose
/// vertices stay in the window). Entries are +∞ (ExtReal::top()) when a
/// positive circuit can be inserted.
struct ClosureResult {
  Window window;
  std::vector<std::vector<ExtReal>> plus;  // [x - lo][y - lo]
  bool positive_circuit = false;
  std::vector<Index> circuit;  // x0 -> x1 -> ... -> x0 (first vertex not repeated)
  double circuit_weight = 0.0;
  Index iterations = 0;

  ExtReal at(Index x, Index y) const {
    return plus[static_cast<size_t>(x - window.lo)][static_cast<size_t>(y - window.lo)];
  }
};

ClosureResult kleene_plus(const Kernel& c, const Window& window);

/// Deviation kernel b̃_xy = b_{xF(y)} − b_{yF(y)} as a dense kernel on the
/// window section (point window.lo + i becomes index i).
/// Throws std::invalid_argument when some b_{yF(y)} is −∞.
Kernel btilde(const Kernel& k, const Bijection& F, const Window& window);

struct Potentials {
  Window window;
  std::vector<ExtReal> phi, psi;  // φ̄ (row sups) and ψ̄ (column sups), +∞ allowed
  bool phi_finite = false, psi_finite = false;
  bool nonnegative = false;
  // fixed-point identities, evaluated on the section
  bool phi_row_fixed = false;   // φ̄_x = sup_y (b̃_xy + φ̄_y)
  bool psi_col_fixed = false;   // ψ̄_y = sup_x (b̃_xy + ψ̄_x)
  std::optional<bool> neg_psi_row_fixed;  // −ψ̄ solves the row equation, when ψ̄ is finite
  std::optional<bool> neg_phi_col_fixed;  // −φ̄ solves the column equation, when φ̄ is finite
  bool phi_closure_fixed = false;         // φ̄_x = sup_y (b̃⁺_xy + φ̄_y)
  std::optional<bool> neg_psi_closure_fixed;
  bool sup_identity = false;    // sup φ̄ = sup ψ̄ = sup b̃⁺
  bool far_nonpositive = false; // limsup of b̃⁺ at infinity <= 0 (outer-band proxy when countable)
  bool pc = false;              // one potential lies in the target space (window proxy when countable)
  bool window_relative = false;
  std::vector<std::string> notes;
};

/// Potentials of b̃ from its closure, with every identity checked.
/// `countable` switches the limsup and space checks to their window proxies.
Potentials potentials(const Kernel& bt, const ClosureResult& closure, bool countable = false,
                      double tol = 1e-9);

struct Eq110Report {
  bool fixed_point = false;     // f_x = sup_y (b̃_xy + f_y) on the window
  bool conjugate_form = false;  // f = Bψ with ψ_y = b_{F⁻¹(y)y} − f_{F⁻¹(y)}
  bool equivalent = false;
  bool holds() const { return fixed_point && conjugate_form; }
  std::optional<Index> witness;  // first x where the fixed-point form fails
};
/// Evaluates both forms on the window section; F must map the window onto itself.
Eq110Report check_eq_1_10(const Kernel& k, const Bijection& F, const Func& f,
                          const Window& window, double tol = 0.0);

}  // namespace tropreg
