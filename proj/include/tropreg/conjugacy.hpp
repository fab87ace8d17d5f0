#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropreg/func.hpp"
#include "tropreg/kernel.hpp"

namespace tropreg {

enum class Certainty { Exact, WithinEps };
enum class Verdict { True, False, Inconclusive };
std::string verdict_name(Verdict v);

/// A supremum evaluated on a finite search range. Exact means the bound on
/// everything outside that range is strictly below `value`; WithinEps(eps)
/// means the true supremum lies in [value, value + eps].
struct CertifiedValue {
  ExtReal value;
  Certainty status = Certainty::Exact;
  double eps = 0.0;
  std::vector<Index> argmax;  // in-range maximisers (only real values)
  bool exact() const { return status == Certainty::Exact; }
};

/// Certified values on a window of consecutive points.
struct CertifiedFunc {
  Window window;
  std::vector<CertifiedValue> values;
  /// Known bounds on the function over the whole index set.
  double lower = -kInf, upper = kInf;

  const CertifiedValue& at(Index x) const { return values.at(static_cast<size_t>(x - window.lo)); }
  bool all_exact() const;
  double max_eps() const;
  /// Plain function: window values, given tail elsewhere. Throws if some value is −∞.
  Func to_func(FuncTail tail = FuncTail::zero()) const;
};

struct ConjugacyOptions {
  /// Search range for window W is W widened by (enlargement - 1)·|W| per side.
  double enlargement = 2.0;
};

/// Search range used for a window, clipped to the index set.
Window search_range(const IndexSet& set, const Window& w, const ConjugacyOptions& opt = {});

/// (Bf)_x = sup_y (b_xy − f_y) for x in `window`.
CertifiedFunc apply_B(const Kernel& k, const Func& f, const Window& window, const ConjugacyOptions& opt = {});
/// (Bᵀg)_y = sup_x (b_xy − g_x) for y in `window`.
CertifiedFunc apply_BT(const Kernel& k, const Func& g, const Window& window, const ConjugacyOptions& opt = {});

/// Same operators applied to a previously certified result. Points beyond the
/// operand window are handled through its global bounds; uncertainty in the
/// operand widens the output interval.
CertifiedFunc apply_B(const Kernel& k, const CertifiedFunc& f, const Window& window, const ConjugacyOptions& opt = {});
CertifiedFunc apply_BT(const Kernel& k, const CertifiedFunc& g, const Window& window, const ConjugacyOptions& opt = {});

struct GaloisReport {
  Verdict status = Verdict::Inconclusive;
  std::optional<Index> mismatch;
};
/// B Bᵀ B f = B f on `window`, computed on three nested windows.
GaloisReport galois_check(const Kernel& k, const Func& f, const Window& window, const ConjugacyOptions& opt = {});

struct EquationResult {
  Verdict status = Verdict::Inconclusive;
  CertifiedFunc candidate;  // Bᵀg
  double residual = kInf;   // max |B Bᵀg − g| on the window
  std::optional<Index> witness;  // a point where Bf < g
};
/// Solves Bf = g on `window` through the candidate f = Bᵀg.
EquationResult solve_equation(const Kernel& k, const Func& g, const Window& window, const ConjugacyOptions& opt = {});

}  // namespace tropreg
