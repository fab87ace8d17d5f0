#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tropreg/assignment.hpp"
#include "tropreg/conjugacy.hpp"

namespace tropreg {

/// A subdifferential restricted to a window. `certain` is false when some
/// member could not be confirmed or excluded.
struct SubdiffSet {
  std::vector<Index> members;
  bool certain = true;
};

/// ∂f(y) = {x : b_xy real and (Bf)_x = b_xy − f_y}, x in `window`.
SubdiffSet subdiff(const Kernel& k, const Func& f, Index y, const Window& window);
/// ∂ᵀg(x) = {y : b_xy real and (Bᵀg)_y = b_xy − g_x}, y in `window`.
SubdiffSet subdiffT(const Kernel& k, const Func& g, Index x, const Window& window);

struct IdentityCheck {
  Verdict status = Verdict::Inconclusive;
  bool applicable = true;  // false when g != B Bᵀ g
  std::optional<Index> mismatch;
};
/// (∂ᵀg)⁻¹(y) = ∂(Bᵀg)(y) for every y in the window, provided g = B Bᵀ g.
IdentityCheck inverse_subdiff_identity_check(const Kernel& k, const Func& g, const Window& window);

/// The family {(∂ᵀg)⁻¹(y)}_y seen from a window W.
///  - sets[y] lists x in the outer range with y ∈ ∂ᵀg(x), for y in the column range;
///  - covers: every x in W meets some set;
///  - essential[y] (y in W): some x has ∂ᵀg(x) = {y};
///  - minimal: covers and every y in W is essential.
/// On a finite set all three ranges are the whole set.
struct Covering {
  Window window, outer, columns;
  Func g;
  CertifiedFunc f;  // Bᵀg on `columns`
  std::map<Index, std::vector<Index>> sets;
  std::map<Index, std::vector<Index>> targets;  // x in outer -> ∂ᵀg(x)
  std::map<Index, bool> essential;
  std::vector<Index> uncovered, inessential;
  bool covers = false, minimal = false, certain = true;
};
Covering build_covering(const Kernel& k, const Func& g, const Window& window, const ConjugacyOptions& opt = {});

/// h = Bᵀg + δ_{y0}, checked to satisfy Bh = g. Throws std::invalid_argument when y0 is essential.
struct SecondSolution {
  Func h;
  Verdict verified = Verdict::Inconclusive;
  Index y0 = 0;
};
SecondSolution second_solution(const Kernel& k, const Covering& cov, Index y0);

enum class RegularityStatus { Certified, Refuted, NoWitnessFound };
enum class RefutationKind {
  None,
  SecondSolution,
  SecondOptimalAssignment,
  NoFiniteAssignment,
  MinusInfinityLine,  // a row or column of −∞ entries (ZC fails)
  TailCounterExample
};
std::string regularity_name(RegularityStatus s);
std::string refutation_name(RefutationKind r);

struct RegularityCertificate {
  RegularityStatus status = RegularityStatus::NoWitnessFound;
  RefutationKind refutation = RefutationKind::None;
  bool window_relative = false;  // countable set, or TC fails
  Window window;
  std::optional<Func> g;
  std::optional<CertifiedFunc> f;
  std::optional<Bijection> F;
  double margin = 0.0;
  Index displacement = 0;     // max d(x, F(x)) on the window
  bool condition_iii = false;
  std::optional<Func> second;            // SecondSolution witness h
  std::optional<Bijection> second_assignment;
  size_t candidate = 0;                  // index of the certifying candidate
  std::vector<std::string> notes;
};

/// Tries each candidate g in turn (g = 0 when the list is empty). A candidate
/// certifies when every x of the window has ∂ᵀg(x) = {F(x)} and
/// (∂ᵀg)⁻¹(F(x)) = {x}, with strict margin. On finite kernels a failed search
/// becomes a refutation when the optimal assignment is not unique, or when
/// every bijection meets a −∞ entry (a certificate would give a finite one).
RegularityCertificate decide_strong_regularity(const Kernel& k, const std::vector<Func>& candidates,
                                               const Window& window, const ConjugacyOptions& opt = {});

/// Evidence that a kernel violating tightness is not l1-strongly regular:
/// f = Bᵀ0 = 0 solves Bf = 0, while h_x = 1/(x+1)^2 is a second l1 solution.
struct TailRefutation {
  Window window;
  bool tc_fails = false;
  bool bt_zero_is_zero = false;   // Bᵀ0 = 0 exactly on the window
  bool bh_is_zero = false;        // 0 lies in every certified interval of Bh
  double eps = 0.0;               // largest certified width
  bool h_in_l1 = false;
  bool distinct = false;
  bool refutes() const { return tc_fails && bt_zero_is_zero && bh_is_zero && h_in_l1 && distinct; }
  CertifiedFunc bh;
};
TailRefutation tail_refutation(const Kernel& k, Index N, const ConjugacyOptions& opt = {});

}  // namespace tropreg
