#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropreg/func.hpp"
#include "tropreg/kernel.hpp"
#include "tropreg/similarity.hpp"
#include "tropreg/subdiff.hpp"

namespace tropreg {

/// Raised when b_xy + φ_y <= φ_x fails for some x != y.
class SaturationViolation : public std::invalid_argument {
 public:
  SaturationViolation(Index x, Index y, const std::string& what) : std::invalid_argument(what), x(x), y(y) {}
  Index x, y;
};

/// Saturation graph of (b, φ): edges x -> y, x != y, with b_xy + φ_y = φ_x.
/// Vertices are points of `window`; saturated neighbours outside it appear as
/// ghosts, whose own edges are unknown. Path lengths through a ghost or a
/// circuit are unbounded (nullopt).
struct SatGraph {
  Window window;
  Index reach = 0;  // no saturated edge is longer than this
  std::vector<Index> vertices;  // V ∩ window, increasing
  std::vector<Index> ghosts;    // saturated neighbours outside the window
  std::vector<std::pair<Index, Index>> edges;
  std::map<Index, std::vector<Index>> out, in;  // adjacency, ghosts included
  std::vector<std::optional<Index>> lp, ep;  // per window point, [x - window.lo]
  std::vector<Index> initial, final_points;  // I0 and F0 among window vertices

  bool is_ghost(Index x) const { return !window.contains(x); }
  std::optional<Index> lp_at(Index x) const { return lp[static_cast<size_t>(x - window.lo)]; }
  std::optional<Index> ep_at(Index x) const { return ep[static_cast<size_t>(x - window.lo)]; }
  /// {x in V : lp(x) = n} and {x in V : ep(x) = n}; n = -1 selects the unbounded ones.
  std::vector<Index> final_level(Index n) const;
  std::vector<Index> initial_level(Index n) const;
};

/// Smallest m >= band radius with envelope(m + 1) + spread < 0, capped at `cap`
/// (when the tail never gets there). `spread` bounds sup φ − inf φ.
Index saturation_reach(const Kernel& k, double spread, Index cap);

/// Throws SaturationViolation when b_xy + φ_y <= φ_x fails on the window.
SatGraph build_sat_graph(const Kernel& k, const Func& phi, const Window& window, double spread = 0.5);

struct StructuralReport {
  std::optional<std::vector<Index>> circuit;  // x0 -> ... -> x0, first vertex not repeated
  /// Saturated path linking ghosts on opposite sides of the window.
  std::optional<std::vector<Index>> string_path;
  Index max_degree = 0;
  Index degree_bound = 0;  // points in a ball of radius `reach`, minus the centre
  bool degrees_ok = true;
  bool lp_or_ep_finite = true;
  bool end_points_exist = true;
  bool window_relative = false;
  bool ok() const { return !circuit && !string_path && degrees_ok && lp_or_ep_finite && end_points_exist; }
};
StructuralReport structural_checks(const SatGraph& g);

enum class PeelMode { Final, Initial };
std::string peel_mode_name(PeelMode m);

struct PeelRecord {
  Index round = 0;
  PeelMode mode = PeelMode::Final;
  std::vector<Index> removed;
  std::vector<double> deltas;  // φ' − φ at each removed vertex
};

struct PerestroikaState {
  Func phi;     // current potential, explicit on the working window, 0 outside
  Func phi0;    // starting potential
  Func budget;  // ψ > 0
  double spread = 0.5;
  std::vector<PeelRecord> history;
};

/// One P_F (final points lowered) or P_I (initial points raised) step on the window.
/// Throws std::logic_error if an end point has no slack, which finality rules out.
PerestroikaState peel_step(const PerestroikaState& s, const Kernel& k, PeelMode mode, const Window& window);

/// ψ_x = eps · 2^(−d(x, centre)).
Func default_budget(const Window& window, double eps = 0.25);

enum class FindingKind { Circuit, String, Unresolved, RoundLimit };
std::string finding_name(FindingKind k);

struct Finding {
  FindingKind kind = FindingKind::Circuit;
  std::vector<Index> structure;
  std::string advice;
};

struct PerestroikaOptions {
  Index max_rounds = 10000;
  /// Padding of the working window; < 0 picks 2 · reach + 2.
  Index pad = -1;
  bool retry = true;
  double budget_eps = 0.25;
};

struct PerestroikaResult {
  Window window;          // requested window
  Window working;         // padded window the peeling ran on
  Func phi;               // the strict potential
  Func budget;
  double margin = 0.0;    // min over x != y in the window of φ_x − b_xy − φ_y
  bool within_budget = false;
  bool window_relative = false;
  Index rounds = 0;
  std::vector<PeelRecord> trace;
  std::optional<Finding> finding;
  bool ok() const { return !finding.has_value(); }
  /// c_xy = b_xy + φ_y − φ_x as a right similarity.
  Similarity similarity() const;
};

/// P_F to stabilisation, then P_I. Needs a normal kernel; without a budget the
/// default one centred on `window` is used.
PerestroikaResult run_perestroika(const Kernel& k, const std::optional<Func>& budget, const Window& window,
                                  const PerestroikaOptions& opt = {});

struct PipelineReport {
  RegularityCertificate certificate;
  std::optional<Normalization> normalization;
  std::optional<PerestroikaResult> run;
  std::vector<Func> candidates;
  std::vector<std::string> notes;
};

/// Normalise (finite kernels), peel, push the resulting witness in front of the
/// default candidates 0 and the assignment duals, then decide.
PipelineReport certify_strong_regularity(const Kernel& k, const Window& window, const PerestroikaOptions& opt = {});

}  // namespace tropreg
