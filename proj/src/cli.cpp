#include "tropreg/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

#include "tropreg/closure.hpp"
#include "tropreg/core.hpp"
#include "tropreg/perestroika.hpp"
#include "tropreg/similarity.hpp"

namespace tropreg {

using nlohmann::json;

std::string exit_name(ExitCode c) {
  switch (c) {
    case ExitCode::Positive: return "positive";
    case ExitCode::Refuted: return "refuted";
    case ExitCode::Inconclusive: return "inconclusive";
    case ExitCode::InputError: return "input_error";
  }
  return "?";
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check",     "assign", "unique", "normalize",  "closure",
                                              "potentials", "sat",   "perestroika", "regular", "invariance"};
  return names;
}

namespace {

std::string mode_name(SolutionMode m) { return m == SolutionMode::Compact ? "compact" : "balls"; }

std::string set_name(const IndexSet& s) {
  switch (s.kind()) {
    case IndexKind::Finite: return "finite " + std::to_string(s.size());
    case IndexKind::Naturals: return "naturals";
    case IndexKind::Integers: return "integers";
  }
  return "?";
}

// JSON has no infinities; they travel as strings.
json jx(ExtReal v) {
  if (v.is_bottom()) return "-inf";
  if (v.is_top()) return "inf";
  return v.value();
}
json jx(double v) { return jx(ExtReal(v)); }

template <class T>
json jlist(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& e : v) {
    if constexpr (std::is_same_v<T, Index>)
      a.push_back(e);
    else
      a.push_back(jx(e));
  }
  return a;
}

json jfunc(const Func& f, const Window& w) {
  json a = json::array();
  for (Index x = w.lo; x <= w.hi; ++x) a.push_back(jx(f(x)));
  return a;
}

json jbij(const Bijection& F, const Window& w) {
  json a = json::array();
  for (Index x = w.lo; x <= w.hi; ++x) a.push_back(F(x));
  return a;
}

json jwin(const Window& w) { return json::array({w.lo, w.hi}); }

std::string num(ExtReal v) { return format_number(v); }
std::string num(double v) { return format_number(v); }

template <class T>
std::string list(const std::vector<T>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, Index>)
      s += std::to_string(v[i]);
    else
      s += num(v[i]);
  }
  return s + ")";
}

std::string func_text(const Func& f, const Window& w) {
  std::vector<double> v;
  for (Index x = w.lo; x <= w.hi; ++x) v.push_back(f(x));
  return list(v);
}

std::string bij_text(const Bijection& F, const Window& w) {
  std::vector<Index> v;
  for (Index x = w.lo; x <= w.hi; ++x) v.push_back(F(x));
  return list(v);
}

Bijection from_perm(const Perm& p) { return Bijection({0, static_cast<Index>(p.size()) - 1}, p); }

class Run {
 public:
  Run(std::string command, const KernelFile& file, const CommandOptions& opt)
      : k(file.kernel), command_(std::move(command)), file_(file), opt_(opt) {
    const IndexSet& set = k.index_set();
    w = set.is_finite() ? set.full_window() : set.window(opt.window);
    relative = !set.is_finite();
    text << command_ << " on " << set_name(set) << ", window [" << w.lo << ", " << w.hi << "]\n";
  }

  json provenance() const {
    return {{"index_set", set_name(k.index_set())},
            {"window", jwin(w)},
            {"window_relative", relative},
            {"distance", opt_.distance},
            {"mode", mode_name(opt_.mode)},
            {"seed", opt_.seed},
            {"file_version", file_.version},
            {"tolerances", {{"closure", opt_.tol}, {"enlargement", opt_.enlargement}, {"budget_eps", opt_.budget_eps}}}};
  }

  void trace(json data) {
    records.push_back({{"schema", kReportSchema},
                       {"command", command_},
                       {"record", "trace"},
                       {"seq", records.size()},
                       {"provenance", provenance()},
                       {"data", std::move(data)}});
  }

  CommandResult finish(ExitCode code, const std::string& verdict, json data) {
    records.push_back({{"schema", kReportSchema},
                       {"command", command_},
                       {"record", "result"},
                       {"seq", records.size()},
                       {"verdict", verdict},
                       {"exit", static_cast<int>(code)},
                       {"exit_name", exit_name(code)},
                       {"provenance", provenance()},
                       {"data", std::move(data)}});
    if (relative) text << "window-relative: the verdict covers [" << w.lo << ", " << w.hi << "] only\n";
    text << "verdict: " << verdict << "\n";
    return {code, text.str(), std::move(records)};
  }

  const KernelFile& file() const { return file_; }
  const CommandOptions& opt() const { return opt_; }

  const Kernel& k;
  Window w;
  bool relative = false;
  std::ostringstream text;
  std::vector<json> records;

 private:
  std::string command_;
  const KernelFile& file_;
  const CommandOptions& opt_;
};

json normal_json(const NormalReport& r) {
  json j{{"ok", r.ok}, {"margin", jx(r.margin)}, {"margin_attained", r.margin_attained}, {"detail", r.detail}};
  j["offending"] = r.offending ? json::array({r.offending->first, r.offending->second}) : json(nullptr);
  return j;
}

std::string normal_text(const NormalReport& r) {
  std::string s = r.ok ? "yes, margin " + num(r.margin) : "no";
  if (r.ok && !r.margin_attained) s += " (not attained)";
  if (r.offending) s += " at (" + std::to_string(r.offending->first) + ", " + std::to_string(r.offending->second) + ")";
  if (!r.detail.empty()) s += ": " + r.detail;
  return s;
}

void print_table(std::ostream& out, const std::vector<std::vector<ExtReal>>& rows, Index lo) {
  out << std::setw(6) << "";
  for (size_t j = 0; j < rows.size(); ++j) out << std::setw(10) << lo + static_cast<Index>(j);
  out << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out << std::setw(6) << lo + static_cast<Index>(i);
    for (auto e : rows[i]) out << std::setw(10) << num(e);
    out << "\n";
  }
}

json table_json(const std::vector<std::vector<ExtReal>>& rows) {
  json t = json::array();
  for (auto& r : rows) t.push_back(jlist(r));
  return t;
}

CommandResult need_finite(Run& r) {
  r.text << "this command needs a finite kernel\n";
  return r.finish(ExitCode::InputError, "error", {{"message", "finite kernel required"}});
}

PerestroikaOptions peel_options(const CommandOptions& o) {
  PerestroikaOptions p;
  p.budget_eps = o.budget_eps;
  return p;
}

// ---- commands --------------------------------------------------------------

CommandResult cmd_check(Run& r) {
  auto zc = check_zc(r.k, r.w);
  auto tc = check_tc(r.k);
  auto nr = is_normal(r.k, r.w);
  auto sn = is_strongly_normal(r.k, r.w);
  r.text << "ZC  " << (zc.ok ? "holds" : "fails");
  if (!zc.ok) r.text << ": zero rows " << list(zc.bad_rows) << ", zero columns " << list(zc.bad_cols);
  r.text << "\nTC  " << (tc.holds ? "holds" : "fails") << "\n";
  r.text << std::setw(6) << "m" << std::setw(14) << "envelope" << " " << std::setw(24) << "profile" << "\n";
  for (size_t m = 0; m < tc.envelope.size(); ++m)
    r.text << std::setw(6) << m + 1 << std::setw(14) << num(tc.envelope[m]) << " " << std::setw(24) << num(tc.profile[m])
           << "\n";
  r.text << "normal           " << normal_text(nr) << "\nstrongly normal  " << normal_text(sn) << "\n";
  json data{{"zc", {{"holds", zc.ok}, {"zero_rows", jlist(zc.bad_rows)}, {"zero_columns", jlist(zc.bad_cols)}}},
            {"tc", {{"holds", tc.holds}, {"envelope", jlist(tc.envelope)}, {"profile", jlist(tc.profile)}}},
            {"normal", normal_json(nr)},
            {"strongly_normal", normal_json(sn)}};
  std::vector<std::string> failed;
  if (!zc.ok) failed.push_back("ZC");
  if (!tc.holds) failed.push_back("TC");
  if (failed.empty()) return r.finish(ExitCode::Positive, "holds", data);
  std::string v = "fails:";
  for (size_t i = 0; i < failed.size(); ++i) v += (i ? "," : "") + failed[i];
  return r.finish(ExitCode::Refuted, v, data);
}

CommandResult cmd_assign(Run& r) {
  if (!r.k.index_set().is_finite()) return need_finite(r);
  try {
    auto a = solve_assignment(r.k);
    r.text << "optimal permutation " << list(a.perm) << "\nvalue " << num(a.value) << "\nrow duals    "
           << list(a.phi) << "\ncolumn duals " << list(a.psi) << "\nunique " << (a.unique ? "yes" : "no") << "\n";
    if (a.second) r.text << "second best " << list(*a.second) << ", gap " << num(a.gap) << "\n";
    return r.finish(ExitCode::Positive, "optimal",
                    {{"perm", jlist(a.perm)},
                     {"value", jx(a.value)},
                     {"phi", jlist(a.phi)},
                     {"psi", jlist(a.psi)},
                     {"unique", a.unique},
                     {"second", a.second ? jlist(*a.second) : json(nullptr)},
                     {"gap", jx(a.gap)}});
  } catch (const Infeasible&) {
    r.text << "every permutation meets a -inf entry\n";
    return r.finish(ExitCode::Refuted, "infeasible", json::object());
  }
}

CommandResult cmd_unique(Run& r) {
  if (r.k.index_set().is_finite()) {
    try {
      auto u = is_unique_optimal(r.k);
      r.text << "optimal permutation " << list(u.perm) << ", value " << num(u.value) << "\n";
      if (u.second) r.text << "another optimum " << list(*u.second) << "\n";
      json data{{"perm", jlist(u.perm)}, {"value", jx(u.value)}, {"second", u.second ? jlist(*u.second) : json(nullptr)}};
      return u.unique ? r.finish(ExitCode::Positive, "unique", data) : r.finish(ExitCode::Refuted, "not_unique", data);
    } catch (const Infeasible&) {
      r.text << "every permutation meets a -inf entry\n";
      return r.finish(ExitCode::Refuted, "infeasible", json::object());
    }
  }
  Bijection F = r.file().bijection.value_or(Bijection::identity());
  auto rep = verify_local_strong_solution(r.k, F, r.opt().distance, r.w, r.opt().mode);
  r.text << "candidate F " << bij_text(F, r.w) << ", distance " << r.opt().distance << ", mode "
         << mode_name(r.opt().mode) << "\nmargin " << num(rep.margin) << " over " << rep.tested_columns << " columns\n";
  json data{{"F", jbij(F, r.w)}, {"margin", jx(rep.margin)}, {"tested_columns", rep.tested_columns}};
  if (rep.verified) return r.finish(ExitCode::Positive, "verified", data);
  if (rep.violating) {
    data["violating"] = jbij(*rep.violating, r.w);
    r.text << "beaten by " << bij_text(*rep.violating, r.w) << "\n";
    return r.finish(ExitCode::Refuted, "violated", data);
  }
  return r.finish(ExitCode::Inconclusive, "undecided", data);
}

CommandResult cmd_normalize(Run& r) {
  if (!r.k.index_set().is_finite()) {
    auto nr = is_normal(r.k, r.w);
    r.text << "normal  " << normal_text(nr) << "\n";
    if (nr.ok) return r.finish(ExitCode::Positive, "already_normal", {{"normal", normal_json(nr)}});
    r.text << "countable kernels are only handled once they are in normal form\n";
    return r.finish(ExitCode::Inconclusive, "not_normalized", {{"normal", normal_json(nr)}});
  }
  try {
    auto nz = normalize_finite(r.k);
    auto sn = is_strongly_normal(nz.normal, r.w);
    r.text << "optimal assignment " << bij_text(nz.F, r.w) << ", value " << num(nz.value) << "\nphi* " << list(nz.phi_star)
           << "\npsi* " << list(nz.psi_star) << "\nnormal form c_xy = b_x,F(y) - phi*_x - psi*_F(y):\n";
    print_table(r.text, nz.normal.rows(), 0);
    r.text << "strongly normal  " << normal_text(sn) << "\n";
    return r.finish(ExitCode::Positive, "normalized",
                    {{"F", jbij(nz.F, r.w)},
                     {"value", jx(nz.value)},
                     {"phi_star", jlist(nz.phi_star)},
                     {"psi_star", jlist(nz.psi_star)},
                     {"normal", table_json(nz.normal.rows())},
                     {"strongly_normal", normal_json(sn)}});
  } catch (const Infeasible&) {
    r.text << "every permutation meets a -inf entry\n";
    return r.finish(ExitCode::Refuted, "infeasible", json::object());
  }
}

// The bijection the deviation kernel is built from: the file's, else an optimal
// assignment (finite) or the identity (countable).
Bijection reference_bijection(Run& r) {
  if (r.file().bijection) return *r.file().bijection;
  if (r.k.index_set().is_finite()) return from_perm(solve_assignment(r.k).perm);
  return Bijection::identity();
}

CommandResult closure_like(Run& r, bool with_potentials) {
  Bijection F;
  try {
    F = reference_bijection(r);
  } catch (const Infeasible&) {
    r.text << "every permutation meets a -inf entry\n";
    return r.finish(ExitCode::Refuted, "infeasible", json::object());
  }
  Kernel bt = btilde(r.k, F, r.w);
  auto cl = kleene_plus(bt, {0, r.w.size() - 1});
  r.text << "F " << bij_text(F, r.w) << "\n";
  json data{{"F", jbij(F, r.w)}, {"iterations", cl.iterations}};
  if (cl.positive_circuit) {
    std::vector<Index> circ;
    for (Index i : cl.circuit) circ.push_back(r.w.lo + i);
    r.text << "positive circuit " << list(circ) << " of weight " << num(cl.circuit_weight) << ": F is not optimal\n";
    data["circuit"] = jlist(circ);
    data["circuit_weight"] = jx(cl.circuit_weight);
    return r.finish(ExitCode::Refuted, "positive_circuit", data);
  }
  if (!with_potentials) {
    r.text << "closure of the deviation kernel:\n";
    print_table(r.text, cl.plus, r.w.lo);
    data["plus"] = table_json(cl.plus);
    return r.finish(ExitCode::Positive, "closure", data);
  }
  auto p = potentials(bt, cl, !r.k.index_set().is_finite(), r.opt().tol);
  r.text << "phi " << list(p.phi) << "\npsi " << list(p.psi) << "\n";
  json checks{{"phi_finite", p.phi_finite},
              {"psi_finite", p.psi_finite},
              {"nonnegative", p.nonnegative},
              {"phi_row_fixed", p.phi_row_fixed},
              {"psi_col_fixed", p.psi_col_fixed},
              {"phi_closure_fixed", p.phi_closure_fixed},
              {"sup_identity", p.sup_identity},
              {"far_nonpositive", p.far_nonpositive},
              {"pc", p.pc}};
  auto opt_bool = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
  checks["neg_psi_row_fixed"] = opt_bool(p.neg_psi_row_fixed);
  checks["neg_phi_col_fixed"] = opt_bool(p.neg_phi_col_fixed);
  checks["neg_psi_closure_fixed"] = opt_bool(p.neg_psi_closure_fixed);
  for (auto& [name, v] : checks.items())
    r.text << "  " << std::left << std::setw(22) << name << std::right << (v.is_null() ? "n/a" : v.get<bool>() ? "yes" : "no")
           << "\n";
  for (auto& n : p.notes) r.text << "note: " << n << "\n";
  data["phi"] = jlist(p.phi);
  data["psi"] = jlist(p.psi);
  data["checks"] = checks;
  data["notes"] = p.notes;
  r.relative = r.relative || p.window_relative;
  bool fine = p.phi_finite && p.psi_finite && p.nonnegative && p.phi_row_fixed && p.psi_col_fixed &&
              p.phi_closure_fixed && p.sup_identity && p.far_nonpositive && p.pc;
  return fine ? r.finish(ExitCode::Positive, "potentials", data) : r.finish(ExitCode::Inconclusive, "partial", data);
}

json levels_json(const SatGraph& g, bool final_side) {
  json a = json::array();
  for (Index x : g.vertices) {
    auto v = final_side ? g.lp_at(x) : g.ep_at(x);
    a.push_back(v ? json(*v) : json(nullptr));
  }
  return a;
}

CommandResult cmd_sat(Run& r) {
  Func phi = r.file().func.value_or(Func::zero());
  auto g = build_sat_graph(r.k, phi, r.w);
  auto s = structural_checks(g);
  json edges = json::array();
  for (auto [x, y] : g.edges) edges.push_back(json::array({x, y}));
  r.text << "phi " << func_text(phi, r.w) << "\nedges";
  for (auto [x, y] : g.edges) r.text << " " << x << "->" << y;
  r.text << "\nvertices " << list(g.vertices) << "\nghosts " << list(g.ghosts) << "\ninitial " << list(g.initial)
         << "\nfinal " << list(g.final_points) << "\nmax degree " << s.max_degree << " (bound " << s.degree_bound
         << ")\n";
  json data{{"phi", jfunc(phi, r.w)},
            {"reach", g.reach},
            {"vertices", jlist(g.vertices)},
            {"ghosts", jlist(g.ghosts)},
            {"edges", edges},
            {"initial", jlist(g.initial)},
            {"final", jlist(g.final_points)},
            {"lp", levels_json(g, true)},
            {"ep", levels_json(g, false)},
            {"max_degree", s.max_degree},
            {"degree_bound", s.degree_bound},
            {"degrees_ok", s.degrees_ok},
            {"lp_or_ep_finite", s.lp_or_ep_finite},
            {"end_points_exist", s.end_points_exist},
            {"circuit", s.circuit ? jlist(*s.circuit) : json(nullptr)},
            {"string", s.string_path ? jlist(*s.string_path) : json(nullptr)}};
  r.relative = r.relative || s.window_relative;
  if (s.circuit) {
    r.text << "circuit " << list(*s.circuit) << "\n";
    return r.finish(ExitCode::Refuted, "circuit", data);
  }
  if (s.string_path) {
    r.text << "saturated path across the window " << list(*s.string_path) << "\n";
    return r.finish(ExitCode::Refuted, "string", data);
  }
  return s.ok() ? r.finish(ExitCode::Positive, "acyclic", data) : r.finish(ExitCode::Inconclusive, "irregular", data);
}

json finding_json(const Finding& f) {
  return {{"kind", finding_name(f.kind)}, {"structure", jlist(f.structure)}, {"advice", f.advice}};
}

ExitCode finding_code(const Finding& f) {
  return f.kind == FindingKind::Circuit || f.kind == FindingKind::String ? ExitCode::Refuted : ExitCode::Inconclusive;
}

CommandResult cmd_perestroika(Run& r) {
  auto res = run_perestroika(r.k, std::nullopt, r.w, peel_options(r.opt()));
  r.text << "working window [" << res.working.lo << ", " << res.working.hi << "], budget eps "
         << num(r.opt().budget_eps) << "\n";
  for (const auto& rec : res.trace) {
    r.text << "round " << rec.round << " " << peel_mode_name(rec.mode) << " removed " << list(rec.removed)
           << " deltas " << list(rec.deltas) << "\n";
    r.trace({{"round", rec.round},
             {"mode", peel_mode_name(rec.mode)},
             {"removed", jlist(rec.removed)},
             {"deltas", jlist(rec.deltas)}});
  }
  r.relative = r.relative || res.window_relative;
  json data{{"rounds", res.rounds}, {"working", jwin(res.working)}, {"phi", jfunc(res.phi, r.w)},
            {"budget", jfunc(res.budget, r.w)}};
  if (res.finding) {
    r.text << "finding: " << finding_name(res.finding->kind) << " " << list(res.finding->structure) << "\n"
           << res.finding->advice << "\n";
    data["finding"] = finding_json(*res.finding);
    return r.finish(finding_code(*res.finding), finding_name(res.finding->kind), data);
  }
  r.text << "phi " << func_text(res.phi, r.w) << "\nmargin " << num(res.margin) << ", within budget "
         << (res.within_budget ? "yes" : "no") << "\n";
  data["margin"] = jx(res.margin);
  data["within_budget"] = res.within_budget;
  data["finding"] = nullptr;
  return r.finish(ExitCode::Positive, "strict_potential", data);
}

CommandResult cmd_regular(Run& r) {
  const auto& opt = r.opt();
  ConjugacyOptions copt;
  copt.enlargement = opt.enlargement;
  if (!r.k.satisfies_tc()) {
    auto tr = tail_refutation(r.k, opt.window, copt);
    r.text << "tightness fails; testing the tail counter-example h_x = 1/(x+1)^2 on [" << tr.window.lo << ", "
           << tr.window.hi << "]\n"
           << "  B^T 0 = 0 exactly: " << (tr.bt_zero_is_zero ? "yes" : "no") << "\n  Bh = 0 within eps "
           << num(tr.eps) << ": " << (tr.bh_is_zero ? "yes" : "no") << "\n";
    if (tr.refutes()) {
      r.relative = true;
      return r.finish(ExitCode::Refuted, "not_strongly_regular",
                      {{"status", regularity_name(RegularityStatus::Refuted)},
                       {"refutation", refutation_name(RefutationKind::TailCounterExample)},
                       {"eps", jx(tr.eps)},
                       {"bt_zero_is_zero", tr.bt_zero_is_zero},
                       {"bh_is_zero", tr.bh_is_zero},
                       {"h_in_l1", tr.h_in_l1},
                       {"bh", [&] {
                          json a = json::array();
                          for (auto& v : tr.bh.values) a.push_back(jx(v.value));
                          return a;
                        }()}});
    }
  }
  auto rep = certify_strong_regularity(r.k, r.w, peel_options(opt));
  const auto& c = rep.certificate;
  r.relative = r.relative || c.window_relative;
  json data{{"status", regularity_name(c.status)},
            {"refutation", refutation_name(c.refutation)},
            {"margin", jx(c.margin)},
            {"displacement", c.displacement},
            {"condition_iii", c.condition_iii},
            {"candidate", c.candidate},
            {"candidates", rep.candidates.size()},
            {"F", c.F ? jbij(*c.F, r.w) : json(nullptr)},
            {"g", c.g ? jfunc(*c.g, r.w) : json(nullptr)},
            {"second", c.second ? jfunc(*c.second, r.w) : json(nullptr)},
            {"second_assignment", c.second_assignment ? jbij(*c.second_assignment, r.w) : json(nullptr)}};
  std::vector<std::string> notes = rep.notes;
  notes.insert(notes.end(), c.notes.begin(), c.notes.end());
  data["notes"] = notes;
  if (rep.run) {
    data["perestroika"] = {{"rounds", rep.run->rounds},
                           {"finding", rep.run->finding ? finding_json(*rep.run->finding) : json(nullptr)}};
    r.text << "perestroika: " << rep.run->rounds << " rounds"
           << (rep.run->finding ? ", " + finding_name(rep.run->finding->kind) : std::string()) << "\n";
  }
  r.text << "status " << regularity_name(c.status);
  if (c.refutation != RefutationKind::None) r.text << " (" << refutation_name(c.refutation) << ")";
  r.text << "\n";
  if (c.F) r.text << "F " << bij_text(*c.F, r.w) << "\n";
  if (c.g) r.text << "g " << func_text(*c.g, r.w) << "\nmargin " << num(c.margin) << "\n";
  if (c.second) r.text << "second solution h " << func_text(*c.second, r.w) << "\n";
  if (c.second_assignment) r.text << "second optimal assignment " << bij_text(*c.second_assignment, r.w) << "\n";
  for (auto& n : notes) r.text << "note: " << n << "\n";
  switch (c.status) {
    case RegularityStatus::Certified: return r.finish(ExitCode::Positive, "strongly_regular", data);
    case RegularityStatus::Refuted: return r.finish(ExitCode::Refuted, "not_strongly_regular", data);
    case RegularityStatus::NoWitnessFound: break;
  }
  return r.finish(ExitCode::Inconclusive, "no_witness", data);
}

// A random two-sided similarity drawn from the seed: permutations of a block of
// distance + 1 points (the whole set when finite) and dyadic shifts on the window.
Similarity random_similarity(const Kernel& k, const Window& w, const CommandOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> quarter(-8, 8);
  auto shift = [&] {
    std::vector<double> v;
    for (Index x = w.lo; x <= w.hi; ++x) v.push_back(quarter(rng) / 4.0);
    return Func(w, v);
  };
  Window block = w;
  if (!k.index_set().is_finite()) {
    Index size = std::min(opt.distance + 1, w.size());
    Index centre = w.lo + (w.size() - size) / 2;
    block = {centre, centre + size - 1};
  }
  auto perm = [&] {
    std::vector<Index> p;
    for (Index x = block.lo; x <= block.hi; ++x) p.push_back(x);
    std::shuffle(p.begin(), p.end(), rng);
    return Bijection(block, p);
  };
  Similarity s;
  s.H = perm();
  s.K = perm();
  s.phi = shift();
  s.psi = shift();
  s.variant = SimilarityVariant::TwoSided;
  s.space = Space::L1;
  return s;
}

CommandResult cmd_invariance(Run& r) {
  const auto& opt = r.opt();
  Similarity s = random_similarity(r.k, r.w, opt);
  InvarianceOptions io;
  io.window = r.w;
  io.distance = opt.distance;
  io.mode = opt.mode;
  if (r.file().bijection) {
    io.solution = *r.file().bijection;
  } else if (r.k.index_set().is_finite()) {
    try {
      io.solution = from_perm(solve_assignment(apply_similarity(r.k, s)).perm);
    } catch (const Infeasible&) {
      io.solution = Bijection::identity();
    }
  } else {
    io.solution = compose(s.K.inverse(), s.H);  // transports to the identity
  }
  auto cert = certify_strong_regularity(r.k, r.w, peel_options(opt)).certificate;
  if (cert.status == RegularityStatus::Certified && cert.g) io.candidates.push_back(*cert.g);

  auto rep = invariance_suite(r.k, s,
                              {Property::ZC, Property::TC, Property::StrongRegularity, Property::SolutionExistence}, io);
  r.text << "similarity (seed " << opt.seed << "): H " << bij_text(s.H, r.w) << ", K " << bij_text(s.K, r.w)
         << "\n  phi " << func_text(s.phi, r.w) << "\n  psi " << func_text(s.psi, r.w) << "\n"
         << "solution candidate " << bij_text(io.solution, r.w) << "\n";
  json outcomes = json::array();
  bool disagree = false, inconclusive = false;
  for (const auto& o : rep.outcomes) {
    r.text << "  " << std::left << std::setw(20) << property_name(o.property) << std::setw(14) << agreement_name(o.agreement)
           << std::right << o.before << " -> " << o.after;
    if (!o.reason.empty()) r.text << "  (" << o.reason << ")";
    r.text << "\n";
    outcomes.push_back({{"property", property_name(o.property)},
                        {"agreement", agreement_name(o.agreement)},
                        {"before", o.before},
                        {"after", o.after},
                        {"reason", o.reason},
                        {"transported", o.transported ? jbij(*o.transported, r.w) : json(nullptr)}});
    disagree = disagree || o.agreement == Agreement::Disagree;
    inconclusive = inconclusive || o.agreement == Agreement::Inconclusive;
  }
  json data{{"similarity",
             {{"H", jbij(s.H, r.w)},
              {"K", jbij(s.K, r.w)},
              {"phi", jfunc(s.phi, r.w)},
              {"psi", jfunc(s.psi, r.w)},
              {"variant", variant_name(s.variant)},
              {"space", space_name(s.space)}}},
            {"solution", jbij(io.solution, r.w)},
            {"outcomes", outcomes}};
  if (disagree) return r.finish(ExitCode::Refuted, "not_invariant", data);
  if (inconclusive) return r.finish(ExitCode::Inconclusive, "partly_inconclusive", data);
  return r.finish(ExitCode::Positive, "invariant", data);
}

json error_record(const std::string& command, ExitCode code, const std::string& message, json provenance) {
  return {{"schema", kReportSchema},
          {"command", command},
          {"record", "error"},
          {"seq", 0},
          {"verdict", "error"},
          {"exit", static_cast<int>(code)},
          {"exit_name", exit_name(code)},
          {"provenance", std::move(provenance)},
          {"data", {{"message", message}}}};
}

}  // namespace

CommandResult input_error(const std::string& command, const std::string& message, const CommandOptions& opt) {
  json prov{{"index_set", nullptr},
            {"window", nullptr},
            {"window_relative", false},
            {"distance", opt.distance},
            {"mode", mode_name(opt.mode)},
            {"seed", opt.seed},
            {"file_version", nullptr},
            {"tolerances", {{"closure", opt.tol}, {"enlargement", opt.enlargement}, {"budget_eps", opt.budget_eps}}}};
  return {ExitCode::InputError, "error: " + message + "\n",
          {error_record(command, ExitCode::InputError, message, std::move(prov))}};
}

CommandResult run_command(const std::string& command, const KernelFile& file, const CommandOptions& opt) {
  Run r(command, file, opt);
  // Module preconditions on user input surface as input errors; anything else
  // is reported as an inconclusive run rather than a verdict.
  auto fail = [&](ExitCode code, const std::string& msg) {
    CommandResult out;
    out.code = code;
    out.text = r.text.str() + "error: " + msg + "\n";
    out.records = std::move(r.records);
    json rec = error_record(command, code, msg, r.provenance());
    rec["seq"] = out.records.size();
    out.records.push_back(std::move(rec));
    return out;
  };
  try {
    if (command == "check") return cmd_check(r);
    if (command == "assign") return cmd_assign(r);
    if (command == "unique") return cmd_unique(r);
    if (command == "normalize") return cmd_normalize(r);
    if (command == "closure") return closure_like(r, false);
    if (command == "potentials") return closure_like(r, true);
    if (command == "sat") return cmd_sat(r);
    if (command == "perestroika") return cmd_perestroika(r);
    if (command == "regular") return cmd_regular(r);
    if (command == "invariance") return cmd_invariance(r);
    return fail(ExitCode::InputError, "unknown command '" + command + "'");
  } catch (const std::invalid_argument& e) {
    return fail(ExitCode::InputError, e.what());
  } catch (const std::exception& e) {
    return fail(ExitCode::Inconclusive, std::string("internal failure: ") + e.what());
  }
}

std::string render(const CommandResult& r, ReportFormat f) {
  if (f == ReportFormat::Text) return r.text;
  std::string out;
  for (const auto& rec : r.records) out += rec.dump() + "\n";
  return out;
}

}  // namespace tropreg
