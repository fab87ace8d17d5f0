#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropreg/assignment.hpp"
#include "tropreg/bijection.hpp"
#include "tropreg/func.hpp"
#include "tropreg/kernel.hpp"
#include "tropreg/subdiff.hpp"

namespace tropreg {

enum class SimilarityVariant { TwoSided, Right, Left };
std::string variant_name(SimilarityVariant v);

/// c_xy = b_{H(x)K(y)} − φ_x − ψ_y, with φ, ψ declared to lie in `space`.
/// Right similarities keep rows in place (H = I), left ones keep columns (K = I).
struct Similarity {
  Bijection H, K;
  Func phi, psi;
  SimilarityVariant variant = SimilarityVariant::TwoSided;
  Space space = Space::L1;

  static Similarity identity() { return {}; }
  static Similarity right(Bijection K, Func phi, Func psi, Space space = Space::L1);
  static Similarity left(Bijection H, Func phi, Func psi, Space space = Space::L1);

  /// The similarity taking c back to b.
  Similarity inverse() const;
};

/// Apply `first`, then `second` to the result.
Similarity compose(const Similarity& first, const Similarity& second);

class SimilarityRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws SimilarityRefused when the variant does not match H, K, when φ or ψ
/// leaves the declared space, or when a bijection moves points off the index set.
Kernel apply_similarity(const Kernel& k, const Similarity& s);

struct NormalReport {
  bool ok = false;
  /// −sup of the off-diagonal entries (+inf when they are all −∞).
  double margin = 0.0;
  bool margin_attained = true;
  bool window_relative = false;
  std::optional<std::pair<Index, Index>> offending;
  std::string detail;
};

/// Zero diagonal and nonpositive off-diagonal. Transformed kernels are scanned
/// on the window section only.
NormalReport is_normal(const Kernel& k, const Window& window = {-20, 20});
/// Zero diagonal and pointwise negative off-diagonal. A margin of 0 that is
/// only approached in the tail is reported with margin_attained = false.
NormalReport is_strongly_normal(const Kernel& k, const Window& window = {-20, 20});

struct Normalization {
  Bijection F;               // optimal assignment of k
  double value = 0.0;        // its weight
  Similarity similarity;     // right similarity with K = F
  Kernel normal;             // apply_similarity(k, similarity)
  std::vector<double> phi_star, psi_star;  // row duals; column duals indexed by original column
};

/// Right similarity built from an optimal assignment F and the canonical duals
/// φ* = row sups of the closure of b̃ and ψ*_{F(y)} = b_{yF(y)} − φ*_y.
/// Throws Infeasible when no finite assignment exists.
Normalization normalize_finite(const Kernel& k);

enum class Property { ZC, TC, StrongRegularity, SolutionExistence };
std::string property_name(Property p);

enum class Agreement { Agree, Disagree, Refused, Inconclusive };
std::string agreement_name(Agreement a);

using RegularityDecider = std::function<RegularityCertificate(const Kernel&, const Window&)>;

struct InvarianceOptions {
  Window window{-20, 20};
  /// Candidate solution for the transformed kernel c; its transport K∘F∘H⁻¹ is
  /// checked on b.
  Bijection solution;
  Index distance = 2;
  SolutionMode mode = SolutionMode::Compact;
  /// Witnesses g for b; c receives g∘H − φ.
  std::vector<Func> candidates;
  /// When set, replaces candidate transport: the same procedure runs on both sides.
  RegularityDecider decider;
};

struct PropertyOutcome {
  Property property = Property::ZC;
  Agreement agreement = Agreement::Inconclusive;
  std::string before, after;
  std::string reason;
  std::optional<Bijection> transported;
};

struct InvarianceReport {
  std::vector<PropertyOutcome> outcomes;
  /// No property disagrees (refusals and inconclusive checks do not count against).
  bool consistent() const;
  bool all_agree() const;
};

InvarianceReport invariance_suite(const Kernel& k, const Similarity& s, const std::vector<Property>& props,
                                  const InvarianceOptions& opt = {});

}  // namespace tropreg
