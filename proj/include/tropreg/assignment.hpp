#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropreg/bijection.hpp"
#include "tropreg/ext_real.hpp"
#include "tropreg/kernel.hpp"

namespace tropreg {

using Matrix = std::vector<std::vector<ExtReal>>;
using Perm = std::vector<Index>;  // perm[x] = F(x)

/// No permutation avoids every −∞ entry.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AssignmentResult {
  Perm perm;
  ExtReal value;
  /// Dual potentials: phi_x + psi_y >= b_xy, with equality on assigned pairs.
  std::vector<double> phi, psi;
  bool unique = false;
  /// Best permutation different from `perm` and its value gap (absent when n = 1
  /// or every alternative is infeasible).
  std::optional<Perm> second;
  ExtReal gap = ExtReal::bottom();
};

/// Maximum-weight perfect matching on a square matrix; −∞ entries are forbidden
/// edges. Throws Infeasible. Does not fill the uniqueness fields.
AssignmentResult max_weight_assignment(const Matrix& w);

/// Full solve on a finite kernel, including the uniqueness test.
AssignmentResult solve_assignment(const Kernel& k);

struct BruteForceResult {
  std::vector<Perm> optimal;  // lexicographic order
  ExtReal value;
};
/// Exhaustive enumeration; refuses n > 9.
BruteForceResult brute_force_assignment(const Kernel& k);
BruteForceResult brute_force_assignment(const Matrix& w);

struct UniquenessResult {
  bool unique = false;
  Perm perm;
  ExtReal value;
  std::optional<Perm> second;  // an alternative optimum when not unique
};
/// Unique iff forbidding any assigned edge strictly lowers the optimum.
UniquenessResult is_unique_optimal(const Kernel& k);
UniquenessResult is_unique_optimal(const Matrix& w);

enum class SolutionMode { Compact, RestrictedBalls };

struct LocalSolutionReport {
  bool verified = false;
  /// Minimum over admissible G != F of sum_x (b_{xF(x)} - b_{xG(x)}); when a
  /// negative exchange exists this is the weight of the violating one found.
  ExtReal margin = ExtReal::top();
  std::optional<Bijection> violating;
  Index tested_columns = 0;
};

/// Checks that F beats every bijection G != F with rho(G, F) <= M moving only
/// points of `window`. Each such G differs from F by a permutation of columns,
/// whose gain splits over its cycles, so the check reduces to the lightest
/// elementary cycle in a column graph. Both modes agree for windowed G since
/// ball sums stabilise once B_n covers the support.
LocalSolutionReport verify_local_strong_solution(const Kernel& k, const Bijection& F, Index M,
                                                 const Window& window,
                                                 SolutionMode mode = SolutionMode::Compact);

Matrix to_matrix(const Kernel& k);
ExtReal perm_value(const Matrix& w, const Perm& p);

}  // namespace tropreg
