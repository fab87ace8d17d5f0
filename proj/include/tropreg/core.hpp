#pragma once

#include <vector>

#include "tropreg/func.hpp"
#include "tropreg/kernel.hpp"

namespace tropreg {

struct ZcReport {
  bool ok = true;
  std::vector<Index> bad_rows, bad_cols;
};

/// Every row and column meets a real entry. Rows of a banded kernel see the
/// whole band plus tail, so the answer does not depend on the window.
ZcReport check_zc(const Kernel& k, const Window& window);

struct TcReport {
  bool holds = true;
  /// envelope(m) and profile(m) for m = 1 .. W+3.
  std::vector<ExtReal> envelope, profile;
};
TcReport check_tc(const Kernel& k);

/// Degenerate window for a seminorm (fewer than 2M+1 points).
class DegenerateWindow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// max over bijections F with rho(F, I) <= M supported in `window` of
/// sum_x |s_F(x) - s_x|, solved as a maximum-weight assignment.
double seminorm_01(const Func& s, Index M, const Window& window);
/// sum over x in `window` of max_{d(y,x) <= M} |s_y - s_x|, y also in the window.
double seminorm_01_prime(const Func& s, Index M, const Window& window);

}  // namespace tropreg
