#pragma once

#include <random>

#include "oracle.hpp"
#include "tropreg/kernel.hpp"

namespace fx {

using namespace tropreg;

inline Kernel from_mat(const oracle::Mat& m) {
  std::vector<std::vector<ExtReal>> rows;
  for (auto& r : m) rows.emplace_back(r.begin(), r.end());
  return Kernel::dense(std::move(rows));
}

inline oracle::Mat to_mat(const Kernel& k) {
  oracle::Mat m;
  for (auto& r : k.rows()) {
    m.emplace_back();
    for (auto e : r) m.back().push_back(e.value());
  }
  return m;
}

inline constexpr double NEG = oracle::NEG;

// 3x3: zero diagonal, b(0,1) = 0, every other entry -1.
inline Kernel k2() { return from_mat({{0, 0, -1}, {-1, 0, -1}, {-1, -1, 0}}); }

// Tail violating tightness: b_xy = -1/|x-y| on N, zero diagonal.
inline Kernel ce() {
  return Kernel::banded_uniform(IndexSet::naturals(), 0.0, {-1.0, -1.0}, KernelTail::reciprocal(1, 1));
}

inline std::vector<double> values(const Func& f, Index lo, Index hi) {
  std::vector<double> v;
  for (Index x = lo; x <= hi; ++x) v.push_back(f(x));
  return v;
}

}  // namespace fx
