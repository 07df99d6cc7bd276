#pragma once

#include <vector>

#include "replab/nc.hpp"

namespace replab {

// Small dense matrix with noncommutative polynomial entries.
struct PolyMat {
  unsigned rows = 0, cols = 0;
  std::vector<NcPoly> e;

  PolyMat() = default;
  PolyMat(unsigned r, unsigned c) : rows(r), cols(c), e(size_t(r) * c) {}

  NcPoly& at(unsigned i, unsigned j) { return e[size_t(i) * cols + j]; }
  const NcPoly& at(unsigned i, unsigned j) const { return e[size_t(i) * cols + j]; }

  static PolyMat identity(unsigned n) {
    PolyMat m(n, n);
    for (unsigned i = 0; i < n; ++i) m.at(i, i) = NcPoly::constant(1);
    return m;
  }

  bool is_zero() const {
    for (const auto& p : e)
      if (!p.is_zero()) return false;
    return true;
  }

  friend bool operator==(const PolyMat& a, const PolyMat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
  }
};

inline PolyMat pm_mul(const PolyMat& a, const PolyMat& b) {
  PolyMat c(a.rows, b.cols);
  for (unsigned i = 0; i < a.rows; ++i)
    for (unsigned k = 0; k < a.cols; ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (unsigned j = 0; j < b.cols; ++j)
        if (!b.at(k, j).is_zero())
          c.at(i, j) = c.at(i, j) + a.at(i, k) * b.at(k, j);
    }
  return c;
}

inline PolyMat pm_add(const PolyMat& a, const PolyMat& b) {
  PolyMat c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.e[i] + b.e[i];
  return c;
}

inline PolyMat pm_sub(const PolyMat& a, const PolyMat& b) {
  PolyMat c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.e[i] - b.e[i];
  return c;
}

inline PolyMat pm_neg(const PolyMat& a) {
  PolyMat c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = -a.e[i];
  return c;
}

}  // namespace replab
