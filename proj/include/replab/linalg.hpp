#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "replab/gf.hpp"

namespace replab {

// Dense row-major matrix over F_q; entries are Field element indices.
struct Mat {
  unsigned rows = 0, cols = 0;
  std::vector<unsigned> e;

  Mat() = default;
  Mat(unsigned r, unsigned c) : rows(r), cols(c), e(size_t(r) * c, 0) {}

  unsigned& at(unsigned i, unsigned j) { return e[size_t(i) * cols + j]; }
  unsigned at(unsigned i, unsigned j) const { return e[size_t(i) * cols + j]; }

  static Mat identity(unsigned n) {
    Mat m(n, n);
    for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool is_zero() const {
    for (unsigned x : e) if (x) return false;
    return true;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
  }
  friend bool operator<(const Mat& a, const Mat& b) { return a.e < b.e; }
};

inline Mat mat_add(const Field& F, const Mat& a, const Mat& b) {
  Mat c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = F.add(a.e[i], b.e[i]);
  return c;
}

inline Mat mat_scale(const Field& F, unsigned s, const Mat& a) {
  Mat c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = F.mul(s, a.e[i]);
  return c;
}

inline void mat_add_scaled(const Field& F, Mat& acc, unsigned s, const Mat& a) {
  for (size_t i = 0; i < acc.e.size(); ++i)
    acc.e[i] = F.add(acc.e[i], F.mul(s, a.e[i]));
}

inline Mat mat_mul(const Field& F, const Mat& a, const Mat& b) {
  Mat c(a.rows, b.cols);
  for (unsigned i = 0; i < a.rows; ++i)
    for (unsigned k = 0; k < a.cols; ++k) {
      unsigned v = a.at(i, k);
      if (!v) continue;
      for (unsigned j = 0; j < b.cols; ++j)
        c.at(i, j) = F.add(c.at(i, j), F.mul(v, b.at(k, j)));
    }
  return c;
}

inline Mat mat_neg(const Field& F, const Mat& a) {
  Mat c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = F.neg(a.e[i]);
  return c;
}

// Gauss-Jordan inverse; returns false if singular.
inline bool mat_inverse(const Field& F, const Mat& a, Mat& out) {
  unsigned n = a.rows;
  Mat w = a, inv = Mat::identity(n);
  for (unsigned col = 0; col < n; ++col) {
    unsigned piv = n;
    for (unsigned r = col; r < n; ++r)
      if (w.at(r, col)) { piv = r; break; }
    if (piv == n) return false;
    if (piv != col)
      for (unsigned j = 0; j < n; ++j) {
        std::swap(w.e[size_t(piv) * n + j], w.e[size_t(col) * n + j]);
        std::swap(inv.e[size_t(piv) * n + j], inv.e[size_t(col) * n + j]);
      }
    unsigned s = F.inv(w.at(col, col));
    for (unsigned j = 0; j < n; ++j) {
      w.at(col, j) = F.mul(s, w.at(col, j));
      inv.at(col, j) = F.mul(s, inv.at(col, j));
    }
    for (unsigned r = 0; r < n; ++r) {
      if (r == col) continue;
      unsigned f = w.at(r, col);
      if (!f) continue;
      for (unsigned j = 0; j < n; ++j) {
        w.at(r, j) = F.sub(w.at(r, j), F.mul(f, w.at(col, j)));
        inv.at(r, j) = F.sub(inv.at(r, j), F.mul(f, inv.at(col, j)));
      }
    }
  }
  out = inv;
  return true;
}

inline bool mat_invertible(const Field& F, const Mat& a) {
  Mat tmp;
  return a.rows == a.cols && mat_inverse(F, a, tmp);
}

// Affine system A x = b over F_q in row-echelon terms.
struct LinSolution {
  bool consistent = false;
  unsigned rank = 0;
  std::vector<unsigned> particular;          // one solution
  std::vector<std::vector<unsigned>> null_basis;  // basis of kernel
  unsigned nullity() const { return static_cast<unsigned>(null_basis.size()); }
};

inline LinSolution solve_linear(const Field& F, std::vector<std::vector<unsigned>> A,
                                std::vector<unsigned> b) {
  LinSolution sol;
  const unsigned m = static_cast<unsigned>(A.size());
  const unsigned n = m ? static_cast<unsigned>(A[0].size()) : 0;
  std::vector<int> pivot_of_col(n, -1);
  unsigned row = 0;
  for (unsigned col = 0; col < n && row < m; ++col) {
    unsigned piv = m;
    for (unsigned r = row; r < m; ++r)
      if (A[r][col]) { piv = r; break; }
    if (piv == m) continue;
    std::swap(A[piv], A[row]);
    std::swap(b[piv], b[row]);
    unsigned s = F.inv(A[row][col]);
    for (unsigned j = col; j < n; ++j) A[row][j] = F.mul(s, A[row][j]);
    b[row] = F.mul(s, b[row]);
    for (unsigned r = 0; r < m; ++r) {
      if (r == row) continue;
      unsigned f = A[r][col];
      if (!f) continue;
      for (unsigned j = col; j < n; ++j) A[r][j] = F.sub(A[r][j], F.mul(f, A[row][j]));
      b[r] = F.sub(b[r], F.mul(f, b[row]));
    }
    pivot_of_col[col] = static_cast<int>(row);
    ++row;
  }
  for (unsigned r = row; r < m; ++r)
    if (b[r]) { sol.consistent = false; return sol; }
  sol.consistent = true;
  sol.rank = row;
  sol.particular.assign(n, 0);
  for (unsigned col = 0; col < n; ++col)
    if (pivot_of_col[col] >= 0)
      sol.particular[col] = b[static_cast<unsigned>(pivot_of_col[col])];
  for (unsigned col = 0; col < n; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    std::vector<unsigned> v(n, 0);
    v[col] = 1;
    for (unsigned c2 = 0; c2 < n; ++c2)
      if (pivot_of_col[c2] >= 0)
        v[c2] = F.neg(A[static_cast<unsigned>(pivot_of_col[c2])][col]);
    sol.null_basis.push_back(std::move(v));
  }
  return sol;
}

// Visit every point of the affine solution space.  The callback receives the
// full coordinate vector; return false from it to stop early.
inline bool for_each_solution(const Field& F, const LinSolution& sol,
                              const std::function<bool(const std::vector<unsigned>&)>& fn) {
  if (!sol.consistent) return true;
  const unsigned n = static_cast<unsigned>(sol.particular.size());
  const unsigned k = sol.nullity();
  std::vector<unsigned> coef(k, 0), x(n);
  for (;;) {
    x = sol.particular;
    for (unsigned i = 0; i < k; ++i) {
      if (!coef[i]) continue;
      for (unsigned j = 0; j < n; ++j)
        x[j] = F.add(x[j], F.mul(coef[i], sol.null_basis[i][j]));
    }
    if (!fn(x)) return false;
    unsigned pos = 0;
    while (pos < k) {
      if (++coef[pos] < F.q()) break;
      coef[pos] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  return true;
}

inline unsigned long long gl_order(unsigned n, unsigned q) {
  unsigned long long r = 1, qn = 1;
  for (unsigned i = 0; i < n; ++i) qn *= q;
  unsigned long long qi = 1;
  for (unsigned i = 0; i < n; ++i) {
    r *= (qn - qi);
    qi *= q;
  }
  return r;
}

}  // namespace replab
