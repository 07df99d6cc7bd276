#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "replab/braid.hpp"
#include "replab/linalg.hpp"

namespace replab {

// m-graded path subset data: a reduced permutation braid word, Maslov
// potentials, grading modulus, and the coefficient field size.
struct PathSubsetSpec {
  Braid braid;
  std::vector<int> mu;
  int m = 0;
  long long q = 2;

  PathSubsetSpec(Braid b, std::vector<int> potentials, int modulus, long long field_q)
      : braid(std::move(b)), mu(std::move(potentials)), m(modulus), q(field_q) {
    if (!is_reduced(braid)) throw std::invalid_argument("PathSubsetSpec: braid word not reduced");
    if (mu.size() != braid.n) throw std::invalid_argument("PathSubsetSpec: mu size mismatch");
    auto perm = permutation_of(braid);
    for (unsigned j = 0; j < braid.n; ++j)
      if (mu[perm[j]] != mu[j])
        throw std::invalid_argument("PathSubsetSpec: mu not constant on braid components");
  }

  const Field& field() const { return Field::get(q); }
  int n() const { return static_cast<int>(braid.n); }
};

// A ring map on the braid subalgebra with scalar values: units t_i per
// strand, p_j per crossing, x_{i,j} strictly upper.
struct PathAssignment {
  std::vector<unsigned> t;  // per strand, invertible
  std::vector<unsigned> p;  // per crossing
  Mat x;                    // strictly upper n x n
};

inline bool assignment_m_graded(const PathSubsetSpec& spec, const PathAssignment& a) {
  auto cr = crossings_of(spec.braid, spec.mu);
  for (size_t j = 0; j < cr.size(); ++j)
    if (a.p[j] && !degree_zero_mod(cr[j].degree, spec.m)) return false;
  for (int i = 0; i < spec.n(); ++i)
    for (int j = i + 1; j < spec.n(); ++j)
      if (a.x.at(i, j) && !degree_zero_mod(spec.mu[i] - spec.mu[j], spec.m)) return false;
  return true;
}

// Numeric P^{xy} = Delta . P^{xz} . (I + X Sigma) at the given assignment.
inline Mat eval_path_matrix(const PathSubsetSpec& spec, const PathAssignment& a) {
  const Field& F = spec.field();
  const unsigned n = spec.braid.n;
  Mat P = Mat::identity(n);
  auto cr = crossings_of(spec.braid, spec.mu);
  for (size_t j = 0; j < cr.size(); ++j) {
    Mat V = Mat::identity(n);
    unsigned k = cr[j].pos - 1;
    V.at(k, k) = cr[j].sign_mu % 2 == 0 ? a.p[j] : F.neg(a.p[j]);
    V.at(k, k + 1) = 1;
    V.at(k + 1, k) = 1;
    V.at(k + 1, k + 1) = 0;
    P = mat_mul(F, P, V);
  }
  Mat D(n, n), IXS = Mat::identity(n);
  for (unsigned i = 0; i < n; ++i)
    D.at(i, i) = spec.mu[i] % 2 == 0 ? a.t[i] : F.inv(a.t[i]);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      IXS.at(i, j) = spec.mu[j] % 2 == 0 ? a.x.at(i, j) : F.neg(a.x.at(i, j));
  return mat_mul(F, D, mat_mul(F, P, IXS));
}

// All matrices alpha(P^{xy}) as alpha ranges over the m-graded scalar ring
// maps: t_i free units, p_j and x_{i,j} free iff their degree vanishes mod m.
// Injectivity of the evaluation is verified by counting.
inline std::vector<Mat> enumerate_path_subset(const PathSubsetSpec& spec) {
  const Field& F = spec.field();
  const unsigned n = spec.braid.n;
  auto cr = crossings_of(spec.braid, spec.mu);

  PathAssignment a;
  a.t.assign(n, 1);
  a.p.assign(cr.size(), 0);
  a.x = Mat(n, n);

  // free slots: pointer into the assignment plus number of values
  std::vector<std::pair<unsigned*, unsigned>> slots;
  for (unsigned i = 0; i < n; ++i) slots.emplace_back(&a.t[i], F.q() - 1);
  for (size_t j = 0; j < cr.size(); ++j)
    if (degree_zero_mod(cr[j].degree, spec.m)) slots.emplace_back(&a.p[j], F.q());
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (degree_zero_mod(spec.mu[i] - spec.mu[j], spec.m))
        slots.emplace_back(&a.x.at(i, j), F.q());

  unsigned long long count = 1;
  for (auto& s : slots) {
    count *= s.second;
    if (count > (1ull << 24))
      throw std::invalid_argument("enumerate_path_subset: assignment space too large");
  }

  std::set<Mat> out;
  std::vector<unsigned> idx(slots.size(), 0);
  for (;;) {
    for (size_t i = 0; i < slots.size(); ++i)
      *slots[i].first = slots[i].second == F.q() - 1 ? idx[i] + 1 : idx[i];
    out.insert(eval_path_matrix(spec, a));
    size_t pos = 0;
    while (pos < slots.size()) {
      if (++idx[pos] < slots[pos].second) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == slots.size()) break;
  }
  if (out.size() != count)
    throw std::logic_error("enumerate_path_subset: evaluation map not injective");
  return std::vector<Mat>(out.begin(), out.end());
}

// Bruhat cell data: D A U = S with D invertible diagonal, U unipotent upper
// triangular, and S a permutation matrix with free entries above the 1 of
// their column and left of the 1 of their row; pi[j] = row of the 1 in
// column j.
struct BruhatCell {
  std::vector<int> pi;
  Mat D, U, S;
};

// Column elimination: in each column take the lowest nonzero entry as pivot,
// scale its row to make it 1, then clear everything to its right with
// unipotent column operations.
inline BruhatCell bruhat_reduce(const Field& F, const Mat& A) {
  if (A.rows != A.cols) throw std::invalid_argument("bruhat_reduce: matrix not square");
  const unsigned n = A.rows;
  BruhatCell cell;
  cell.pi.assign(n, -1);
  cell.D = Mat::identity(n);
  cell.U = Mat::identity(n);
  Mat W = A;
  for (unsigned j = 0; j < n; ++j) {
    unsigned piv = n;
    for (unsigned i = n; i-- > 0;)
      if (W.at(i, j)) { piv = i; break; }
    if (piv == n) throw std::invalid_argument("bruhat_reduce: singular matrix");
    cell.pi[j] = static_cast<int>(piv);
    unsigned s = F.inv(W.at(piv, j));
    if (s != 1) {
      for (unsigned c = 0; c < n; ++c) W.at(piv, c) = F.mul(s, W.at(piv, c));
      cell.D.at(piv, piv) = s;
    }
    for (unsigned jj = j + 1; jj < n; ++jj) {
      unsigned f = W.at(piv, jj);
      if (!f) continue;
      for (unsigned r = 0; r < n; ++r) {
        W.at(r, jj) = F.sub(W.at(r, jj), F.mul(f, W.at(r, j)));
        cell.U.at(r, jj) = F.sub(cell.U.at(r, jj), F.mul(f, cell.U.at(r, j)));
      }
    }
  }
  cell.S = W;
  return cell;
}

// Unique scalar ring map alpha with alpha(P^{xy}) = A, or none when A lies
// outside the cell of the braid's permutation.  Grading mod m is not imposed
// here; test with assignment_m_graded.
//
// Column-by-column reconstruction: writing u_i = t_i^{(-1)^{mu_i}} and
// A_{i,k} = u_i [P_{i,k} + sigma_k sum_{l<k} P_{i,l} x_{l,k}], the rows
// pivoted in earlier columns give the x_{j,k}; in row pi(k) the products
// c_l = u_{pi(k)} P_{pi(k),l} are computable left to right without knowing
// u_{pi(k)}, which then drops out of the column-k entry.
inline std::optional<PathAssignment> recover_ring_map(const Mat& A, const PathSubsetSpec& spec) {
  const Field& F = spec.field();
  const unsigned n = spec.braid.n;
  if (A.rows != n || A.cols != n) throw std::invalid_argument("recover_ring_map: size mismatch");
  auto perm = permutation_of(spec.braid);
  auto cr = crossings_of(spec.braid, spec.mu);

  // positions and signs of the crossing labels in the symbolic P^{xz}
  auto S = make_braid_symbols(spec.braid, spec.mu);
  PolyMat Pxz = path_matrix_xz(S);
  std::vector<std::pair<unsigned, unsigned>> p_pos(cr.size());
  std::vector<int> p_sign(cr.size());
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      const NcPoly& entry = Pxz.at(i, j);
      if (entry.is_zero() || static_cast<int>(i) == perm[j]) continue;
      const auto& term = entry.terms()[0];
      size_t idx = std::find(S.p.begin(), S.p.end(), letter_gen(term.w[0])) - S.p.begin();
      p_pos[idx] = {i, j};
      p_sign[idx] = term.c < 0 ? -1 : 1;
    }

  std::vector<unsigned> sig(n);
  for (unsigned i = 0; i < n; ++i) sig[i] = spec.mu[i] % 2 == 0 ? 1 : F.neg(1);

  Mat Pv(n, n);  // recovered numeric P^{xz}
  for (unsigned j = 0; j < n; ++j) Pv.at(perm[j], j) = 1;
  std::vector<unsigned> u(n, 0);  // diagonal of Delta
  PathAssignment a;
  a.t.assign(n, 1);
  a.p.assign(cr.size(), 0);
  a.x = Mat(n, n);

  for (unsigned k = 0; k < n; ++k) {
    for (unsigned j = 0; j < k; ++j) {
      unsigned i = static_cast<unsigned>(perm[j]);
      unsigned v = F.mul(F.inv(u[i]), A.at(i, k));
      unsigned acc = 0;
      for (unsigned l = 0; l < j; ++l) acc = F.add(acc, F.mul(Pv.at(i, l), a.x.at(l, k)));
      a.x.at(j, k) = F.sub(F.mul(sig[k], v), acc);
    }
    unsigned row = static_cast<unsigned>(perm[k]);
    std::vector<unsigned> c(k, 0);  // c_l = u_row * Pv(row, l)
    for (unsigned l = 0; l < k; ++l) {
      unsigned acc = 0;
      for (unsigned r = 0; r < l; ++r) acc = F.add(acc, F.mul(c[r], a.x.at(r, l)));
      c[l] = F.sub(A.at(row, l), F.mul(sig[l], acc));
    }
    unsigned acc = 0;
    for (unsigned l = 0; l < k; ++l) acc = F.add(acc, F.mul(c[l], a.x.at(l, k)));
    unsigned ur = F.sub(A.at(row, k), F.mul(sig[k], acc));
    if (!ur) return std::nullopt;
    u[row] = ur;
    for (unsigned l = 0; l < k; ++l) {
      unsigned w = F.mul(c[l], F.inv(ur));
      if (row < static_cast<unsigned>(perm[l])) {
        Pv.at(row, l) = w;
      } else if (w) {
        return std::nullopt;  // nonzero where the cell pattern forces 0
      }
    }
  }

  for (unsigned i = 0; i < n; ++i) a.t[i] = spec.mu[i] % 2 == 0 ? u[i] : F.inv(u[i]);
  for (size_t j = 0; j < cr.size(); ++j) {
    unsigned w = Pv.at(p_pos[j].first, p_pos[j].second);
    a.p[j] = p_sign[j] < 0 ? F.neg(w) : w;
  }
  if (!(eval_path_matrix(spec, a) == A)) return std::nullopt;
  return a;
}

// Membership in the m-graded path subset B^m_beta.
inline bool path_subset_member(const Mat& A, const PathSubsetSpec& spec) {
  auto a = recover_ring_map(A, spec);
  return a && assignment_m_graded(spec, *a);
}

struct BruhatReport {
  unsigned n = 0;
  long long q = 0;
  unsigned long long gl = 0;         // |GL(n, q)|
  unsigned long long total = 0;      // sum of cell sizes
  bool disjoint = false;             // cells pairwise disjoint
  bool covers = false;               // union is all of GL(n, q)
  bool reduce_consistent = false;    // bruhat_reduce lands in the right cell
  std::map<std::vector<int>, unsigned long long> cell_sizes;
  bool ok() const { return disjoint && covers && reduce_consistent && total == gl; }
};

// Exhaustive check that the ungraded path subsets of the canonical reduced
// words partition GL(n, F_q), and that elimination agrees with enumeration.
inline BruhatReport verify_bruhat_partition(unsigned n, long long q) {
  BruhatReport rep;
  rep.n = n;
  rep.q = q;
  rep.gl = gl_order(n, static_cast<unsigned>(q));
  const Field& F = Field::get(q);

  std::map<Mat, std::vector<int>> owner;
  rep.disjoint = true;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    PathSubsetSpec spec(reduced_word(perm), std::vector<int>(n, 0), 0, q);
    auto cell = enumerate_path_subset(spec);
    rep.cell_sizes[perm] = cell.size();
    rep.total += cell.size();
    for (const Mat& A : cell)
      if (!owner.emplace(A, perm).second) rep.disjoint = false;
  } while (std::next_permutation(perm.begin(), perm.end()));

  rep.covers = true;
  rep.reduce_consistent = true;
  Mat A(n, n);
  unsigned long long space = 1;
  for (unsigned i = 0; i < n * n; ++i) space *= F.q();
  for (unsigned long long code = 0; code < space; ++code) {
    unsigned long long c = code;
    for (unsigned i = 0; i < n * n; ++i) {
      A.e[i] = static_cast<unsigned>(c % F.q());
      c /= F.q();
    }
    if (!mat_invertible(F, A)) continue;
    auto it = owner.find(A);
    if (it == owner.end()) {
      rep.covers = false;
      continue;
    }
    if (bruhat_reduce(F, A).pi != it->second) rep.reduce_consistent = false;
  }
  return rep;
}

}  // namespace replab
