#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "replab/satellite.hpp"

namespace replab {

// Laurent polynomial in z with rational coefficients, zero terms dropped.
struct LaurentZ {
  std::map<int, Rat> c;

  void set(int j, Rat v) {
    if (v == 0)
      c.erase(j);
    else
      c[j] = std::move(v);
  }
  Rat get(int j) const {
    auto it = c.find(j);
    return it == c.end() ? Rat(0) : it->second;
  }
  bool is_zero() const { return c.empty(); }

  SqrtQ eval(const SqrtQ& z) const {
    SqrtQ acc(Rat(0));
    for (const auto& [j, v] : c) acc = acc + SqrtQ(v) * z.pow(j);
    return acc;
  }
  bool integer_coefficients() const {
    for (const auto& [j, v] : c)
      if (!is_integer(v)) return false;
    return true;
  }
  // exponents all congruent mod 2
  bool single_parity() const {
    if (c.empty()) return true;
    int p = ((c.begin()->first % 2) + 2) % 2;
    for (const auto& [j, v] : c)
      if (((j % 2) + 2) % 2 != p) return false;
    return true;
  }

  friend bool operator==(const LaurentZ& x, const LaurentZ& y) { return x.c == y.c; }

  std::string str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [j, v] : c) {
      if (!first) os << " + ";
      first = false;
      os << v;
      if (j != 0) os << "*z^" << j;
    }
    return os.str();
  }
};

// Quantum integer [r] = (q^{r/2} - q^{-r/2}) / (q^{1/2} - q^{-1/2}).
inline SqrtQ quantum_int(long long r, long long q) {
  SqrtQ acc(Rat(0));
  for (long long i = 0; i < r; ++i) acc = acc + q_half_pow(q, r - 1 - 2 * i);
  return acc;
}

// alpha_n = q^{n(n-1)/4} [n][n-1]...[1].
inline SqrtQ alpha_n(unsigned n, long long q) {
  SqrtQ acc = q_half_pow(q, static_cast<long long>(n) * (n - 1) / 2);
  for (long long r = 1; r <= n; ++r) acc = acc * quantum_int(r, q);
  return acc;
}

// Ruling polynomial value R^m_{S(K,beta)}(z(q)) = Aug_m(S(K,beta), q).
inline SqrtQ satellite_ruling_value(const Dga& K, const Braid& b, const std::vector<int>& mu,
                                    int m, long long q, RepCountOptions opt = {}) {
  Satellite T = build_satellite(K, b, mu);
  return aug_number(T.dga, m, q, opt);
}

// Aug_m(S(K,beta), q) = q^{-lambda_m(beta)/2} z^{-n} sum_d RepTilde_m(K, (V_beta, d), B^m_beta),
// both sides computed through independent pipelines.
struct TheoremAReport {
  SqrtQ lhs, rhs;
  bool equal = false;
};

inline TheoremAReport theorem_A_check(const Dga& K, const Braid& b, const std::vector<int>& mu,
                                      int m, long long q, RepCountOptions opt = {}) {
  TheoremAReport rep;
  rep.lhs = satellite_ruling_value(K, b, mu, m, q, opt);

  PathSubsetSpec spec(b, mu, m, q);
  GradedVS V{mu, q};
  Target cell = Target::from_pathset(spec);
  SqrtQ sum(Rat(0));
  for (const Mat& d : enumerate_differentials(V, m)) {
    RepProblem P{K, V, d, m, {}};
    P.targets.assign(K.components.size(), cell);
    sum = sum + reduced_rep_number(P, opt);
  }
  rep.rhs = q_half_pow(q, -lambda_m(b, mu, m)) * z_of_q(q).pow(-static_cast<long long>(b.n)) * sum;
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

// Recover the Laurent polynomial from its values at z = z(q).  Each sample
// yields rational equations: for non-square q the rational and sqrt(q) parts
// split (z^j is rational iff j is even), while square q folds both parities
// into one rational equation.  The joint system is solved exactly.
inline LaurentZ interpolate_ruling(const std::vector<std::pair<long long, SqrtQ>>& values,
                                   int j_min, int j_max) {
  if (j_min > j_max) throw std::invalid_argument("interpolate_ruling: empty window");
  const int cols = j_max - j_min + 1;
  std::vector<std::vector<Rat>> rows;  // augmented: cols coefficients + rhs

  for (const auto& [q, v] : values) {
    SqrtQ z = z_of_q(q);
    std::vector<SqrtQ> zp(cols);
    for (int j = j_min; j <= j_max; ++j) zp[j - j_min] = z.pow(j);
    if (z.is_rational()) {
      if (v.b != 0)
        throw std::invalid_argument("interpolate_ruling: irrational value at square q");
      std::vector<Rat> row(cols + 1);
      for (int k = 0; k < cols; ++k) row[k] = zp[k].a;
      row[cols] = v.a;
      rows.push_back(std::move(row));
    } else {
      std::vector<Rat> ra(cols + 1), rb(cols + 1);
      for (int k = 0; k < cols; ++k) {
        ra[k] = zp[k].a;
        rb[k] = zp[k].b;
      }
      ra[cols] = v.a;
      rb[cols] = v.b;
      rows.push_back(std::move(ra));
      rows.push_back(std::move(rb));
    }
  }

  // exact Gauss-Jordan elimination
  int rank = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int p = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(rows[rank], rows[p]);
    Rat s = rows[rank][c];
    for (auto& x : rows[rank]) x /= s;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rat f = rows[r][c];
      for (int k = 0; k <= cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (int r = rank; r < static_cast<int>(rows.size()); ++r)
    if (rows[r][cols] != 0)
      throw std::invalid_argument("interpolate_ruling: inconsistent system, window too small");
  if (rank < cols)
    throw std::invalid_argument("interpolate_ruling: underdetermined, need more points");

  LaurentZ out;
  for (int r = 0; r < rank; ++r) out.set(j_min + pivot_col[r], rows[r][cols]);
  for (const auto& [q, v] : values)
    if (out.eval(z_of_q(q)) != v)
      throw std::logic_error("interpolate_ruling: verification failed");
  return out;
}

// n-colored m-graded ruling polynomial value
// R^m_{n,K}(q) = alpha_n^{-1} sum_{beta in S_n} q^{l(beta)/2} R^m_{S(K,beta)}(z(q)),
// every pattern braid carrying Maslov potential 0.
struct ColoredRulingValue {
  unsigned n = 0;
  int m = 0;
  long long q = 0;
  SqrtQ value;
  std::map<std::vector<int>, SqrtQ> by_braid;  // keyed by permutation
};

inline ColoredRulingValue colored_ruling_satellite(const Dga& K, unsigned n, int m, long long q,
                                                   RepCountOptions opt = {}) {
  if (m == 1)
    throw std::invalid_argument(
        "colored_ruling: the m = 1 colored ruling polynomial is not defined");
  ColoredRulingValue out{n, m, q, SqrtQ(Rat(0)), {}};
  std::vector<int> mu(n, 0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SqrtQ acc(Rat(0));
  do {
    Braid b = reduced_word(perm);
    SqrtQ val = satellite_ruling_value(K, b, mu, m, q, opt);
    out.by_braid[perm] = val;
    acc = acc + q_half_pow(q, b.length()) * val;
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.value = acc / alpha_n(n, q);
  return out;
}

inline ColoredRulingValue colored_ruling_representation(const Dga& K, unsigned n, int m,
                                                        long long q, RepCountOptions opt = {}) {
  if (m == 1)
    throw std::invalid_argument(
        "colored_ruling: the m = 1 colored ruling polynomial is not defined");
  ColoredRulingValue out{n, m, q, SqrtQ(Rat(0)), {}};
  out.value = total_rep_number(K, n, m, q, opt);
  return out;
}

enum class ColoredRoute { Satellite, Representation, Both };

// When both routes are requested their agreement is enforced.
inline ColoredRulingValue colored_ruling(const Dga& K, unsigned n, int m, long long q,
                                         ColoredRoute route, RepCountOptions opt = {}) {
  if (route == ColoredRoute::Representation) return colored_ruling_representation(K, n, m, q, opt);
  ColoredRulingValue sat = colored_ruling_satellite(K, n, m, q, opt);
  if (route == ColoredRoute::Both) {
    ColoredRulingValue rep = colored_ruling_representation(K, n, m, q, opt);
    if (sat.value != rep.value)
      throw std::logic_error("colored_ruling: satellite and representation routes disagree");
  }
  return sat;
}

}  // namespace replab
