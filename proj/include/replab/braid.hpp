#pragma once

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "replab/polymat.hpp"
#include "replab/sigma.hpp"

namespace replab {

// Positive braid word on n strands; letters are 1-based crossing indices
// (letter k crosses the strands in positions k, k+1), read left to right.
struct Braid {
  unsigned n = 0;
  std::vector<unsigned> letters;

  Braid() = default;
  Braid(unsigned strands, std::vector<unsigned> w) : n(strands), letters(std::move(w)) {
    for (unsigned k : letters)
      if (k < 1 || k >= n) throw std::invalid_argument("Braid: letter out of range");
  }
  unsigned length() const { return static_cast<unsigned>(letters.size()); }
};

// "s1 s2 s1" or "s1*s2*s1" or "id"; n defaults to max letter + 1.
inline Braid parse_braid(const std::string& text, unsigned n = 0) {
  std::string norm = text;
  for (char& c : norm)
    if (c == '*' || c == ',') c = ' ';
  std::istringstream is(norm);
  std::string tok;
  std::vector<unsigned> letters;
  unsigned maxk = 0;
  while (is >> tok) {
    if (tok == "id") continue;
    if (tok.size() >= 2 && (tok[0] == 's' || tok[0] == 'S')) tok = tok.substr(1);
    unsigned k = static_cast<unsigned>(std::stoul(tok));
    letters.push_back(k);
    maxk = std::max(maxk, k);
  }
  if (n == 0) n = maxk + 1;
  if (n < 2) n = 2;
  return Braid(n, std::move(letters));
}

// pi[i] = left-end position of the strand occupying position i at the right
// end (0-based).  Positive permutation braid convention: sigma_k acts by
// swapping positions k, k+1.
inline std::vector<int> permutation_of(const Braid& b) {
  std::vector<int> arr(b.n);
  std::iota(arr.begin(), arr.end(), 0);
  for (unsigned k : b.letters) std::swap(arr[k - 1], arr[k]);
  return arr;
}

inline long long inversions(const std::vector<int>& perm) {
  long long inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv;
}

// A positive word is a permutation braid iff every pair of strands crosses at
// most once, i.e. length equals the inversion count.
inline bool is_permutation_braid(const Braid& b) {
  return static_cast<long long>(b.letters.size()) == inversions(permutation_of(b));
}

bool is_reduced(const Braid& b);  // Kalman-pattern test, defined below

// Canonical reduced word for a permutation: repeatedly swap the largest
// descent (staircase insertion).  Round-trips with permutation_of.
inline Braid reduced_word(const std::vector<int>& perm) {
  unsigned n = static_cast<unsigned>(perm.size());
  std::vector<int> arr = perm;
  std::vector<unsigned> rec;
  for (;;) {
    int k = -1;
    for (int i = static_cast<int>(n) - 2; i >= 0; --i)
      if (arr[i] > arr[i + 1]) { k = i; break; }
    if (k < 0) break;
    std::swap(arr[k], arr[k + 1]);
    rec.push_back(static_cast<unsigned>(k + 1));
  }
  std::reverse(rec.begin(), rec.end());
  return Braid(n, std::move(rec));
}

inline std::vector<int> perm_inverse(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

// Cycles of the permutation: the satellite's link components.
inline std::vector<std::vector<int>> perm_cycles(const std::vector<int>& perm) {
  std::vector<std::vector<int>> cycles;
  std::vector<bool> seen(perm.size(), false);
  auto inv = perm_inverse(perm);
  for (size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    int x = static_cast<int>(i);
    while (!seen[x]) {
      seen[x] = true;
      cyc.push_back(x);
      x = inv[x];
    }
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

// Per-crossing data read off the front: at each letter the two strands just
// left of the crossing sit in positions k (upper, left label a) and k+1
// (lower, left label b).
struct Crossing {
  unsigned pos;   // letter index k (1-based)
  int upper, lower;  // left-end strand labels (0-based)
  int degree;     // mu[upper] - mu[lower]
  int sign_mu;    // Maslov value on the lower strand: sign (-1)^sign_mu
};

inline std::vector<Crossing> crossings_of(const Braid& b, const std::vector<int>& mu) {
  if (mu.size() != b.n) throw std::invalid_argument("crossings_of: mu size mismatch");
  std::vector<int> arr(b.n);
  std::iota(arr.begin(), arr.end(), 0);
  std::vector<Crossing> out;
  for (unsigned k : b.letters) {
    int a = arr[k - 1], c = arr[k];
    out.push_back({k, a, c, mu[a] - mu[c], mu[c]});
    std::swap(arr[k - 1], arr[k]);
  }
  return out;
}

// Degree multiset of the braid's crossings.
inline DegreeDist crossing_degrees(const Braid& b, const std::vector<int>& mu) {
  DegreeDist d;
  for (const auto& c : crossings_of(b, mu)) ++d[c.degree];
  return d;
}

// lambda_m(beta) = sigma_m of the crossing degree distribution; equals the
// braid length when mu is constant.
inline long long lambda_m(const Braid& b, const std::vector<int>& mu, int m) {
  return sigma_m(crossing_degrees(b, mu), m);
}

// Symbol table for the braid part of a satellite: crossings p_j, dip
// generators x_{ij}, y_{ij} (i < j), basepoints t_i.
struct BraidSymbols {
  Braid braid;
  std::vector<int> mu;
  Algebra alg;
  std::vector<int> p;                 // per crossing
  std::vector<std::vector<int>> x, y; // x[i][j], y[i][j] for i < j, else -1
  std::vector<int> t;
  std::vector<int> sigma;             // (-1)^{mu_i}

  int n() const { return static_cast<int>(braid.n); }
};

inline BraidSymbols make_braid_symbols(const Braid& b, const std::vector<int>& mu,
                                       int t_degree = 0, const std::string& prefix = "") {
  BraidSymbols S;
  S.braid = b;
  S.mu = mu;
  const int n = static_cast<int>(b.n);
  if (mu.size() != b.n) throw std::invalid_argument("make_braid_symbols: mu size mismatch");
  // the potential lives on the closed braid, so it is constant on cycles
  auto perm = permutation_of(b);
  for (int j = 0; j < n; ++j)
    if (mu[perm[j]] != mu[j])
      throw std::invalid_argument("make_braid_symbols: mu not constant on braid components");
  auto cr = crossings_of(b, mu);
  for (size_t j = 0; j < cr.size(); ++j)
    S.p.push_back(S.alg.add_gen(prefix + "p" + std::to_string(j + 1), cr[j].degree));
  S.x.assign(n, std::vector<int>(n, -1));
  S.y.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::string ij = std::to_string(i + 1) + "_" + std::to_string(j + 1);
      S.x[i][j] = S.alg.add_gen(prefix + "x" + ij, mu[i] - mu[j]);
      S.y[i][j] = S.alg.add_gen(prefix + "y" + ij, mu[i] - mu[j] - 1);
    }
  for (int i = 0; i < n; ++i)
    S.t.push_back(S.alg.add_gen(prefix + "t" + std::to_string(i + 1), t_degree, true));
  for (int i = 0; i < n; ++i) S.sigma.push_back(mu[i] % 2 == 0 ? 1 : -1);
  return S;
}

// Path matrix of the crossing part: product over crossings of the elementary
// matrix with block ((-1)^{mu'} p_j, 1; 1, 0) in rows/cols k, k+1.
inline PolyMat path_matrix_xz(const BraidSymbols& S) {
  const unsigned n = S.braid.n;
  PolyMat P = PolyMat::identity(n);
  auto cr = crossings_of(S.braid, S.mu);
  for (size_t j = 0; j < cr.size(); ++j) {
    PolyMat V = PolyMat::identity(n);
    unsigned k = cr[j].pos - 1;
    long long sgn = cr[j].sign_mu % 2 == 0 ? 1 : -1;
    V.at(k, k) = NcPoly::gen(S.p[j], false, sgn);
    V.at(k, k + 1) = NcPoly::constant(1);
    V.at(k + 1, k) = NcPoly::constant(1);
    V.at(k + 1, k + 1) = NcPoly::zero();
    P = pm_mul(P, V);
  }
  return P;
}

inline PolyMat path_matrix_xz_inverse(const BraidSymbols& S) {
  const unsigned n = S.braid.n;
  PolyMat P = PolyMat::identity(n);
  auto cr = crossings_of(S.braid, S.mu);
  for (size_t j = cr.size(); j-- > 0;) {
    PolyMat V = PolyMat::identity(n);
    unsigned k = cr[j].pos - 1;
    long long sgn = cr[j].sign_mu % 2 == 0 ? 1 : -1;
    V.at(k, k) = NcPoly::zero();
    V.at(k, k + 1) = NcPoly::constant(1);
    V.at(k + 1, k) = NcPoly::constant(1);
    V.at(k + 1, k + 1) = NcPoly::gen(S.p[j], false, -sgn);
    P = pm_mul(P, V);
  }
  return P;
}

// Delta = diag(t_i^{(-1)^{mu_i}}), X = strictly upper (x_{ij}),
// Sigma = diag((-1)^{mu_i}).
inline PolyMat delta_matrix(const BraidSymbols& S, bool inverse = false) {
  const int n = S.n();
  PolyMat D(n, n);
  for (int i = 0; i < n; ++i) {
    bool inv_exp = (S.mu[i] % 2 != 0);
    D.at(i, i) = NcPoly::gen(S.t[i], inverse ? !inv_exp : inv_exp);
  }
  return D;
}

inline PolyMat x_sigma_matrix(const BraidSymbols& S) {
  const int n = S.n();
  PolyMat X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      X.at(i, j) = NcPoly::gen(S.x[i][j], false, S.sigma[j]);
  return X;
}

inline PolyMat y_sigma_matrix(const BraidSymbols& S) {
  const int n = S.n();
  PolyMat Y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      Y.at(i, j) = NcPoly::gen(S.y[i][j], false, S.sigma[j]);
  return Y;
}

inline PolyMat sigma_matrix(const BraidSymbols& S) {
  const int n = S.n();
  PolyMat M(n, n);
  for (int i = 0; i < n; ++i) M.at(i, i) = NcPoly::constant(S.sigma[i]);
  return M;
}

// P^{xy} = Delta . P^{xz} . (I + X Sigma).
inline PolyMat path_matrix_xy(const BraidSymbols& S) {
  PolyMat IXS = pm_add(PolyMat::identity(S.braid.n), x_sigma_matrix(S));
  return pm_mul(delta_matrix(S), pm_mul(path_matrix_xz(S), IXS));
}

// (I + X Sigma)^{-1} = sum_r (-X Sigma)^r, nilpotent so the sum is finite.
inline PolyMat ixs_inverse(const BraidSymbols& S) {
  const unsigned n = S.braid.n;
  PolyMat XS = x_sigma_matrix(S);
  PolyMat acc = PolyMat::identity(n), pw = PolyMat::identity(n);
  for (unsigned r = 1; r < n; ++r) {
    pw = pm_mul(pw, pm_neg(XS));
    acc = pm_add(acc, pw);
  }
  return acc;
}

inline PolyMat path_matrix_xy_inverse(const BraidSymbols& S) {
  return pm_mul(ixs_inverse(S), pm_mul(path_matrix_xz_inverse(S), delta_matrix(S, true)));
}

// Kalman pattern check for a reduced braid: column j of P^{xz} has a single 1
// in row perm[j]; other nonzero entries are +/- one crossing generator, lying
// above the 1 of their column and left of the 1 of their row.
inline bool kalman_form_check(const BraidSymbols& S) {
  PolyMat P = path_matrix_xz(S);
  auto perm = permutation_of(S.braid);
  const int n = S.n();
  std::vector<int> seen_p;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const NcPoly& entry = P.at(i, j);
      if (i == perm[j]) {
        if (entry != NcPoly::constant(1)) return false;
        continue;
      }
      if (entry.is_zero()) continue;
      if (entry.terms().size() != 1) return false;
      const auto& t = entry.terms()[0];
      if (t.w.size() != 1 || std::abs(t.c) != 1) return false;
      if (letter_inverse(t.w[0])) return false;
      int g = letter_gen(t.w[0]);
      if (std::find(S.p.begin(), S.p.end(), g) == S.p.end()) return false;
      if (std::find(seen_p.begin(), seen_p.end(), g) != seen_p.end()) return false;
      seen_p.push_back(g);
      // above the 1 in its column, left of the 1 in its row
      if (i >= perm[j]) return false;
      int jrow = static_cast<int>(std::find(perm.begin(), perm.end(), i) - perm.begin());
      if (j >= jrow) return false;
    }
  }
  return static_cast<unsigned>(seen_p.size()) == S.braid.length();
}

// Reduced braid word: the word's path matrix is in Kalman form.  (Stricter
// than being a permutation braid: sigma_1 sigma_2 sigma_1 sigma_3 crosses each
// strand pair once but its path matrix carries a p_1 p_3 product.)
inline bool is_reduced(const Braid& b) {
  if (!is_permutation_braid(b)) return false;
  return kalman_form_check(make_braid_symbols(b, std::vector<int>(b.n, 0)));
}

}  // namespace replab
