#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "replab/braid.hpp"
#include "replab/dga.hpp"
#include "replab/pathsets.hpp"
#include "replab/repcount.hpp"

namespace replab {

// Satellite presentation S(K, beta): the base knot's chords fatten to n x n
// blocks a^k_{ij}, the braid contributes crossing generators p_j and dip
// generators x_{ij}, y_{ij}, and each strand carries a basepoint t_i.
struct Satellite {
  Dga dga;
  Dga knot;                         // the base knot presentation
  BraidSymbols sym;                 // braid generator ids, valid in dga.alg
  std::vector<int> kchords;         // chord ids of `knot`
  std::vector<std::vector<int>> a;  // a[k][i*n + j]: block entries per chord
  int kt = -1;                      // basepoint id of `knot`
  PolyMat Pxy, Qxy;                 // path matrix of the braid and its inverse

  int n() const { return sym.n(); }
};

// Differentials of the braid generators, solved from the path matrix
// identity Sigma d(P^{xy}) = P^{xy} (Y Sigma) - (Y Sigma) P^{xy}.
struct BraidDiff {
  std::vector<NcPoly> dp;               // per crossing
  std::vector<std::vector<NcPoly>> dx;  // dx[i][j] for i < j
};

// Triangular solve against the Kalman form of P^{xz}.  Writing
// W = P^{xz} (I + X Sigma), the identity reads d(W) = Delta^{-1} Sigma
// [P^{xy}(Y Sigma) - (Y Sigma) P^{xy}] =: N.  Walking rows in the order
// perm[0], perm[1], ... and columns left to right, every entry of N meets at
// most one unsolved unknown: the pivot 1 in column r of row perm[r] isolates
// d x_{rc} for c > r, and a +/- p entry isolates that d p.  Remaining
// entries are consistency checks, re-verified at the end via the Leibniz
// rule on the full matrix identity.
inline BraidDiff solve_braid_differential(const BraidSymbols& S) {
  const int n = S.n();
  if (!kalman_form_check(S))
    throw std::invalid_argument("solve_braid_differential: braid word not reduced");
  PolyMat Pz = path_matrix_xz(S);
  PolyMat P = path_matrix_xy(S);
  PolyMat YS = y_sigma_matrix(S);
  PolyMat Sg = sigma_matrix(S);
  PolyMat dP = pm_mul(Sg, pm_sub(pm_mul(P, YS), pm_mul(YS, P)));
  PolyMat N = pm_mul(delta_matrix(S, true), dP);
  auto perm = permutation_of(S.braid);

  BraidDiff out;
  out.dp.assign(S.p.size(), NcPoly());
  out.dx.assign(n, std::vector<NcPoly>(n));

  auto p_index = [&](const NcPoly& e) {
    return static_cast<size_t>(
        std::find(S.p.begin(), S.p.end(), letter_gen(e.terms()[0].w[0])) - S.p.begin());
  };
  // derivative of a P^{xz} entry: zero for 0/1, +/- dp at a crossing slot
  auto dPz = [&](int i, int l) -> NcPoly {
    const NcPoly& e = Pz.at(i, l);
    if (e.is_zero() || e.terms()[0].w.empty()) return NcPoly();
    return out.dp[p_index(e)].scaled(e.terms()[0].c);
  };

  for (int r = 0; r < n; ++r) {
    int i = perm[r];
    for (int c = 0; c < n; ++c) {
      // known part of d(W)(i, c); the l = r pivot slot is the unknown
      NcPoly known;
      for (int l = 0; l < c; ++l) {
        if (l == r) continue;
        const NcPoly& e = Pz.at(i, l);
        if (e.is_zero()) continue;
        known = known + dPz(i, l) * NcPoly::gen(S.x[l][c], false, S.sigma[c]);
        int pdeg = S.alg.gens[letter_gen(e.terms()[0].w[0])].degree;
        long long sgn = (pdeg % 2 != 0 ? -1 : 1) * S.sigma[c];
        known = known + (e * out.dx[l][c]).scaled(sgn);
      }
      NcPoly rem = N.at(i, c) - known;
      if (c > r) {
        out.dx[r][c] = rem.scaled(S.sigma[c]);
      } else if (c < r && !Pz.at(i, c).is_zero()) {
        out.dp[p_index(Pz.at(i, c))] = rem.scaled(Pz.at(i, c).terms()[0].c);
      } else if (!rem.is_zero()) {
        throw std::logic_error("solve_braid_differential: inconsistent system");
      }
    }
  }

  // certify the redundant equations: Leibniz on P^{xy} reproduces the identity
  Dga tmp;
  tmp.alg = S.alg;
  tmp.diff.resize(tmp.alg.size());
  for (size_t j = 0; j < S.p.size(); ++j) tmp.diff[S.p[j]] = out.dp[j];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) tmp.diff[S.x[i][j]] = out.dx[i][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (apply_diff(tmp, P.at(i, j)) != dP.at(i, j))
        throw std::logic_error("solve_braid_differential: identity check failed");
  return out;
}

inline PolyMat a_block(const Satellite& T, size_t k) {
  const int n = T.n();
  PolyMat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M.at(i, j) = NcPoly::gen(T.a[k][i * n + j]);
  return M;
}

// Ring map Phi from the base knot's algebra to n x n matrices over the
// satellite algebra: a_k -> A_k Sigma, t -> P^{xy}, t^{-1} -> (P^{xy})^{-1}.
inline PolyMat satellite_phi(const Satellite& T, const NcPoly& w) {
  const int n = T.n();
  PolyMat Sg = sigma_matrix(T.sym);
  PolyMat out(n, n);
  for (const auto& t : w.terms()) {
    PolyMat acc(n, n);
    for (int i = 0; i < n; ++i) acc.at(i, i) = NcPoly::constant(t.c);
    for (Letter l : t.w) {
      int g = letter_gen(l);
      if (g == T.kt) {
        acc = pm_mul(acc, letter_inverse(l) ? T.Qxy : T.Pxy);
      } else {
        if (letter_inverse(l))
          throw std::invalid_argument("satellite_phi: inverted chord letter");
        size_t k = static_cast<size_t>(
            std::find(T.kchords.begin(), T.kchords.end(), g) - T.kchords.begin());
        if (k == T.kchords.size())
          throw std::invalid_argument("satellite_phi: unknown generator");
        acc = pm_mul(acc, pm_mul(a_block(T, k), Sg));
      }
    }
    out = pm_add(out, acc);
  }
  return out;
}

// Satellite of a one-basepoint knot presentation by an n-strand reduced
// permutation braid with Maslov potentials mu.  Components are the cycles of
// the braid permutation; the construction is gated by the structural checks.
inline Satellite build_satellite(const Dga& K, const Braid& b, const std::vector<int>& mu) {
  if (K.components.size() != 1 || K.components[0].size() != 1)
    throw std::invalid_argument("build_satellite: base knot needs a single basepoint");
  Satellite T;
  T.knot = K;
  T.kt = K.components[0][0];
  T.kchords = K.chord_ids();
  const int n = static_cast<int>(b.n);
  T.sym = make_braid_symbols(b, mu, -2 * K.rot);
  if (b.length() > 0 && !kalman_form_check(T.sym))
    throw std::invalid_argument("build_satellite: braid word not reduced");
  T.dga.name = "S(" + K.name + ", " + std::to_string(n) + "-strand)";
  T.dga.rot = n * K.rot;
  T.dga.alg = T.sym.alg;
  T.dga.diff.resize(T.dga.alg.size());

  for (int g : T.kchords) {
    int dg = K.alg.gens[g].degree;
    std::vector<int> ids(size_t(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ids[i * n + j] = T.dga.add_chord(
            K.alg.gens[g].name + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
            dg + mu[i] - mu[j]);
    T.a.push_back(std::move(ids));
  }
  T.Pxy = path_matrix_xy(T.sym);
  T.Qxy = path_matrix_xy_inverse(T.sym);

  auto bd = solve_braid_differential(T.sym);
  for (size_t j = 0; j < T.sym.p.size(); ++j) T.dga.set_diff(T.sym.p[j], bd.dp[j]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) T.dga.set_diff(T.sym.x[i][j], bd.dx[i][j]);

  PolyMat Sg = sigma_matrix(T.sym);
  PolyMat Yp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) Yp.at(i, j) = NcPoly::gen(T.sym.y[i][j]);

  // d Y = -Sigma Y Sigma Y
  PolyMat dY = pm_neg(pm_mul(Sg, pm_mul(Yp, pm_mul(Sg, Yp))));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) T.dga.set_diff(T.sym.y[i][j], dY.at(i, j));

  // d A_k = Sigma Phi(d a_k) Sigma - Sigma Y Sigma A_k +- Sigma A_k Sigma Y
  for (size_t k = 0; k < T.kchords.size(); ++k) {
    PolyMat Ak = a_block(T, k);
    PolyMat d = pm_mul(Sg, pm_mul(satellite_phi(T, K.diff[T.kchords[k]]), Sg));
    d = pm_sub(d, pm_mul(Sg, pm_mul(Yp, pm_mul(Sg, Ak))));
    PolyMat t3 = pm_mul(Sg, pm_mul(Ak, pm_mul(Sg, Yp)));
    d = K.alg.gens[T.kchords[k]].degree % 2 == 0 ? pm_add(d, t3) : pm_sub(d, t3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T.dga.set_diff(T.a[k][i * n + j], d.at(i, j));
  }

  for (const auto& cyc : perm_cycles(permutation_of(b))) {
    std::vector<int> comp;
    for (int s : cyc) comp.push_back(T.sym.t[s]);
    T.dga.components.push_back(std::move(comp));
  }

  auto chk = check_dga(T.dga);
  if (!chk.ok) throw std::logic_error("build_satellite: " + chk.errors.front());
  return T;
}

// Value of a word/polynomial under a scalar assignment on the generators.
inline unsigned eval_scalar(const Algebra& A, const NcPoly& p, const std::vector<unsigned>& val,
                            const Field& F) {
  unsigned acc = 0;
  for (const auto& t : p.terms()) {
    unsigned prod = F.from_int(t.c);
    for (Letter l : t.w) {
      if (!prod) break;
      unsigned v = val[letter_gen(l)];
      prod = F.mul(prod, letter_inverse(l) ? F.inv(v) : v);
    }
    acc = F.add(acc, prod);
  }
  return acc;
}

// All m-graded scalar augmentations of a presentation: unit values on
// basepoints, free values on chords of degree 0 mod m, zero elsewhere, with
// eps(d g) = 0 for every generator.  Pruned odometer over the free slots.
inline std::vector<std::vector<unsigned>> enumerate_augmentations(const Dga& D, int m,
                                                                  const Field& F) {
  if (m % 2 == 1 && F.p() != 2)
    throw std::invalid_argument("enumerate_augmentations: odd m requires characteristic 2");
  const int ng = D.alg.size();
  struct Slot {
    int id;
    bool unit;
  };
  std::vector<Slot> slots;
  std::vector<int> slot_of(ng, -1);
  for (int g = 0; g < ng; ++g) {
    const GenInfo& gi = D.alg.gens[g];
    if (gi.invertible) {
      if (!degree_zero_mod(gi.degree, m))
        throw std::invalid_argument("enumerate_augmentations: basepoint degree not 0 mod m");
      slot_of[g] = static_cast<int>(slots.size());
      slots.push_back({g, true});
    } else if (degree_zero_mod(gi.degree, m)) {
      slot_of[g] = static_cast<int>(slots.size());
      slots.push_back({g, false});
    }
  }
  double space = 1;
  for (const Slot& s : slots) space *= s.unit ? F.q() - 1 : F.q();
  if (space > double(1ull << 26))
    throw std::invalid_argument("enumerate_augmentations: assignment space too large");

  // attach each equation to the last free slot appearing in it
  std::vector<std::vector<int>> eqs_at(slots.size());
  std::vector<int> upfront;
  for (int g : D.chord_ids()) {
    if (D.diff[g].is_zero()) continue;
    int lev = -1;
    for (const auto& t : D.diff[g].terms())
      for (Letter l : t.w) lev = std::max(lev, slot_of[letter_gen(l)]);
    if (lev < 0)
      upfront.push_back(g);
    else
      eqs_at[lev].push_back(g);
  }

  std::vector<unsigned> val(ng, 0);
  std::vector<std::vector<unsigned>> out;
  for (int g : upfront)
    if (eval_scalar(D.alg, D.diff[g], val, F) != 0) return out;

  // depth-first sweep with pruning at each settled slot
  std::function<void(size_t)> rec = [&](size_t s) {
    if (s == slots.size()) {
      out.push_back(val);
      return;
    }
    for (unsigned v = slots[s].unit ? 1 : 0; v < F.q(); ++v) {
      val[slots[s].id] = v;
      bool ok = true;
      for (int g : eqs_at[s])
        if (eval_scalar(D.alg, D.diff[g], val, F) != 0) {
          ok = false;
          break;
        }
      if (ok) rec(s + 1);
    }
    val[slots[s].id] = 0;
  };
  rec(0);
  return out;
}

// Representation data induced by an augmentation of the satellite: the
// differential d = eps(Y Sigma) on V_beta and the matrices f(g) = eps(Phi(g))
// for the base knot's generators.
struct SatelliteRep {
  Mat d;
  std::map<int, Mat> f;  // keyed by base knot generator id
};

inline SatelliteRep aug_to_rep(const Satellite& T, const std::vector<unsigned>& eps,
                               const Field& F) {
  const int n = T.n();
  auto evalm = [&](const PolyMat& M) {
    Mat R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R.at(i, j) = eval_scalar(T.dga.alg, M.at(i, j), eps, F);
    return R;
  };
  PolyMat Sg = sigma_matrix(T.sym);
  SatelliteRep out;
  out.d = evalm(y_sigma_matrix(T.sym));
  for (size_t k = 0; k < T.kchords.size(); ++k)
    out.f[T.kchords[k]] = evalm(pm_mul(a_block(T, k), Sg));
  out.f[T.kt] = evalm(T.Pxy);
  return out;
}

// Inverse of aug_to_rep on its image: eps(y_{ij}) and eps(a^k_{ij}) are read
// off d and f(a_k), the braid scalars via ring map recovery from f(t).
inline std::vector<unsigned> rep_to_aug(const Satellite& T, const SatelliteRep& R,
                                        const PathSubsetSpec& spec) {
  const Field& F = spec.field();
  const int n = T.n();
  auto pa = recover_ring_map(R.f.at(T.kt), spec);
  if (!pa) throw std::invalid_argument("rep_to_aug: f(t) outside the path subset");
  std::vector<unsigned> eps(T.dga.alg.size(), 0);
  for (int i = 0; i < n; ++i) eps[T.sym.t[i]] = pa->t[i];
  for (size_t j = 0; j < T.sym.p.size(); ++j) eps[T.sym.p[j]] = pa->p[j];
  auto unsig = [&](unsigned v, int j) { return T.sym.sigma[j] < 0 ? F.neg(v) : v; };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      eps[T.sym.x[i][j]] = pa->x.at(i, j);
      eps[T.sym.y[i][j]] = unsig(R.d.at(i, j), j);
    }
  for (size_t k = 0; k < T.kchords.size(); ++k) {
    const Mat& fk = R.f.at(T.kchords[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) eps[T.a[k][i * n + j]] = unsig(fk.at(i, j), j);
  }
  return eps;
}

// Split of sigma_m over the satellite's generator classes, with the closed
// forms checked: the crossing part is lambda_m(beta), the dip part counts
// ordered strand pairs of equal potential mod m, and the chord part is the
// -End(V_beta) limit exponent of the base knot's degree distribution.
struct SigmaSplit {
  long long crossings = 0;
  long long dips = 0;
  long long chords = 0;
  long long total() const { return crossings + dips + chords; }
};

inline SigmaSplit sigma_decomposition(const Satellite& T, int m) {
  const int n = T.n();
  DegreeDist dcr, ddip, dch;
  for (size_t j = 0; j < T.sym.p.size(); ++j) ++dcr[T.dga.alg.gens[T.sym.p[j]].degree];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++ddip[T.dga.alg.gens[T.sym.x[i][j]].degree];
      ++ddip[T.dga.alg.gens[T.sym.y[i][j]].degree];
    }
  for (const auto& ids : T.a)
    for (int id : ids) ++dch[T.dga.alg.gens[id].degree];

  SigmaSplit out{sigma_m(dcr, m), sigma_m(ddip, m), sigma_m(dch, m)};
  if (out.crossings != lambda_m(T.sym.braid, T.sym.mu, m))
    throw std::logic_error("sigma_decomposition: crossing part != lambda_m");
  std::map<int, long long> cls;
  for (int mi : T.sym.mu) ++cls[m == 0 ? mi : mod_pos(mi, m)];
  long long pairs = 0;
  for (const auto& [c, cnt] : cls) pairs += cnt * (cnt - 1);
  if (out.dips != pairs)
    throw std::logic_error("sigma_decomposition: dip part != equal-potential pairs");
  GradedVS V{T.sym.mu, 2};
  if (out.chords != limit_exponent(degree_distribution(T.knot), V, m))
    throw std::logic_error("sigma_decomposition: chord part != limit exponent");
  if (out.total() != sigma_m(degree_distribution(T.dga), m))
    throw std::logic_error("sigma_decomposition: parts do not sum to sigma_m");
  return out;
}

}  // namespace replab
