#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "replab/dga.hpp"
#include "replab/linalg.hpp"
#include "replab/pathsets.hpp"
#include "replab/sqrtq.hpp"

namespace replab {

// Graded vector space F_q^n with basis degrees |e_i|.
struct GradedVS {
  std::vector<int> deg;
  long long q = 2;

  unsigned dim() const { return static_cast<unsigned>(deg.size()); }
  const Field& field() const { return Field::get(q); }
};

// Entry count of the degree-k block of -End(V): (i, j) allowed iff
// |e_j| - |e_i| = k mod m.  |B^m_k| = q^{block_dim}.
inline long long block_dim(const GradedVS& V, long long k, int m) {
  long long c = 0;
  for (int di : V.deg)
    for (int dj : V.deg)
      if (degree_zero_mod(dj - di - k, m)) ++c;
  return c;
}

inline bool valid_differential(const GradedVS& V, const Mat& d, int m) {
  const unsigned n = V.dim();
  if (d.rows != n || d.cols != n) return false;
  const Field& F = V.field();
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (d.at(i, j) && (j <= i || !degree_zero_mod(V.deg[i] - V.deg[j] - 1, m)))
        return false;
  return mat_mul(F, d, d).is_zero();
}

// All strictly upper triangular, degree +1 mod m, square-zero matrices.
inline std::vector<Mat> enumerate_differentials(const GradedVS& V, int m) {
  const unsigned n = V.dim();
  const Field& F = V.field();
  std::vector<std::pair<unsigned, unsigned>> slots;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (degree_zero_mod(V.deg[i] - V.deg[j] - 1, m)) slots.emplace_back(i, j);
  unsigned long long total = 1;
  for (size_t i = 0; i < slots.size(); ++i) {
    total *= F.q();
    if (total > (1ull << 24))
      throw std::invalid_argument("enumerate_differentials: space too large");
  }
  std::vector<Mat> out;
  for (unsigned long long code = 0; code < total; ++code) {
    Mat d(n, n);
    unsigned long long c = code;
    for (auto [i, j] : slots) {
      d.at(i, j) = static_cast<unsigned>(c % F.q());
      c /= F.q();
    }
    if (mat_mul(F, d, d).is_zero()) out.push_back(std::move(d));
  }
  return out;
}

// Per-component target set for the basepoint product f(s_i).
struct Target {
  enum class Kind { Units, Matrices };
  Kind kind = Kind::Units;
  std::set<Mat> matrices;

  static Target units() { return Target{}; }
  static Target explicit_set(std::set<Mat> ms) {
    return Target{Kind::Matrices, std::move(ms)};
  }
  static Target from_pathset(const PathSubsetSpec& spec) {
    auto cell = enumerate_path_subset(spec);
    return explicit_set(std::set<Mat>(cell.begin(), cell.end()));
  }
  bool contains(const Field& F, const Mat& A) const {
    if (kind == Kind::Units) return mat_invertible(F, A);
    return matrices.count(A) > 0;
  }
};

struct RepProblem {
  Dga dga;
  GradedVS V;
  Mat d;
  int m = 0;
  std::vector<Target> targets;  // one per component
};

inline void validate_problem(const RepProblem& P) {
  if (P.m < 0) throw std::invalid_argument("rep problem: m >= 0 required");
  if (P.m % 2 == 0 && P.dga.rot != 0)
    throw std::invalid_argument("rep problem: even m requires rotation number 0");
  if (P.m % 2 == 1) {
    unsigned q = P.V.field().q();
    if (q % 2 != 0) throw std::invalid_argument("rep problem: odd m requires characteristic 2");
  }
  if (P.m != 0 && (2 * P.dga.rot) % P.m != 0)
    throw std::invalid_argument("rep problem: m must divide 2r");
  if (P.dga.components.empty())
    throw std::invalid_argument("rep problem: presentation has no components");
  if (P.targets.size() != P.dga.components.size())
    throw std::invalid_argument("rep problem: one target per component required");
  if (!valid_differential(P.V, P.d, P.m))
    throw std::invalid_argument("rep problem: invalid differential");
}

namespace detail {

struct EFactor {
  int var = -1;  // generator id, or -1 for a constant factor
  bool inv = false;
  Mat cst;
};

struct ETerm {
  unsigned coeff = 1;
  std::vector<EFactor> factors;
};

struct Eqn {
  std::vector<ETerm> terms;
};

struct VarInfo {
  int degree = 0;
  bool invertible = false;
  std::vector<unsigned> mask;      // flat entry indices allowed for f(g)
  std::vector<unsigned> mask_inv;  // allowed for f(g)^{-1}
  std::vector<int> eqs;            // equations mentioning this generator
  int component = -1;              // for basepoints: owning component
};

struct Compiled {
  const Field* F = nullptr;
  unsigned n = 0;
  std::vector<VarInfo> vars;
  std::vector<Eqn> eqs;
  std::vector<std::vector<int>> comps;  // basepoint var ids per component
  const std::vector<Target>* targets = nullptr;
  unsigned long long units_block0 = 0;  // invertible matrices in the 0 block
  std::vector<int> plan;  // preferred enumeration order from root-state analysis
};

inline std::vector<unsigned> entry_mask(const GradedVS& V, int deg, int m) {
  std::vector<unsigned> mask;
  const unsigned n = V.dim();
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (degree_zero_mod(V.deg[j] - V.deg[i] - deg, m)) mask.push_back(i * n + j);
  return mask;
}

// Plan the enumeration order ahead of the search.  On an abstract copy of the
// system (variables either assigned or not, no values) an equation resolves
// once every term has at most one unassigned occurrence, and resolving a batch
// of equations assigns all their unknowns at once, mirroring the joint linear
// solve.  Beam search over "which variables to enumerate" then minimizes the
// total number of enumerated matrix entries, i.e. the exponent of the branch
// space.  Greedy one-step scoring misses orders where enumerating a few
// cheap variables first lets a large block be solved linearly.
inline void compute_plan(Compiled& C) {
  const int nv = static_cast<int>(C.vars.size());
  const int ne = static_cast<int>(C.eqs.size());
  if (ne == 0 || nv == 0 || nv > 4000) return;

  // pinned-to-zero variables (empty block): terms containing one in plain
  // form are identically zero and carry no information
  std::vector<char> pinned(nv, 0);
  for (int v = 0; v < nv; ++v)
    if (C.vars[v].mask.empty() && !C.vars[v].invertible) pinned[v] = 1;

  std::vector<std::vector<std::vector<int>>> aeqs(ne);
  std::vector<std::vector<int>> var_eqs(nv);
  for (int e = 0; e < ne; ++e) {
    for (const auto& t : C.eqs[e].terms) {
      bool dead = false;
      std::vector<int> occ;
      for (const auto& f : t.factors) {
        if (f.var < 0) continue;
        if (pinned[f.var] && !f.inv) dead = true;
        occ.push_back(f.var);
      }
      if (dead) continue;
      for (int v : occ)
        if (var_eqs[v].empty() || var_eqs[v].back() != e) var_eqs[v].push_back(e);
      aeqs[e].push_back(std::move(occ));
    }
  }

  struct PState {
    std::vector<char> asn, done;
    int cost = 0;
    std::vector<int> order;
  };
  // Resolving a batch of affine equations costs nothing when the joint linear
  // system pins its unknowns, but each excess unknown cell beyond the equation
  // rows is a nullspace dimension the solver has to enumerate, so charge it.
  const int nn = static_cast<int>(C.n * C.n);
  auto cascade = [&](PState& st) {
    for (;;) {
      // residuals of unassigned occurrences per term, reduced by monomial
      // facts: an equation whose only incomplete term is a product of
      // unassigned variables pins that monomial's value, completing matching
      // subproducts elsewhere (mirrors the engine's fact propagation)
      std::vector<std::vector<std::vector<int>>> resid(ne);
      for (int e = 0; e < ne; ++e) {
        if (st.done[e]) continue;
        for (const auto& t : aeqs[e]) {
          std::vector<int> r;
          for (int v : t)
            if (!st.asn[v]) r.push_back(v);
          std::sort(r.begin(), r.end());
          resid[e].push_back(std::move(r));
        }
      }
      std::vector<std::vector<int>> mono;
      auto take_sub = [](std::vector<int>& r, const std::vector<int>& key) {
        if (key.size() > r.size()) return false;
        std::vector<size_t> hit;
        size_t from = 0;
        for (int k : key) {
          bool found = false;
          for (size_t i = from; i < r.size(); ++i)
            if (r[i] == k) {
              hit.push_back(i);
              from = i + 1;
              found = true;
              break;
            }
          if (!found) return false;
        }
        for (size_t i = hit.size(); i-- > 0;) r.erase(r.begin() + hit[i]);
        return true;
      };
      for (bool ch = true; ch;) {
        ch = false;
        for (int e = 0; e < ne; ++e) {
          if (st.done[e]) continue;
          int ninc = 0, incidx = -1;
          for (size_t t = 0; t < resid[e].size(); ++t)
            if (!resid[e][t].empty()) {
              ++ninc;
              incidx = static_cast<int>(t);
            }
          if (ninc != 1 || resid[e][incidx].size() < 2) continue;
          const std::vector<int> key = resid[e][incidx];
          bool known = false;
          for (const auto& m : mono) known = known || m == key;
          if (known) continue;
          mono.push_back(key);
          ch = true;
          for (int e2 = 0; e2 < ne; ++e2) {
            if (e2 == e || st.done[e2]) continue;
            for (auto& r : resid[e2])
              while (!r.empty() && take_sub(r, key)) {
              }
          }
        }
      }
      std::vector<int> batch;
      for (int e = 0; e < ne; ++e) {
        if (st.done[e]) continue;
        bool affine = true;
        for (const auto& r : resid[e])
          if (r.size() > 1) affine = false;
        if (affine) batch.push_back(e);
      }
      if (batch.empty()) return;
      int rows = 0, cells = 0;
      std::vector<int> newly;
      for (int e : batch) {
        st.done[e] = 1;
        if (!aeqs[e].empty()) rows += nn;
        for (const auto& r : resid[e])
          for (int v : r)
            if (!st.asn[v]) {
              st.asn[v] = 1;
              cells += static_cast<int>(C.vars[v].mask.size());
              newly.push_back(v);
            }
      }
      // excess cells become kernel dimensions; those landing on unknowns
      // with no equations left are multiplied out by the solver, the rest
      // get enumerated
      int eligible = 0;
      for (int v : newly) {
        if (C.vars[v].invertible) continue;
        bool elsewhere = false;
        for (int e : var_eqs[v]) elsewhere = elsewhere || !st.done[e];
        if (!elsewhere) eligible += static_cast<int>(C.vars[v].mask.size());
      }
      int charge = cells - rows - eligible;
      if (charge > 0) st.cost += charge;
    }
  };
  auto solved = [&](const PState& st) {
    for (char d : st.done)
      if (!d) return false;
    return true;
  };

  PState init;
  init.asn.assign(nv, 0);
  init.done.assign(ne, 0);
  for (int v = 0; v < nv; ++v)
    if (C.vars[v].mask.empty()) init.asn[v] = 1;
  cascade(init);
  if (solved(init)) return;

  const size_t beam = 24;
  const int max_depth = 40;
  int best_cost = std::numeric_limits<int>::max();
  std::vector<int> best_order;
  std::vector<PState> frontier{std::move(init)};
  for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    std::vector<PState> next;
    std::map<std::vector<char>, size_t> seen;
    for (const PState& st : frontier) {
      for (int v = 0; v < nv; ++v) {
        if (st.asn[v]) continue;
        bool pending = false;
        for (int e : var_eqs[v]) pending = pending || !st.done[e];
        if (!pending) continue;
        PState ns = st;
        ns.asn[v] = 1;
        ns.cost += static_cast<int>(C.vars[v].mask.size());
        ns.order.push_back(v);
        cascade(ns);
        if (ns.cost >= best_cost) continue;
        if (solved(ns)) {
          best_cost = ns.cost;
          best_order = ns.order;
          continue;
        }
        auto it = seen.find(ns.asn);
        if (it != seen.end()) {
          if (next[it->second].cost > ns.cost) next[it->second] = std::move(ns);
        } else {
          seen.emplace(ns.asn, next.size());
          next.push_back(std::move(ns));
        }
      }
    }
    std::sort(next.begin(), next.end(),
              [](const PState& a, const PState& b) { return a.cost < b.cost; });
    if (next.size() > beam) next.resize(beam);
    frontier = std::move(next);
  }
  C.plan = std::move(best_order);
}

inline Compiled compile_problem(const RepProblem& P) {
  validate_problem(P);
  Compiled C;
  C.F = &P.V.field();
  C.n = P.V.dim();
  C.targets = &P.targets;
  const Field& F = *C.F;

  const int ngen = P.dga.alg.size();
  C.vars.resize(ngen);
  for (int g = 0; g < ngen; ++g) {
    const GenInfo& gi = P.dga.alg.gens[g];
    C.vars[g].degree = gi.degree;
    C.vars[g].invertible = gi.invertible;
    C.vars[g].mask = entry_mask(P.V, gi.degree, P.m);
    C.vars[g].mask_inv = entry_mask(P.V, -gi.degree, P.m);
  }
  C.comps = P.dga.components;
  for (size_t c = 0; c < C.comps.size(); ++c)
    for (int id : C.comps[c]) C.vars[id].component = static_cast<int>(c);

  // invertibles supported on the degree-0 block: product of GL(n_c, q) over
  // the degree classes (the block is exactly block-diagonal by class)
  {
    std::vector<int> reps;
    C.units_block0 = 1;
    for (unsigned i = 0; i < C.n; ++i) {
      bool seen = false;
      for (int r : reps) seen = seen || degree_zero_mod(P.V.deg[i] - r, P.m);
      if (seen) continue;
      reps.push_back(P.V.deg[i]);
      unsigned cnt = 0;
      for (unsigned j = 0; j < C.n; ++j)
        if (degree_zero_mod(P.V.deg[j] - P.V.deg[i], P.m)) ++cnt;
      C.units_block0 *= gl_order(cnt, F.q());
    }
  }

  // f(dg) - d f(g) + (-1)^{|g|} f(g) d = 0, for every generator
  const bool have_d = !P.d.is_zero();
  for (int g = 0; g < ngen; ++g) {
    Eqn eq;
    for (const auto& t : P.dga.diff[g].terms()) {
      unsigned c = F.from_int(t.c);
      if (!c) continue;
      ETerm term;
      term.coeff = c;
      for (Letter l : t.w) term.factors.push_back({letter_gen(l), letter_inverse(l), Mat()});
      eq.terms.push_back(std::move(term));
    }
    if (have_d) {
      ETerm left;
      left.coeff = F.neg(1);
      left.factors.push_back({-1, false, P.d});
      left.factors.push_back({g, false, Mat()});
      eq.terms.push_back(std::move(left));
      ETerm right;
      right.coeff = P.dga.alg.gens[g].degree % 2 == 0 ? 1 : F.neg(1);
      right.factors.push_back({g, false, Mat()});
      right.factors.push_back({-1, false, P.d});
      eq.terms.push_back(std::move(right));
    }
    if (eq.terms.empty()) continue;
    int id = static_cast<int>(C.eqs.size());
    for (const auto& t : eq.terms)
      for (const auto& f : t.factors)
        if (f.var >= 0 && (C.vars[f.var].eqs.empty() || C.vars[f.var].eqs.back() != id))
          C.vars[f.var].eqs.push_back(id);
    C.eqs.push_back(std::move(eq));
  }
  compute_plan(C);
  return C;
}

// Backtracking search with joint linear propagation.
class RepEngine {
 public:
  explicit RepEngine(const Compiled& C) : C_(&C), F_(C.F) {
    const int nv = static_cast<int>(C.vars.size());
    val_.assign(nv, Mat(C.n, C.n));
    vinv_.assign(nv, Mat(C.n, C.n));
    assigned_.assign(nv, 0);
    eq_done_.assign(C.eqs.size(), 0);
  }

  unsigned long long run(unsigned threads) {
    // generators with empty block are pinned to zero from the start
    for (size_t v = 0; v < C_->vars.size(); ++v)
      if (C_->vars[v].mask.empty()) {
        if (C_->vars[v].invertible) return 0;
        assigned_[v] = 1;
      }
    fork_budget_ = threads;
    return search();
  }

 private:
  const Compiled* C_;
  const Field* F_;
  std::vector<Mat> val_, vinv_;
  std::vector<char> assigned_, eq_done_;
  unsigned fork_budget_ = 1;

  const Mat& fmat(const EFactor& f) const {
    if (f.var < 0) return f.cst;
    return f.inv ? vinv_[f.var] : val_[f.var];
  }

  Mat term_value(const ETerm& t) const {
    const unsigned n = C_->n;
    Mat acc(n, n);
    if (t.factors.empty()) {
      for (unsigned i = 0; i < n; ++i) acc.at(i, i) = t.coeff;
      return acc;
    }
    acc = fmat(t.factors[0]);
    for (size_t k = 1; k < t.factors.size(); ++k) acc = mat_mul(*F_, acc, fmat(t.factors[k]));
    return mat_scale(*F_, t.coeff, acc);
  }

  // occurrence scan of one equation under the current assignment
  struct EqScan {
    bool complete = true;
    bool affine = true;  // every term has at most one unassigned occurrence
    std::vector<std::pair<int, bool>> occs;  // (var, inverted) of unassigned occurrences
  };

  EqScan scan_eq(const Eqn& eq) const {
    EqScan s;
    for (const auto& t : eq.terms) {
      int cnt = 0;
      for (const auto& f : t.factors)
        if (f.var >= 0 && !assigned_[f.var]) {
          ++cnt;
          s.occs.emplace_back(f.var, f.inv);
        }
      if (cnt > 0) s.complete = false;
      if (cnt > 1) s.affine = false;
    }
    return s;
  }

  bool var_free_elsewhere(int v, const std::vector<int>& solved_eqs) const {
    for (int e : C_->vars[v].eqs) {
      if (eq_done_[e]) continue;
      bool in_solved = false;
      for (int s : solved_eqs) in_solved = in_solved || s == e;
      if (!in_solved) return false;
    }
    return true;
  }

  // assign a var from an unknown-vector block; returns false when an
  // invertibility requirement fails
  bool place_var(int v, bool inv_form, const std::vector<unsigned>& x, unsigned off) {
    const auto& mask = inv_form ? C_->vars[v].mask_inv : C_->vars[v].mask;
    Mat M(C_->n, C_->n);
    for (size_t k = 0; k < mask.size(); ++k) M.e[mask[k]] = x[off + k];
    if (C_->vars[v].invertible || inv_form) {
      Mat Minv;
      if (!mat_inverse(*F_, M, Minv)) return false;
      if (inv_form) {
        vinv_[v] = M;
        val_[v] = Minv;
      } else {
        val_[v] = M;
        vinv_[v] = Minv;
      }
    } else {
      val_[v] = M;
    }
    assigned_[v] = 1;
    return true;
  }

  unsigned long long search() {
    const unsigned n = C_->n;
    std::vector<int> completed, affine_ids;

    // settle complete equations, collect affine candidates
    std::vector<EqScan> scans(C_->eqs.size());
    for (size_t e = 0; e < C_->eqs.size(); ++e) {
      if (eq_done_[e]) continue;
      scans[e] = scan_eq(C_->eqs[e]);
      if (scans[e].complete) {
        Mat acc(n, n);
        for (const auto& t : C_->eqs[e].terms) acc = mat_add(*F_, acc, term_value(t));
        if (!acc.is_zero()) {
          for (int ee : completed) eq_done_[ee] = 0;
          return 0;
        }
        eq_done_[e] = 1;
        completed.push_back(static_cast<int>(e));
      } else if (scans[e].affine) {
        affine_ids.push_back(static_cast<int>(e));
      }
    }
    auto unwind = [&]() {
      for (int ee : completed) eq_done_[ee] = 0;
    };

    if (!affine_ids.empty()) {
      // choose a form for each variable: plain wins when both appear
      std::vector<char> plain_seen(C_->vars.size(), 0), inv_seen(C_->vars.size(), 0);
      for (int e : affine_ids)
        for (auto [v, iv] : scans[e].occs) (iv ? inv_seen : plain_seen)[v] = 1;
      std::vector<int> usable;
      for (int e : affine_ids) {
        bool ok = true;
        for (auto [v, iv] : scans[e].occs)
          if (iv && plain_seen[v]) ok = false;
        if (ok) usable.push_back(e);
      }
      if (!usable.empty()) {
        unsigned long long r = solve_affine(usable, plain_seen);
        unwind();
        return r;
      }
    }

    // free sweep: unassigned variables with no pending equation
    std::vector<int> swept;
    unsigned long long mult = 1;
    auto pending = [&](int v) {
      for (int e : C_->vars[v].eqs)
        if (!eq_done_[e]) return true;
      return false;
    };
    for (size_t v = 0; v < C_->vars.size(); ++v) {
      if (assigned_[v] || pending(static_cast<int>(v))) continue;
      const VarInfo& vi = C_->vars[v];
      if (!vi.invertible) {
        for (size_t k = 0; k < vi.mask.size(); ++k) mult *= F_->q();
        assigned_[v] = 1;
        val_[v] = Mat(n, n);
        swept.push_back(static_cast<int>(v));
      } else if ((*C_->targets)[vi.component].kind == Target::Kind::Units) {
        mult *= C_->units_block0;
        val_[v] = Mat::identity(n);
        vinv_[v] = Mat::identity(n);
        assigned_[v] = 1;
        swept.push_back(static_cast<int>(v));
      }
    }
    auto unwind_all = [&]() {
      for (int v : swept) assigned_[v] = 0;
      unwind();
    };

    int pick = -1;
    // follow the precomputed enumeration plan while it applies
    for (int v : C_->plan)
      if (!assigned_[v] && pending(v)) {
        pick = v;
        break;
      }
    if (pick < 0) {
      // fallback: prefer the variable unlocking the most equations
      int best_score = -1;
      for (size_t v = 0; v < C_->vars.size(); ++v) {
        if (assigned_[v]) continue;
        int score = 0;
        for (size_t e = 0; e < C_->eqs.size(); ++e) {
          if (eq_done_[e] || scans[e].complete || scans[e].affine) continue;
          bool becomes = true;
          for (const auto& t : C_->eqs[e].terms) {
            int cnt = 0;
            for (const auto& f : t.factors)
              if (f.var >= 0 && !assigned_[f.var] && f.var != static_cast<int>(v)) ++cnt;
            if (cnt > 1) becomes = false;
          }
          if (becomes) ++score;
        }
        if (score > best_score) {
          best_score = score;
          pick = static_cast<int>(v);
        }
      }
    }

    if (pick < 0) {  // everything assigned: check the targets
      unsigned long long r = mult * (targets_ok() ? 1 : 0);
      unwind_all();
      return r;
    }

    unsigned long long r = enumerate_var(pick);
    unwind_all();
    return mult * r;
  }

  unsigned long long solve_affine(const std::vector<int>& eq_ids,
                                  const std::vector<char>& plain_seen) {
    const unsigned n = C_->n, nn = n * n;
    const Field& F = *F_;

    // unknown layout
    std::vector<int> uvars;
    std::vector<char> uform;  // 1 = inverse form
    std::vector<unsigned> uoff;
    std::vector<char> seen(C_->vars.size(), 0);
    unsigned total = 0;
    for (int e : eq_ids)
      for (const auto& t : C_->eqs[e].terms)
        for (const auto& f : t.factors)
          if (f.var >= 0 && !assigned_[f.var] && !seen[f.var]) {
            seen[f.var] = 1;
            bool inv_form = !plain_seen[f.var];
            uvars.push_back(f.var);
            uform.push_back(inv_form);
            uoff.push_back(total);
            total += static_cast<unsigned>(
                (inv_form ? C_->vars[f.var].mask_inv : C_->vars[f.var].mask).size());
          }

    std::vector<std::vector<unsigned>> rows;
    std::vector<unsigned> rhs;
    rows.reserve(eq_ids.size() * nn);
    for (int e : eq_ids) {
      std::vector<std::vector<unsigned>> block(nn, std::vector<unsigned>(total, 0));
      Mat cst(n, n);
      for (const auto& t : C_->eqs[e].terms) {
        int upos = -1;
        for (size_t k = 0; k < t.factors.size(); ++k)
          if (t.factors[k].var >= 0 && !assigned_[t.factors[k].var])
            upos = static_cast<int>(k);
        if (upos < 0) {
          cst = mat_add(F, cst, term_value(t));
          continue;
        }
        Mat A = Mat::identity(n);
        for (unsigned i = 0; i < n; ++i) A.at(i, i) = t.coeff;
        for (int k = 0; k < upos; ++k) A = mat_mul(F, A, fmat(t.factors[k]));
        Mat B = Mat::identity(n);
        for (size_t k = upos + 1; k < t.factors.size(); ++k)
          B = mat_mul(F, B, fmat(t.factors[k]));
        int uv = t.factors[upos].var;
        int uidx = -1;
        for (size_t k = 0; k < uvars.size(); ++k)
          if (uvars[k] == uv) uidx = static_cast<int>(k);
        const auto& mask = uform[uidx] ? C_->vars[uv].mask_inv : C_->vars[uv].mask;
        for (size_t k = 0; k < mask.size(); ++k) {
          unsigned i = mask[k] / n, j = mask[k] % n;
          for (unsigned r = 0; r < n; ++r)
            for (unsigned c = 0; c < n; ++c) {
              unsigned coef = F.mul(A.at(r, i), B.at(j, c));
              if (coef)
                block[r * n + c][uoff[uidx] + k] =
                    F.add(block[r * n + c][uoff[uidx] + k], coef);
            }
        }
      }
      for (unsigned rc = 0; rc < nn; ++rc) {
        rows.push_back(std::move(block[rc]));
        rhs.push_back(F.neg(cst.e[rc]));
      }
    }

    // drop unknowns whose coefficient columns all vanished under the current
    // assignment: the equations hold for any value of those variables, so
    // they stay unassigned for later levels instead of inflating the nullity
    {
      auto ulen = [&](size_t k) {
        return static_cast<unsigned>(
            (uform[k] ? C_->vars[uvars[k]].mask_inv : C_->vars[uvars[k]].mask).size());
      };
      std::vector<char> touched(uvars.size(), 0);
      for (const auto& row : rows)
        for (size_t k = 0; k < uvars.size(); ++k) {
          if (touched[k]) continue;
          for (unsigned c = 0; c < ulen(k); ++c)
            if (row[uoff[k] + c]) {
              touched[k] = 1;
              break;
            }
        }
      size_t live = 0;
      for (char t : touched) live += t;
      if (live < uvars.size()) {
        std::vector<int> nvars;
        std::vector<char> nform;
        std::vector<unsigned> noff;
        std::vector<std::pair<unsigned, unsigned>> segs;  // (old offset, length)
        unsigned ntotal = 0;
        for (size_t k = 0; k < uvars.size(); ++k) {
          if (!touched[k]) continue;
          nvars.push_back(uvars[k]);
          nform.push_back(uform[k]);
          noff.push_back(ntotal);
          segs.emplace_back(uoff[k], ulen(k));
          ntotal += ulen(k);
        }
        for (auto& row : rows) {
          std::vector<unsigned> nrow(ntotal, 0);
          for (size_t s = 0; s < segs.size(); ++s)
            for (unsigned c = 0; c < segs[s].second; ++c) nrow[noff[s] + c] = row[segs[s].first + c];
          row = std::move(nrow);
        }
        uvars = std::move(nvars);
        uform = std::move(nform);
        uoff = std::move(noff);
        total = ntotal;
      }
    }

    LinSolution sol = solve_linear(F, std::move(rows), std::move(rhs));
    if (!sol.consistent) return 0;

    // fast path: a kernel direction supported only on plain non-invertible
    // unknowns with no pending equations outside this batch can never change
    // anything downstream, so it contributes a factor of q instead of a loop
    unsigned long long mult = 1;
    if (sol.nullity() > 0) {
      std::vector<char> col_ok(total, 0);
      for (size_t k = 0; k < uvars.size(); ++k) {
        if (C_->vars[uvars[k]].invertible || uform[k] ||
            !var_free_elsewhere(uvars[k], eq_ids))
          continue;
        unsigned len = static_cast<unsigned>(C_->vars[uvars[k]].mask.size());
        for (unsigned c = 0; c < len; ++c) col_ok[uoff[k] + c] = 1;
      }
      // eliminate the basis over the ineligible columns so that every kernel
      // direction not forced through them becomes purely eligible
      std::vector<char> used(sol.null_basis.size(), 0);
      for (unsigned c = 0; c < total; ++c) {
        if (col_ok[c]) continue;
        size_t piv = sol.null_basis.size();
        for (size_t r = 0; r < sol.null_basis.size(); ++r)
          if (!used[r] && sol.null_basis[r][c]) {
            piv = r;
            break;
          }
        if (piv == sol.null_basis.size()) continue;
        used[piv] = 1;
        unsigned pinv = F.inv(sol.null_basis[piv][c]);
        for (size_t r = 0; r < sol.null_basis.size(); ++r) {
          if (r == piv || !sol.null_basis[r][c]) continue;
          unsigned f = F.mul(sol.null_basis[r][c], pinv);
          for (unsigned j = 0; j < total; ++j)
            sol.null_basis[r][j] =
                F.sub(sol.null_basis[r][j], F.mul(f, sol.null_basis[piv][j]));
        }
      }
      std::vector<std::vector<unsigned>> kept;
      for (size_t r = 0; r < sol.null_basis.size(); ++r) {
        if (used[r])
          kept.push_back(std::move(sol.null_basis[r]));
        else
          mult *= F.q();
      }
      sol.null_basis = std::move(kept);
    }

    unsigned long long count = 0;
    for_each_solution(F, sol, [&](const std::vector<unsigned>& x) {
      count += apply_and_recurse(uvars, uform, uoff, x, eq_ids);
      return true;
    });
    return mult * count;
  }

  unsigned long long apply_and_recurse(const std::vector<int>& uvars,
                                       const std::vector<char>& uform,
                                       const std::vector<unsigned>& uoff,
                                       const std::vector<unsigned>& x,
                                       const std::vector<int>& eq_ids) {
    std::vector<int> placed;
    bool ok = true;
    for (size_t k = 0; k < uvars.size() && ok; ++k) {
      if (place_var(uvars[k], uform[k], x, uoff[k]))
        placed.push_back(uvars[k]);
      else
        ok = false;
    }
    unsigned long long r = 0;
    if (ok) {
      std::vector<int> marked;
      for (int e : eq_ids)
        if (!eq_done_[e]) {
          eq_done_[e] = 1;
          marked.push_back(e);
        }
      r = search();
      for (int e : marked) eq_done_[e] = 0;
    }
    for (int v : placed) assigned_[v] = 0;
    return r;
  }

  bool targets_ok() const {
    for (size_t c = 0; c < C_->comps.size(); ++c) {
      const Target& T = (*C_->targets)[c];
      if (T.kind == Target::Kind::Units) continue;  // factors are units already
      Mat prod = Mat::identity(C_->n);
      for (int id : C_->comps[c]) prod = mat_mul(*F_, prod, val_[id]);
      if (!T.contains(*F_, prod)) return false;
    }
    return true;
  }

  unsigned long long enumerate_var(int v) {
    const VarInfo& vi = C_->vars[v];
    unsigned long long total = 1;
    for (size_t k = 0; k < vi.mask.size(); ++k) {
      total *= F_->q();
      if (total > (1ull << 30))
        throw std::runtime_error("count_reps: branch factor too large");
    }
    unsigned threads = fork_budget_;
    fork_budget_ = 1;
    if (threads <= 1 || total < 2 * threads) {
      unsigned long long count = 0;
      for (unsigned long long code = 0; code < total; ++code) count += try_value(v, code);
      return count;
    }
    // first branch point: split the value range across workers
    std::vector<unsigned long long> parts(threads, 0);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([this, v, total, t, threads, &parts]() {
        RepEngine clone(*this);
        clone.fork_budget_ = 1;
        unsigned long long c = 0;
        for (unsigned long long code = t; code < total; code += threads)
          c += clone.try_value(v, code);
        parts[t] = c;
      });
    for (auto& th : pool) th.join();
    unsigned long long count = 0;
    for (auto p : parts) count += p;
    return count;
  }

  unsigned long long try_value(int v, unsigned long long code) {
    const VarInfo& vi = C_->vars[v];
    std::vector<unsigned> x(vi.mask.size());
    for (size_t k = 0; k < x.size(); ++k) {
      x[k] = static_cast<unsigned>(code % F_->q());
      code /= F_->q();
    }
    if (!place_var(v, false, x, 0)) return 0;
    unsigned long long r = search();
    assigned_[v] = 0;
    return r;
  }
};

// Specialized engine for one-dimensional representations (augmentations).
// Same search strategy as RepEngine plus monomial-fact propagation: an
// equation whose only incomplete term is a product of unassigned variables
// pins that monomial's value, completing matching subproducts elsewhere.
// All scratch lives in per-depth frames, so steady state allocates nothing.
class ScalarEngine {
 public:
  explicit ScalarEngine(const Compiled& C) : C_(&C), F_(C.F) {
    const int nv = static_cast<int>(C.vars.size());
    val_.assign(nv, 0);
    vinv_.assign(nv, 0);
    assigned_.assign(nv, 0);
    seqs_.resize(C.eqs.size());
    for (size_t e = 0; e < C.eqs.size(); ++e) {
      SEq& E = seqs_[e];
      E.tbeg = static_cast<int>(sterms_.size());
      for (const auto& t : C.eqs[e].terms) {
        STerm st;
        st.coeff = t.coeff;
        st.fbeg = static_cast<int>(sfact_.size());
        for (const auto& f : t.factors) {
          if (f.var < 0)
            st.coeff = F_->mul(st.coeff, f.cst.e[0]);
          else
            sfact_.emplace_back(f.var, static_cast<char>(f.inv));
        }
        st.fend = static_cast<int>(sfact_.size());
        if (st.coeff)
          sterms_.push_back(st);
        else
          sfact_.resize(st.fbeg);
      }
      E.tend = static_cast<int>(sterms_.size());
    }
    eq_done_.assign(C.eqs.size(), 0);
    for (size_t e = 0; e < C.eqs.size(); ++e)
      if (seqs_[e].tbeg == seqs_[e].tend) eq_done_[e] = 1;
    allowed_.resize(C.comps.size());
    for (size_t c = 0; c < C.comps.size(); ++c) {
      allowed_[c].assign(F_->q(), 0);
      Mat probe(1, 1);
      for (unsigned v = 0; v < F_->q(); ++v) {
        probe.e[0] = v;
        allowed_[c][v] = (*C.targets)[c].contains(*F_, probe) ? 1 : 0;
      }
    }
  }

  ScalarEngine(const ScalarEngine& o)
      : C_(o.C_),
        F_(o.F_),
        sfact_(o.sfact_),
        sterms_(o.sterms_),
        seqs_(o.seqs_),
        allowed_(o.allowed_),
        val_(o.val_),
        vinv_(o.vinv_),
        assigned_(o.assigned_),
        eq_done_(o.eq_done_) {}

  unsigned long long run(unsigned threads) {
    for (size_t v = 0; v < C_->vars.size(); ++v)
      if (C_->vars[v].mask.empty()) {
        if (C_->vars[v].invertible) return 0;
        assigned_[v] = 1;
      }
    fork_budget_ = threads;
    return search();
  }

 private:
  struct STerm {
    unsigned coeff = 1;
    int fbeg = 0, fend = 0;  // factor range in sfact_
  };
  struct SEq {
    int tbeg = 0, tend = 0;  // term range in sterms_
  };
  struct RTerm {
    unsigned valfac = 0;
    int rbeg = 0, rlen = 0;  // residual range in frame respool
  };
  struct FEq {
    int id = -1;
    int tbeg = 0, tcnt = 0;  // term range in frame rterms
  };
  struct Frame {
    std::vector<FEq> view;
    std::vector<RTerm> rterms;
    std::vector<std::pair<int, char>> respool;
    std::vector<int> completed, affine_ids, usable, eq_ids;
    std::vector<char> plain_seen, inv_seen;
    std::vector<std::pair<int, char>> factpool;
    struct Fact {
      int kbeg, klen;
      unsigned value;
    };
    std::vector<Fact> facts;
    std::vector<int> uvars, uidx_of;
    std::vector<char> uform;
    std::vector<unsigned> A, b, A2;
    std::vector<int> pivot_of_col, keepcols;
    std::vector<unsigned> xpart, kernel, xsol, coef;
    std::vector<char> col_ok, kfree, touched;
    std::vector<int> placed, marked;
  };

  const Compiled* C_;
  const Field* F_;
  std::vector<std::pair<int, char>> sfact_;
  std::vector<STerm> sterms_;
  std::vector<SEq> seqs_;
  std::vector<std::vector<char>> allowed_;
  std::vector<unsigned> val_, vinv_;
  std::vector<char> assigned_, eq_done_;
  unsigned fork_budget_ = 1;
  int depth_ = 0;
  std::vector<std::unique_ptr<Frame>> frames_;

  unsigned fval(int v, char inv) const { return inv ? vinv_[v] : val_[v]; }

  bool place_var(int v, bool inv_form, unsigned x) {
    if (C_->vars[v].invertible || inv_form) {
      if (!x) return false;
      if (inv_form) {
        vinv_[v] = x;
        val_[v] = F_->inv(x);
      } else {
        val_[v] = x;
        vinv_[v] = F_->inv(x);
      }
    } else {
      val_[v] = x;
    }
    assigned_[v] = 1;
    return true;
  }

  // remove key (sorted multiset) from the sorted residual segment; true on
  // success, shrinking len in place
  bool take_submultiset(std::vector<std::pair<int, char>>& pool, int beg, int& len,
                        const std::vector<std::pair<int, char>>& kpool, int kbeg,
                        int klen) const {
    if (klen > len) return false;
    int ki = kbeg;
    const int kend = kbeg + klen;
    for (int i = beg; i < beg + len && ki < kend; ++i) {
      if (pool[i] == kpool[ki])
        ++ki;
      else if (pool[i] > kpool[ki])
        return false;
    }
    if (ki < kend) return false;
    ki = kbeg;
    int w = beg;
    for (int i = beg; i < beg + len; ++i) {
      if (ki < kend && pool[i] == kpool[ki])
        ++ki;
      else
        pool[w++] = pool[i];
    }
    len = w - beg;
    return true;
  }

  unsigned long long search() {
    if (depth_ >= static_cast<int>(frames_.size()))
      frames_.push_back(std::make_unique<Frame>());
    Frame& fr = *frames_[depth_];
    ++depth_;
    unsigned long long result = search_in(fr);
    --depth_;
    return result;
  }

  unsigned long long search_in(Frame& fr) {
    const Field& F = *F_;
    fr.completed.clear();
    auto fail = [&]() {
      for (int e : fr.completed) eq_done_[e] = 0;
      return 0ull;
    };

    // reduced view of the live equations
    fr.view.clear();
    fr.rterms.clear();
    fr.respool.clear();
    for (size_t e = 0; e < seqs_.size(); ++e) {
      if (eq_done_[e]) continue;
      FEq E;
      E.id = static_cast<int>(e);
      E.tbeg = static_cast<int>(fr.rterms.size());
      for (int t = seqs_[e].tbeg; t < seqs_[e].tend; ++t) {
        RTerm rt;
        rt.valfac = sterms_[t].coeff;
        rt.rbeg = static_cast<int>(fr.respool.size());
        for (int k = sterms_[t].fbeg; k < sterms_[t].fend; ++k) {
          const auto& [v, iv] = sfact_[k];
          if (assigned_[v])
            rt.valfac = F.mul(rt.valfac, fval(v, iv));
          else
            fr.respool.push_back(sfact_[k]);
        }
        rt.rlen = static_cast<int>(fr.respool.size()) - rt.rbeg;
        if (!rt.valfac) {
          fr.respool.resize(rt.rbeg);
          rt.rlen = 0;
        } else if (rt.rlen > 1) {
          std::sort(fr.respool.begin() + rt.rbeg, fr.respool.begin() + rt.rbeg + rt.rlen);
        }
        fr.rterms.push_back(rt);
      }
      E.tcnt = static_cast<int>(fr.rterms.size()) - E.tbeg;
      fr.view.push_back(E);
    }

    // fixpoint: settle complete equations, propagate monomial facts
    fr.facts.clear();
    fr.factpool.clear();
    for (bool changed = true; changed;) {
      changed = false;
      for (size_t i = 0; i < fr.view.size(); ++i) {
        const FEq& E = fr.view[i];
        if (eq_done_[E.id]) continue;
        int ninc = 0, incidx = -1;
        unsigned cst = 0;
        for (int t = E.tbeg; t < E.tbeg + E.tcnt; ++t) {
          if (fr.rterms[t].rlen == 0)
            cst = F.add(cst, fr.rterms[t].valfac);
          else {
            ++ninc;
            incidx = t;
          }
        }
        if (ninc == 0) {
          if (cst) return fail();
          eq_done_[E.id] = 1;
          fr.completed.push_back(E.id);
          continue;
        }
        if (ninc != 1 || fr.rterms[incidx].rlen < 2) continue;
        unsigned mval = F.mul(F.neg(cst), F.inv(fr.rterms[incidx].valfac));
        const int kb = fr.rterms[incidx].rbeg, kl = fr.rterms[incidx].rlen;
        bool known = false, conflict = false;
        for (const auto& f : fr.facts) {
          if (f.klen != kl) continue;
          bool eq = true;
          for (int k = 0; k < kl; ++k)
            eq = eq && fr.factpool[f.kbeg + k] == fr.respool[kb + k];
          if (eq) {
            known = true;
            conflict = f.value != mval;
            break;
          }
        }
        if (conflict) return fail();
        if (known) continue;
        Frame::Fact nf{static_cast<int>(fr.factpool.size()), kl, mval};
        for (int k = 0; k < kl; ++k) fr.factpool.push_back(fr.respool[kb + k]);
        fr.facts.push_back(nf);
        changed = true;
        for (size_t j = 0; j < fr.view.size(); ++j) {
          if (j == i || eq_done_[fr.view[j].id]) continue;
          const FEq& E2 = fr.view[j];
          for (int t = E2.tbeg; t < E2.tbeg + E2.tcnt; ++t) {
            RTerm& rt = fr.rterms[t];
            while (rt.rlen > 0 && take_submultiset(fr.respool, rt.rbeg, rt.rlen,
                                                   fr.factpool, nf.kbeg, nf.klen)) {
              rt.valfac = F.mul(rt.valfac, mval);
              if (!rt.valfac) {
                rt.rlen = 0;
                break;
              }
            }
          }
        }
      }
    }

    // affine candidates, with the plain-form-wins usability filter
    fr.affine_ids.clear();
    for (size_t i = 0; i < fr.view.size(); ++i) {
      if (eq_done_[fr.view[i].id]) continue;
      bool affine = true;
      for (int t = fr.view[i].tbeg; t < fr.view[i].tbeg + fr.view[i].tcnt; ++t)
        if (fr.rterms[t].rlen > 1) affine = false;
      if (affine) fr.affine_ids.push_back(static_cast<int>(i));
    }
    if (!fr.affine_ids.empty()) {
      fr.plain_seen.assign(C_->vars.size(), 0);
      for (int i : fr.affine_ids) {
        const FEq& E = fr.view[i];
        for (int t = E.tbeg; t < E.tbeg + E.tcnt; ++t)
          if (fr.rterms[t].rlen == 1 && !fr.respool[fr.rterms[t].rbeg].second)
            fr.plain_seen[fr.respool[fr.rterms[t].rbeg].first] = 1;
      }
      fr.usable.clear();
      for (int i : fr.affine_ids) {
        const FEq& E = fr.view[i];
        bool ok = true;
        for (int t = E.tbeg; t < E.tbeg + E.tcnt; ++t)
          if (fr.rterms[t].rlen == 1) {
            const auto& [v, iv] = fr.respool[fr.rterms[t].rbeg];
            if (iv && fr.plain_seen[v]) ok = false;
          }
        if (ok) fr.usable.push_back(i);
      }
      if (!fr.usable.empty()) {
        unsigned long long r = solve_affine(fr);
        for (int e : fr.completed) eq_done_[e] = 0;
        return r;
      }
    }

    // free sweep: unassigned variables with no pending equation
    auto pending = [&](int v) {
      for (int e : C_->vars[v].eqs)
        if (!eq_done_[e]) return true;
      return false;
    };
    fr.placed.clear();  // reused as the swept list here
    unsigned long long mult = 1;
    for (size_t v = 0; v < C_->vars.size(); ++v) {
      if (assigned_[v] || pending(static_cast<int>(v))) continue;
      const VarInfo& vi = C_->vars[v];
      if (!vi.invertible) {
        mult *= F.q();
        val_[v] = 0;
        assigned_[v] = 1;
        fr.placed.push_back(static_cast<int>(v));
      } else if ((*C_->targets)[vi.component].kind == Target::Kind::Units) {
        mult *= C_->units_block0;
        val_[v] = 1;
        vinv_[v] = 1;
        assigned_[v] = 1;
        fr.placed.push_back(static_cast<int>(v));
      }
    }
    auto unwind_all = [&]() {
      for (int v : fr.placed) assigned_[v] = 0;
      for (int e : fr.completed) eq_done_[e] = 0;
    };

    int pick = -1;
    for (int v : C_->plan)
      if (!assigned_[v] && pending(v)) {
        pick = v;
        break;
      }
    if (pick < 0) {
      int best_score = -1;
      for (size_t v = 0; v < C_->vars.size(); ++v) {
        if (assigned_[v]) continue;
        int score = 0;
        for (const FEq& E : fr.view) {
          if (eq_done_[E.id]) continue;
          bool blocked = false, becomes = true;
          for (int t = E.tbeg; t < E.tbeg + E.tcnt; ++t) {
            const RTerm& rt = fr.rterms[t];
            if (rt.rlen > 1) blocked = true;
            int cnt = 0;
            for (int k = rt.rbeg; k < rt.rbeg + rt.rlen; ++k)
              if (fr.respool[k].first != static_cast<int>(v)) ++cnt;
            if (cnt > 1) becomes = false;
          }
          if (blocked && becomes) ++score;
        }
        if (score > best_score) {
          best_score = score;
          pick = static_cast<int>(v);
        }
      }
    }

    if (pick < 0) {
      unsigned long long r = mult * (targets_ok() ? 1 : 0);
      unwind_all();
      return r;
    }
    unsigned long long r = enumerate_var(pick);
    unwind_all();
    return mult * r;
  }

  unsigned long long solve_affine(Frame& fr) {
    const Field& F = *F_;
    fr.uvars.clear();
    fr.uform.clear();
    fr.eq_ids.clear();
    fr.uidx_of.assign(C_->vars.size(), -1);
    for (int i : fr.usable) {
      const FEq& E = fr.view[i];
      fr.eq_ids.push_back(E.id);
      for (int t = E.tbeg; t < E.tbeg + E.tcnt; ++t)
        if (fr.rterms[t].rlen == 1) {
          const auto& [v, iv] = fr.respool[fr.rterms[t].rbeg];
          if (fr.uidx_of[v] < 0) {
            fr.uidx_of[v] = static_cast<int>(fr.uvars.size());
            fr.uvars.push_back(v);
            fr.uform.push_back(!fr.plain_seen[v]);
          }
        }
    }
    unsigned total = static_cast<unsigned>(fr.uvars.size());
    const unsigned m = static_cast<unsigned>(fr.usable.size());

    fr.A.assign(static_cast<size_t>(m) * total, 0);
    fr.b.assign(m, 0);
    for (unsigned r = 0; r < m; ++r) {
      const FEq& E = fr.view[fr.usable[r]];
      unsigned cst = 0;
      for (int t = E.tbeg; t < E.tbeg + E.tcnt; ++t) {
        const RTerm& rt = fr.rterms[t];
        if (rt.rlen == 0) {
          cst = F.add(cst, rt.valfac);
          continue;
        }
        int col = fr.uidx_of[fr.respool[rt.rbeg].first];
        unsigned& cell = fr.A[static_cast<size_t>(r) * total + col];
        cell = F.add(cell, rt.valfac);
      }
      fr.b[r] = F.neg(cst);
    }

    // unknowns with all-zero columns are untouched by these equations and
    // stay unassigned for later levels
    fr.touched.assign(total, 0);
    for (unsigned r = 0; r < m; ++r)
      for (unsigned c = 0; c < total; ++c)
        if (fr.A[static_cast<size_t>(r) * total + c]) fr.touched[c] = 1;
    {
      unsigned live = 0;
      for (unsigned c = 0; c < total; ++c) live += fr.touched[c];
      if (live < total) {
        fr.keepcols.clear();
        for (unsigned c = 0; c < total; ++c)
          if (fr.touched[c]) fr.keepcols.push_back(static_cast<int>(c));
        fr.A2.assign(static_cast<size_t>(m) * live, 0);
        for (unsigned r = 0; r < m; ++r)
          for (unsigned c = 0; c < live; ++c)
            fr.A2[static_cast<size_t>(r) * live + c] =
                fr.A[static_cast<size_t>(r) * total + fr.keepcols[c]];
        std::swap(fr.A, fr.A2);
        std::vector<int> nvars;
        std::vector<char> nform;
        for (int c : fr.keepcols) {
          nvars.push_back(fr.uvars[c]);
          nform.push_back(fr.uform[c]);
        }
        fr.uvars.assign(nvars.begin(), nvars.end());
        fr.uform.assign(nform.begin(), nform.end());
        total = live;
      }
    }

    // row-reduce A | b
    fr.pivot_of_col.assign(total, -1);
    unsigned rank = 0;
    for (unsigned col = 0; col < total && rank < m; ++col) {
      unsigned piv = m;
      for (unsigned r = rank; r < m; ++r)
        if (fr.A[static_cast<size_t>(r) * total + col]) {
          piv = r;
          break;
        }
      if (piv == m) continue;
      if (piv != rank) {
        for (unsigned c = 0; c < total; ++c)
          std::swap(fr.A[static_cast<size_t>(piv) * total + c],
                    fr.A[static_cast<size_t>(rank) * total + c]);
        std::swap(fr.b[piv], fr.b[rank]);
      }
      unsigned s = F.inv(fr.A[static_cast<size_t>(rank) * total + col]);
      for (unsigned c = col; c < total; ++c) {
        unsigned& cell = fr.A[static_cast<size_t>(rank) * total + c];
        cell = F.mul(s, cell);
      }
      fr.b[rank] = F.mul(s, fr.b[rank]);
      for (unsigned r = 0; r < m; ++r) {
        if (r == rank) continue;
        unsigned f = fr.A[static_cast<size_t>(r) * total + col];
        if (!f) continue;
        for (unsigned c = col; c < total; ++c)
          fr.A[static_cast<size_t>(r) * total + c] =
              F.sub(fr.A[static_cast<size_t>(r) * total + c],
                    F.mul(f, fr.A[static_cast<size_t>(rank) * total + c]));
        fr.b[r] = F.sub(fr.b[r], F.mul(f, fr.b[rank]));
      }
      fr.pivot_of_col[col] = static_cast<int>(rank);
      ++rank;
    }
    for (unsigned r = rank; r < m; ++r)
      if (fr.b[r]) return 0;

    fr.xpart.assign(total, 0);
    for (unsigned c = 0; c < total; ++c)
      if (fr.pivot_of_col[c] >= 0) fr.xpart[c] = fr.b[fr.pivot_of_col[c]];

    // kernel basis: one row per free column
    unsigned kdim = total - rank;
    fr.kernel.assign(static_cast<size_t>(kdim) * total, 0);
    {
      unsigned kr = 0;
      for (unsigned fc = 0; fc < total; ++fc) {
        if (fr.pivot_of_col[fc] >= 0) continue;
        unsigned* kv = fr.kernel.data() + static_cast<size_t>(kr) * total;
        kv[fc] = 1;
        for (unsigned c = 0; c < total; ++c)
          if (fr.pivot_of_col[c] >= 0)
            kv[c] = F.neg(fr.A[static_cast<size_t>(fr.pivot_of_col[c]) * total + fc]);
        ++kr;
      }
    }

    // kernel directions supported only on plain non-invertible unknowns with
    // no equations outside this batch contribute a factor of q each
    unsigned long long mult = 1;
    fr.coef.clear();  // indices of kept kernel rows
    if (kdim > 0) {
      fr.col_ok.assign(total, 0);
      for (unsigned c = 0; c < total; ++c)
        fr.col_ok[c] = !C_->vars[fr.uvars[c]].invertible && !fr.uform[c] &&
                       free_elsewhere(fr.uvars[c], fr.eq_ids);
      fr.kfree.assign(kdim, 0);  // 1 = used as pivot over ineligible columns
      for (unsigned c = 0; c < total; ++c) {
        if (fr.col_ok[c]) continue;
        unsigned piv = kdim;
        for (unsigned r = 0; r < kdim; ++r)
          if (!fr.kfree[r] && fr.kernel[static_cast<size_t>(r) * total + c]) {
            piv = r;
            break;
          }
        if (piv == kdim) continue;
        fr.kfree[piv] = 1;
        unsigned pinv = F.inv(fr.kernel[static_cast<size_t>(piv) * total + c]);
        for (unsigned r = 0; r < kdim; ++r) {
          if (r == piv) continue;
          unsigned f = fr.kernel[static_cast<size_t>(r) * total + c];
          if (!f) continue;
          unsigned fac = F.mul(f, pinv);
          for (unsigned j = 0; j < total; ++j)
            fr.kernel[static_cast<size_t>(r) * total + j] =
                F.sub(fr.kernel[static_cast<size_t>(r) * total + j],
                      F.mul(fac, fr.kernel[static_cast<size_t>(piv) * total + j]));
        }
      }
      for (unsigned r = 0; r < kdim; ++r) {
        if (fr.kfree[r])
          fr.coef.push_back(r);  // kept: genuinely constrained downstream
        else
          mult *= F.q();
      }
    }

    // odometer over the kept kernel directions
    const unsigned nk = static_cast<unsigned>(fr.coef.size());
    fr.xsol.assign(total, 0);
    std::vector<unsigned>& odo = fr.b;  // reuse; length nk needed
    odo.assign(nk, 0);
    unsigned long long count = 0;
    for (;;) {
      for (unsigned c = 0; c < total; ++c) fr.xsol[c] = fr.xpart[c];
      for (unsigned i = 0; i < nk; ++i) {
        if (!odo[i]) continue;
        const unsigned* kv = fr.kernel.data() + static_cast<size_t>(fr.coef[i]) * total;
        for (unsigned c = 0; c < total; ++c)
          fr.xsol[c] = F.add(fr.xsol[c], F.mul(odo[i], kv[c]));
      }
      count += apply_and_recurse(fr);
      unsigned pos = 0;
      while (pos < nk) {
        if (++odo[pos] < F.q()) break;
        odo[pos] = 0;
        ++pos;
      }
      if (pos == nk) break;
    }
    return mult * count;
  }

  bool free_elsewhere(int v, const std::vector<int>& solved_eqs) const {
    for (int e : C_->vars[v].eqs) {
      if (eq_done_[e]) continue;
      bool in_solved = false;
      for (int s : solved_eqs) in_solved = in_solved || s == e;
      if (!in_solved) return false;
    }
    return true;
  }

  unsigned long long apply_and_recurse(Frame& fr) {
    fr.marked.clear();
    bool ok = true;
    size_t nplaced = 0;
    for (size_t k = 0; k < fr.uvars.size() && ok; ++k) {
      if (place_var(fr.uvars[k], fr.uform[k], fr.xsol[k]))
        ++nplaced;
      else
        ok = false;
    }
    unsigned long long r = 0;
    if (ok) {
      for (int e : fr.eq_ids)
        if (!eq_done_[e]) {
          eq_done_[e] = 1;
          fr.marked.push_back(e);
        }
      r = search();
      for (int e : fr.marked) eq_done_[e] = 0;
    }
    for (size_t k = 0; k < nplaced; ++k) assigned_[fr.uvars[k]] = 0;
    return r;
  }

  bool targets_ok() const {
    for (size_t c = 0; c < C_->comps.size(); ++c) {
      unsigned prod = 1;
      for (int id : C_->comps[c]) prod = F_->mul(prod, val_[id]);
      if (!allowed_[c][prod]) return false;
    }
    return true;
  }

  unsigned long long enumerate_var(int v) {
    const unsigned q = F_->q();
    unsigned threads = fork_budget_;
    fork_budget_ = 1;
    if (threads <= 1 || q < 2 * threads) {
      unsigned long long count = 0;
      for (unsigned x = 0; x < q; ++x) count += try_value(v, x);
      return count;
    }
    std::vector<unsigned long long> parts(threads, 0);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([this, v, q, t, threads, &parts]() {
        ScalarEngine clone(*this);
        unsigned long long c = 0;
        for (unsigned x = t; x < q; x += threads) c += clone.try_value(v, x);
        parts[t] = c;
      });
    for (auto& th : pool) th.join();
    unsigned long long count = 0;
    for (auto p : parts) count += p;
    return count;
  }

  unsigned long long try_value(int v, unsigned x) {
    if (!place_var(v, false, x)) return 0;
    unsigned long long r = search();
    assigned_[v] = 0;
    return r;
  }
};

}  // namespace detail

struct RepCountOptions {
  bool naive = false;
  unsigned threads = 0;  // 0: REPLAB_THREADS env or hardware count
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("REPLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Exhaustive reference counter, no propagation; for cross-checking.
inline unsigned long long count_reps_naive(const RepProblem& P) {
  detail::Compiled C = detail::compile_problem(P);
  const Field& F = *C.F;
  const unsigned n = C.n;

  std::vector<int> order;
  unsigned long long space = 1;
  for (size_t v = 0; v < C.vars.size(); ++v) {
    order.push_back(static_cast<int>(v));
    for (size_t k = 0; k < C.vars[v].mask.size(); ++k) {
      space *= F.q();
      if (space > (1ull << 26))
        throw std::runtime_error("count_reps_naive: state space too large");
    }
  }

  std::vector<Mat> val(C.vars.size(), Mat(n, n)), vinv(C.vars.size(), Mat(n, n));
  auto term_val = [&](const detail::ETerm& t) {
    Mat acc(n, n);
    if (t.factors.empty()) {
      for (unsigned i = 0; i < n; ++i) acc.at(i, i) = t.coeff;
      return acc;
    }
    auto get = [&](const detail::EFactor& f) -> const Mat& {
      return f.var < 0 ? f.cst : (f.inv ? vinv[f.var] : val[f.var]);
    };
    acc = get(t.factors[0]);
    for (size_t k = 1; k < t.factors.size(); ++k) acc = mat_mul(F, acc, get(t.factors[k]));
    return mat_scale(F, t.coeff, acc);
  };

  unsigned long long count = 0;
  std::function<void(size_t)> rec = [&](size_t vi) {
    if (vi == order.size()) {
      for (const auto& eq : C.eqs) {
        Mat acc(n, n);
        for (const auto& t : eq.terms) acc = mat_add(F, acc, term_val(t));
        if (!acc.is_zero()) return;
      }
      for (size_t c = 0; c < C.comps.size(); ++c) {
        Mat prod = Mat::identity(n);
        for (int id : C.comps[c]) prod = mat_mul(F, prod, val[id]);
        if (!(*C.targets)[c].contains(F, prod)) return;
      }
      ++count;
      return;
    }
    int v = order[vi];
    const auto& mask = C.vars[v].mask;
    unsigned long long total = 1;
    for (size_t k = 0; k < mask.size(); ++k) total *= F.q();
    for (unsigned long long code = 0; code < total; ++code) {
      Mat M(n, n);
      unsigned long long c = code;
      for (unsigned k : mask) {
        M.e[k] = static_cast<unsigned>(c % F.q());
        c /= F.q();
      }
      if (C.vars[v].invertible) {
        Mat Mi;
        if (!mat_inverse(F, M, Mi)) continue;
        vinv[v] = Mi;
      }
      val[v] = M;
      rec(vi + 1);
    }
  };
  rec(0);
  return count;
}

inline unsigned long long count_reps(const RepProblem& P, RepCountOptions opt = {}) {
  if (opt.naive) return count_reps_naive(P);
  detail::Compiled C = detail::compile_problem(P);
  if (C.n == 1) {
    detail::ScalarEngine eng(C);
    return eng.run(resolve_threads(opt.threads));
  }
  detail::RepEngine eng(C);
  return eng.run(resolve_threads(opt.threads));
}

// Shared normalization data of Definition-style representation numbers.
struct Normalization {
  SqrtQ limit_product;   // lim prod |B^m_k|^{-chi^k/2}
  BigInt kernel_units;   // |(B^m_0)* cap ker delta|
  long long b0_dim = 0;  // dim of the degree-0 block
  long long ell = 0;     // basepoint count
};

inline BigInt kernel_units_count(const GradedVS& V, const Mat& d, int m) {
  const Field& F = V.field();
  const unsigned n = V.dim();
  if (d.is_zero()) {
    // block diagonal by degree class: product of GL orders
    BigInt r = 1;
    std::vector<int> reps;
    for (unsigned i = 0; i < n; ++i) {
      bool seen = false;
      for (int rep : reps) seen = seen || degree_zero_mod(V.deg[i] - rep, m);
      if (seen) continue;
      reps.push_back(V.deg[i]);
      unsigned cnt = 0;
      for (unsigned j = 0; j < n; ++j)
        if (degree_zero_mod(V.deg[j] - V.deg[i], m)) ++cnt;
      r *= gl_order(cnt, F.q());
    }
    return r;
  }
  // solve dT = Td on the degree-0 block, then count invertible solutions
  auto mask = detail::entry_mask(V, 0, m);
  std::vector<std::vector<unsigned>> rows;
  std::vector<unsigned> rhs;
  for (unsigned r = 0; r < n; ++r)
    for (unsigned c = 0; c < n; ++c) {
      // (dT - Td)_{rc} = sum_i d_{r,i} T_{i,c} - sum_j T_{r,j} d_{j,c}
      std::vector<unsigned> row(mask.size(), 0);
      for (size_t k = 0; k < mask.size(); ++k) {
        unsigned i = mask[k] / n, j = mask[k] % n;
        unsigned v = 0;
        if (j == c) v = F.add(v, d.at(r, i));
        if (i == r) v = F.sub(v, d.at(j, c));
        row[k] = v;
      }
      rows.push_back(std::move(row));
      rhs.push_back(0);
    }
  LinSolution sol = solve_linear(F, std::move(rows), std::move(rhs));
  unsigned long long space = 1;
  for (unsigned k = 0; k < sol.nullity(); ++k) {
    space *= F.q();
    if (space > 10000000ull)
      throw std::runtime_error("kernel_units_count: solution space too large");
  }
  BigInt count = 0;
  Mat T(n, n);
  for_each_solution(F, sol, [&](const std::vector<unsigned>& x) {
    for (auto& e : T.e) e = 0;
    for (size_t k = 0; k < mask.size(); ++k) T.e[mask[k]] = x[k];
    if (mat_invertible(F, T)) ++count;
    return true;
  });
  return count;
}

// Stabilized exponent E with lim prod_k |B^m_k|^{-chi^k/2} = q^{-E/2}.
inline long long limit_exponent(const DegreeDist& dist, const GradedVS& V, int m) {
  long long D = 0;
  for (const auto& [deg, cnt] : dist) D = std::max<long long>(D, std::abs(deg));
  long long dd = 0;
  for (int a : V.deg)
    for (int b : V.deg) dd = std::max<long long>(dd, std::abs(a - b));

  auto exponent_to = [&](long long W) {
    long long E = 0;
    for (long long k = -W; k <= W; ++k)
      E += block_dim(V, k, m) * chi_k(dist, static_cast<int>(k));
    return E;
  };
  long long W = D + dd + 1;
  long long E = exponent_to(W);
  if (exponent_to(W + 5) != E)
    throw std::logic_error("limit_exponent: partial products failed to stabilize");
  if (m % 2 == 1) {
    // closed form cross-check for odd m
    long long Ec = block_dim(V, 0, m) * sigma_m(dist, m);
    for (int r = 1; r < m; ++r) Ec += 2 * block_dim(V, r, m) * nu_r_m(dist, m, r);
    if (Ec != E) throw std::logic_error("limit_exponent: odd-m closed form mismatch");
  }
  return E;
}

inline Normalization normalization(const RepProblem& P) {
  validate_problem(P);
  Normalization N;
  const long long q = P.V.q;
  DegreeDist dist = degree_distribution(P.dga);
  N.limit_product = q_half_pow(q, -limit_exponent(dist, P.V, P.m));
  N.kernel_units = kernel_units_count(P.V, P.d, P.m);
  N.b0_dim = block_dim(P.V, 0, P.m);
  for (const auto& comp : P.dga.components) N.ell += static_cast<long long>(comp.size());
  return N;
}

inline SqrtQ rep_number(const RepProblem& P, RepCountOptions opt = {}) {
  Normalization N = normalization(P);
  unsigned long long cnt = count_reps(P, opt);
  Rat ku_pow = 1;
  for (long long i = 0; i < N.ell; ++i) ku_pow *= Rat(N.kernel_units);
  return N.limit_product * SqrtQ(Rat(1) / ku_pow) * SqrtQ(Rat(cnt));
}

inline SqrtQ reduced_rep_number(const RepProblem& P, RepCountOptions opt = {}) {
  Normalization N = normalization(P);
  unsigned long long cnt = count_reps(P, opt);
  Rat ku_pow = 1;
  for (long long i = 0; i < N.ell; ++i) ku_pow *= Rat(N.kernel_units);
  SqrtQ rep = N.limit_product * SqrtQ(Rat(1) / ku_pow) * SqrtQ(Rat(cnt));
  return q_half_pow(P.V.q, -N.b0_dim) * SqrtQ(Rat(N.kernel_units)) * rep;
}

// Augmentations: 1-dimensional representations with unit targets.
inline RepProblem aug_problem(const Dga& dga, int m, long long q) {
  RepProblem P;
  P.dga = dga;
  P.V = GradedVS{{0}, q};
  P.d = Mat(1, 1);
  P.m = m;
  P.targets.assign(dga.components.size(), Target::units());
  return P;
}

inline unsigned long long count_augs(const Dga& dga, int m, long long q,
                                     RepCountOptions opt = {}) {
  return count_reps(aug_problem(dga, m, q), opt);
}

inline SqrtQ aug_number(const Dga& dga, int m, long long q, RepCountOptions opt = {}) {
  return rep_number(aug_problem(dga, m, q), opt);
}

// Total n-dimensional representation number: V = F_q^n in degree 0, all
// admissible differentials, invertible targets.
inline SqrtQ total_rep_number(const Dga& dga, unsigned n, int m, long long q,
                              RepCountOptions opt = {}) {
  GradedVS V{std::vector<int>(n, 0), q};
  SqrtQ total(Rat(0));
  for (const Mat& d : enumerate_differentials(V, m)) {
    RepProblem P{dga, V, d, m, {}};
    P.targets.assign(dga.components.size(), Target::units());
    total = total + rep_number(P, opt);
  }
  return total;
}

}  // namespace replab
