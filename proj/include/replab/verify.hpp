#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "replab/homfly.hpp"
#include "replab/knotlib.hpp"
#include "replab/ruling.hpp"

namespace replab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  std::string data_dir = "data";
  RepCountOptions count;
  std::function<void(const CriterionResult&)> on_result;  // progress callback
};

namespace verify_detail {

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (!ok) detail << "; ";
    ok = false;
    detail << what;
  }
  template <class T, class U>
  void expect_eq(const T& got, const U& want, const std::string& what) {
    if (got == want) return;
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want;
    expect(false, os.str());
  }
};

inline Mat mk2(std::initializer_list<unsigned> vals) {
  Mat m(2, 2);
  std::copy(vals.begin(), vals.end(), m.e.begin());
  return m;
}

inline std::string pm_entry(const BraidSymbols& S, const PolyMat& P, unsigned i, unsigned j) {
  return P.at(i, j).str(S.alg);
}

// 1. path matrices of the 4-strand worked example, non-reduced and reduced
inline CriterionResult crit_path_matrix(const VerifyOptions&) {
  Checker c;
  std::vector<int> mu = {0, 1, 0, 0};

  auto S = make_braid_symbols(Braid(4, {1, 2, 1, 3}), mu);
  PolyMat P = path_matrix_xz(S);
  const char* want[4][4] = {{"p2 - p1*p3", "-p1", "p4", "1"},
                            {"p3", "1", "0", "0"},
                            {"1", "0", "0", "0"},
                            {"0", "0", "1", "0"}};
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < 4; ++j)
      c.expect_eq(pm_entry(S, P, i, j), want[i][j],
                  "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  c.expect(!kalman_form_check(S), "non-reduced word wrongly in normal form");

  auto SR = make_braid_symbols(Braid(4, {2, 1, 2, 3}), mu);
  PolyMat Q = path_matrix_xz(SR);
  const char* wantr[4][4] = {{"p2", "-p3", "p4", "1"},
                             {"p1", "1", "0", "0"},
                             {"1", "0", "0", "0"},
                             {"0", "0", "1", "0"}};
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < 4; ++j)
      c.expect_eq(pm_entry(SR, Q, i, j), wantr[i][j],
                  "reduced entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  c.expect(kalman_form_check(SR), "reduced word fails the normal-form check");
  return {1, "path matrix regression", c.ok, c.detail.str()};
}

// 2. reduced words, normal form, and symbolic inverses over S_n
inline CriterionResult crit_kalman(const VerifyOptions&) {
  Checker c;
  for (unsigned n = 2; n <= 5; ++n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Braid b = reduced_word(perm);
      c.expect(is_reduced(b), "reduced_word not reduced at n=" + std::to_string(n));
      auto S = make_braid_symbols(b, std::vector<int>(n, 0));
      c.expect(kalman_form_check(S), "normal form fails at n=" + std::to_string(n));
      if (n <= 4) {
        PolyMat P = path_matrix_xz(S), Pi = path_matrix_xz_inverse(S);
        c.expect(pm_mul(P, Pi) == PolyMat::identity(n) &&
                     pm_mul(Pi, P) == PolyMat::identity(n),
                 "P*Q != I at n=" + std::to_string(n));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return {2, "reduced words and symbolic inverses", c.ok, c.detail.str()};
}

// 3. Bruhat-style partition of GL(n, q) by the path subsets
inline CriterionResult crit_bruhat(const VerifyOptions&) {
  Checker c;
  const std::vector<std::tuple<unsigned, long long, unsigned long long>> cases = {
      {2, 2, 6}, {2, 3, 48}, {3, 2, 168}, {3, 3, 11232}};
  for (const auto& [n, q, gl] : cases) {
    BruhatReport r = verify_bruhat_partition(n, q);
    std::string tag = "(n=" + std::to_string(n) + ",q=" + std::to_string(q) + ")";
    c.expect(r.ok(), "partition fails at " + tag);
    c.expect_eq(r.total, gl, "|GL| at " + tag);
  }
  return {3, "path subsets partition GL(n,q)", c.ok, c.detail.str()};
}

// 4. the two-strand crossing cell over F_2 at m = 0
inline CriterionResult crit_pathset_f2(const VerifyOptions&) {
  Checker c;
  auto cell = enumerate_path_subset(PathSubsetSpec(parse_braid("s1"), {0, 0}, 0, 2));
  std::set<Mat> got(cell.begin(), cell.end());
  std::set<Mat> want = {mk2({0, 1, 1, 0}), mk2({1, 1, 1, 0}), mk2({1, 0, 1, 1}),
                        mk2({0, 1, 1, 1})};
  c.expect(got == want, "cell is not the four expected matrices");
  return {4, "two-strand path subset over F_2", c.ok, c.detail.str()};
}

// 5. structure of the two-copy trefoil satellite
inline CriterionResult crit_satellite(const VerifyOptions&) {
  Checker c;
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  c.expect(check_dga(T.dga).ok, "dga check fails");
  c.expect(degree_distribution(T.dga) == DegreeDist{{-1, 1}, {0, 14}, {1, 8}},
           "degree distribution mismatch");
  c.expect_eq(chi_k(degree_distribution(T.dga), 0), 7, "shifted Euler characteristic");
  NcPoly dp = -(NcPoly::gen(T.sym.t[0], true) * NcPoly::gen(T.sym.y[0][1]) *
                NcPoly::gen(T.sym.t[1]));
  c.expect(T.dga.diff[T.sym.p[0]] == dp, "dp differential mismatch");
  return {5, "satellite construction", c.ok, c.detail.str()};
}

// 6. augmentation count of the satellite at q = 2
inline CriterionResult crit_aug_count(const VerifyOptions& opt) {
  Checker c;
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  c.expect_eq(count_augs(T.dga, 0, 2, opt.count), 146ull, "raw count");
  c.expect(aug_number(T.dga, 0, 2, opt.count) == SqrtQ(Rat(0), Rat(73, 8), 2),
           "normalized count != (73/8) sqrt(2)");
  return {6, "satellite augmentation count", c.ok, c.detail.str()};
}

// 7. augmentations <-> cell representations, bijectively
inline CriterionResult crit_bijection(const VerifyOptions& opt) {
  Checker c;
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  const Field& F = Field::get(2);
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);

  auto augs = enumerate_augmentations(T.dga, 0, F);
  c.expect_eq(augs.size(), size_t{146}, "enumerated augmentations");
  std::set<std::vector<unsigned>> images;
  bool round_trip = true, in_cell = true;
  for (const auto& eps : augs) {
    SatelliteRep R = aug_to_rep(T, eps, F);
    in_cell = in_cell && path_subset_member(R.f.at(T.kt), spec);
    std::vector<unsigned> key = R.d.e;
    for (const auto& [id, m] : R.f) key.insert(key.end(), m.e.begin(), m.e.end());
    images.insert(key);
    round_trip = round_trip && rep_to_aug(T, R, spec) == eps;
  }
  c.expect(in_cell, "image leaves the path subset");
  c.expect(round_trip, "round trip fails");
  c.expect_eq(images.size(), size_t{146}, "distinct images");

  for (long long q : {2, 3}) {
    RepProblem P{builtin_knot("trefoil"), GradedVS{{0, 0}, q}, Mat(2, 2), 0,
                 {Target::from_pathset(PathSubsetSpec(parse_braid("s1"), {0, 0}, 0, q))}};
    c.expect_eq(count_augs(T.dga, 0, q, opt.count), count_reps(P, opt.count),
                "cardinalities at q=" + std::to_string(q));
  }
  return {7, "augmentation-representation bijection", c.ok, c.detail.str()};
}

// 8. per-target split of the trefoil cell count
inline CriterionResult crit_split(const VerifyOptions& opt) {
  Checker c;
  Dga tref = builtin_knot("trefoil");
  GradedVS V{{0, 0}, 2};
  const std::vector<std::pair<Mat, unsigned long long>> split = {
      {mk2({0, 1, 1, 0}), 40},
      {mk2({1, 1, 1, 0}), 33},
      {mk2({1, 0, 1, 1}), 40},
      {mk2({0, 1, 1, 1}), 33},
  };
  for (const auto& [target, want] : split) {
    RepProblem P{tref, V, Mat(2, 2), 0, {Target::explicit_set({target})}};
    c.expect_eq(count_reps(P, opt.count), want, "split count");
  }
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);
  RepProblem P{tref, V, Mat(2, 2), 0, {Target::from_pathset(spec)}};
  c.expect(reduced_rep_number(P, opt.count) == SqrtQ(Rat(73, 8)), "reduced number != 73/8");
  return {8, "representation split by target", c.ok, c.detail.str()};
}

// 9. satellite route equals representation route, case by case
inline CriterionResult crit_theorem_a(const VerifyOptions& opt) {
  Checker c;
  for (const char* name : {"unknot", "trefoil", "m52"}) {
    Dga K = builtin_knot(name);
    for (bool crossing : {false, true}) {
      Braid b = crossing ? parse_braid("s1") : Braid(2, {});
      for (int m : {0, 2})
        for (long long q : {2, 3, 4, 5}) {
          auto r = theorem_A_check(K, b, {0, 0}, m, q, opt.count);
          std::ostringstream tag;
          tag << name << (crossing ? " s1" : " id2") << " m=" << m << " q=" << q;
          c.expect(r.equal, "sides differ at " + tag.str());
        }
    }
  }
  return {9, "satellite/representation count equality", c.ok, c.detail.str()};
}

// 10. interpolate the z-polynomial from counts at seven field sizes
inline CriterionResult crit_interpolation(const VerifyOptions& opt) {
  Checker c;
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  std::vector<std::pair<long long, SqrtQ>> vals;
  for (long long q : {2, 3, 4, 5, 7, 8, 9})
    vals.emplace_back(q, aug_number(T.dga, 0, q, opt.count));
  try {
    LaurentZ R = interpolate_ruling(vals, -2, 6);
    LaurentZ want;
    want.set(-1, 3);
    want.set(1, 9);
    want.set(3, 6);
    want.set(5, 1);
    c.expect(R == want, "recovered " + R.str());
    c.expect(R.single_parity(), "even coefficient present");
  } catch (const std::exception& e) {
    c.expect(false, e.what());
  }
  return {10, "ruling polynomial interpolation", c.ok, c.detail.str()};
}

// 11. closed-form two-dimensional counts for m52
inline CriterionResult crit_m52_closed(const VerifyOptions& opt) {
  Checker c;
  Dga m52 = builtin_knot("m52");
  for (long long q : {2, 3, 4, 5}) {
    GradedVS V{{0, 0}, q};
    RepProblem P{m52, V, Mat(2, 2), 2, {Target::units()}};
    Rat qq(q);
    Rat want = rat_pow(qq, 2) - rat_pow(qq, 3) + 2 * rat_pow(qq, 5) - rat_pow(qq, 6) -
               rat_pow(qq, 7) + rat_pow(qq, 8);
    c.expect(Rat(count_reps(P, opt.count)) == want, "raw count at q=" + std::to_string(q));
    Rat g(gl_order(2, static_cast<unsigned>(q)));
    c.expect(rep_number(P, opt.count) == SqrtQ(want / (qq * qq * g)),
             "normalized count at q=" + std::to_string(q));
    Rat reduced = Rat(1, q * q) - Rat(1, q) + 2 * qq - qq * qq - rat_pow(qq, 3) +
                  rat_pow(qq, 4);
    c.expect(reduced_rep_number(P, opt.count) == SqrtQ(reduced),
             "reduced count at q=" + std::to_string(q));
  }
  // independent oracle at q = 2: pairs of 2x2 matrices with I + AB invertible
  {
    const Field& F = Field::get(2);
    unsigned long long count = 0;
    Mat A(2, 2), B(2, 2);
    for (unsigned ca = 0; ca < 16; ++ca) {
      for (int i = 0; i < 4; ++i) A.e[i] = (ca >> i) & 1;
      for (unsigned cb = 0; cb < 16; ++cb) {
        for (int i = 0; i < 4; ++i) B.e[i] = (cb >> i) & 1;
        if (mat_invertible(F, mat_add(F, Mat::identity(2), mat_mul(F, A, B)))) ++count;
      }
    }
    c.expect_eq(count, 124ull, "(A,B)-pair oracle at q=2");
  }
  return {11, "m52 two-dimensional closed forms", c.ok, c.detail.str()};
}

// 12. colored values via satellites and via representation counts
inline CriterionResult crit_colored(const VerifyOptions& opt) {
  Checker c;
  for (const char* name : {"trefoil", "m52"}) {
    Dga K = builtin_knot(name);
    for (int m : {0, 2}) {
      for (long long q : {2, 3, 4, 5}) {
        try {
          colored_ruling(K, 2, m, q, ColoredRoute::Both, opt.count);
        } catch (const std::exception& e) {
          c.expect(false, std::string(name) + " n=2 m=" + std::to_string(m) +
                              " q=" + std::to_string(q) + ": " + e.what());
        }
      }
      try {
        colored_ruling(K, 3, m, 2, ColoredRoute::Both, opt.count);
      } catch (const std::exception& e) {
        c.expect(false, std::string(name) + " n=3 m=" + std::to_string(m) +
                            " q=2: " + e.what());
      }
    }
  }
  return {12, "colored ruling route agreement", c.ok, c.detail.str()};
}

// 13. stored colored polynomial data against the computed counts
inline CriterionResult crit_homfly(const VerifyOptions& opt) {
  Checker c;
  std::ifstream in(opt.data_dir + "/m52_n2.poly");
  if (!in.good()) {
    c.expect(false, "cannot open " + opt.data_dir + "/m52_n2.poly");
    return {13, "colored polynomial specialization", c.ok, c.detail.str()};
  }
  PolyFile f = parse_poly_file(in);
  int deg = f.poly.deg_a();
  c.expect(deg <= 0, "deg_a = " + std::to_string(deg) + " > 0");
  auto rep = compare_with_rep(f.poly, builtin_knot("m52"), 2, {2, 3, 4, 5}, opt.count);
  for (const auto& row : rep.rows)
    c.expect(row.equal, "mismatch at q=" + std::to_string(row.q));
  return {13, "colored polynomial specialization", c.ok, c.detail.str()};
}

// 14. unknot normalization across graded vector spaces
inline CriterionResult crit_normalization(const VerifyOptions& opt) {
  Checker c;
  Dga unknot = builtin_knot("unknot");
  for (long long q : {2, 3}) {
    for (auto degs : std::vector<std::vector<int>>{{0}, {0, 0}, {1, 0}}) {
      GradedVS V{degs, q};
      unsigned dim = static_cast<unsigned>(degs.size());
      for (const Mat& d : enumerate_differentials(V, 0)) {
        RepProblem P{unknot, V, d, 0, {}};
        P.targets.assign(unknot.components.size(), Target::units());
        SqrtQ r = reduced_rep_number(P, opt.count);
        if (r == SqrtQ(Rat(1))) continue;
        std::ostringstream os;
        os << "dim " << dim << " q=" << q << (d == Mat(dim, dim) ? " d=0" : " d=E12")
           << ": got " << r << " != 1";
        c.expect(false, os.str());
      }
    }
  }
  return {14, "unknot normalization", c.ok, c.detail.str()};
}

// 15. invariance and the degree-count identities
inline CriterionResult crit_invariance(const VerifyOptions& opt) {
  Checker c;
  for (const char* name : {"unknot", "trefoil", "m52"}) {
    Dga base = builtin_knot(name);
    for (long long q : {2, 3})
      for (int m : {0, 2}) {
        SqrtQ ref = aug_number(base, m, q, opt.count);
        std::string tag = std::string(name) + " q=" + std::to_string(q) +
                          " m=" + std::to_string(m);
        for (int k : {-1, 0, 1, 3}) {
          Dga stab = base;
          stabilize(stab, k);
          c.expect(aug_number(stab, m, q, opt.count) == ref,
                   "stabilization k=" + std::to_string(k) + " at " + tag);
        }
        Dga twice = base;
        split_basepoint(twice, 0, 0, "tb");
        c.expect(aug_number(twice, m, q, opt.count) == ref, "2-piece basepoint at " + tag);
        Dga thrice = twice;
        split_basepoint(thrice, 0, 1, "tc");
        c.expect(aug_number(thrice, m, q, opt.count) == ref, "3-piece basepoint at " + tag);
      }
  }

  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> deg(-6, 6), cnt(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    DegreeDist dist;
    for (int i = 0; i < 1 + trial % 7; ++i) {
      int n = cnt(rng);
      if (n) dist[deg(rng)] += n;
    }
    for (int m : {0, 2, 3, 4, 5})
      c.expect(sigma_m_partial(dist, m) == sigma_m_closed(dist, m),
               "sigma partial sum at trial " + std::to_string(trial));
  }

  const std::vector<std::pair<const char*, const char*>> sats = {
      {"trefoil", "s1"}, {"m52", "s1"}, {"unknot", "s1"}, {"trefoil", "id"}};
  for (const auto& [name, braid] : sats) {
    Satellite T = build_satellite(builtin_knot(name), parse_braid(braid, 2), {0, 0});
    for (int m : {0, 2})
      c.expect(sigma_decomposition(T, m).total() ==
                   sigma_m(degree_distribution(T.dga), m),
               std::string("sigma decomposition for ") + name + " " + braid +
                   " m=" + std::to_string(m));
  }
  return {15, "invariance property suite", c.ok, c.detail.str()};
}

}  // namespace verify_detail

inline std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt = {}) {
  using Fn = CriterionResult (*)(const VerifyOptions&);
  const Fn fns[] = {
      verify_detail::crit_path_matrix,   verify_detail::crit_kalman,
      verify_detail::crit_bruhat,        verify_detail::crit_pathset_f2,
      verify_detail::crit_satellite,     verify_detail::crit_aug_count,
      verify_detail::crit_bijection,     verify_detail::crit_split,
      verify_detail::crit_theorem_a,     verify_detail::crit_interpolation,
      verify_detail::crit_m52_closed,    verify_detail::crit_colored,
      verify_detail::crit_homfly,        verify_detail::crit_normalization,
      verify_detail::crit_invariance,
  };
  std::vector<CriterionResult> out;
  for (Fn fn : fns) {
    auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn(opt);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
      r.id = static_cast<int>(out.size()) + 1;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opt.on_result) opt.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace replab
