#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "replab/knotlib.hpp"
#include "replab/satellite.hpp"

using namespace replab;

namespace {

Mat eval_word_mat(const NcPoly& p, const std::map<int, Mat>& f, const Field& F, unsigned n) {
  Mat acc(n, n);
  for (const auto& t : p.terms()) {
    Mat prod = mat_scale(F, F.from_int(t.c), Mat::identity(n));
    for (Letter l : t.w) {
      Mat m = f.at(letter_gen(l));
      if (letter_inverse(l)) {
        Mat mi(n, n);
        REQUIRE(mat_inverse(F, m, mi));
        m = mi;
      }
      prod = mat_mul(F, prod, m);
    }
    acc = mat_add(F, acc, prod);
  }
  return acc;
}

}  // namespace

TEST_CASE("two-strand satellite of the trefoil matches the worked presentation") {
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  const auto& D = T.dga;

  auto dist = degree_distribution(D);
  REQUIRE(dist == DegreeDist{{-1, 1}, {0, 14}, {1, 8}});
  REQUIRE(D.chord_ids().size() == 23);
  REQUIRE(chi_k(dist, 0) == 7);

  int t1 = T.sym.t[0], t2 = T.sym.t[1];
  int x12 = T.sym.x[0][1], y12 = T.sym.y[0][1];
  REQUIRE(D.diff[T.sym.p[0]] ==
          -(NcPoly::gen(t1, true) * NcPoly::gen(y12) * NcPoly::gen(t2)));
  REQUIRE(D.diff[x12] == NcPoly::gen(y12));
  REQUIRE(D.diff[y12].is_zero());

  // degree-0 blocks: d A_k = -Y A_k + A_k Y
  auto G = [](int id) { return NcPoly::gen(id); };
  int a1_11 = T.a[0][0], a1_12 = T.a[0][1], a1_21 = T.a[0][2], a1_22 = T.a[0][3];
  REQUIRE(D.diff[a1_11] == -(G(y12) * G(a1_21)));
  REQUIRE(D.diff[a1_12] == G(a1_11) * G(y12) - G(y12) * G(a1_22));
  REQUIRE(D.diff[a1_21].is_zero());
  REQUIRE(D.diff[a1_22] == G(a1_21) * G(y12));

  // d A_4 = Q + A_1 + A_3 + A_1 A_2 A_3 - Y A_4 - A_4 Y
  PolyMat A1 = a_block(T, 0), A2 = a_block(T, 1), A3 = a_block(T, 2), A4 = a_block(T, 3);
  PolyMat Y(2, 2);
  Y.at(0, 1) = G(y12);
  PolyMat expect = pm_add(T.Qxy, pm_add(A1, pm_add(A3, pm_mul(A1, pm_mul(A2, A3)))));
  expect = pm_sub(expect, pm_mul(Y, A4));
  expect = pm_sub(expect, pm_mul(A4, Y));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) REQUIRE(D.diff[T.a[3][i * 2 + j]] == expect.at(i, j));

  REQUIRE(pm_mul(T.Pxy, T.Qxy) == PolyMat::identity(2));
  REQUIRE(D.components == std::vector<std::vector<int>>{{t1, t2}});
  REQUIRE(check_dga(D).ok);
}

TEST_CASE("trivial braids reproduce the base knot") {
  Satellite T1 = build_satellite(builtin_knot("unknot"), Braid(1, {}), {0});
  REQUIRE(T1.dga.chord_ids().size() == 1);
  int b11 = T1.a[0][0];
  REQUIRE(T1.dga.diff[b11] == NcPoly::gen(T1.sym.t[0]) + NcPoly::constant(1));

  Satellite T3 = build_satellite(builtin_knot("trefoil"), Braid(1, {}), {0});
  REQUIRE(count_augs(T3.dga, 0, 2) == 5);

  // two parallel copies: the braid contributes only the dip generators
  Satellite T2 = build_satellite(builtin_knot("trefoil"), Braid(2, {}), {0, 0});
  int t1 = T2.sym.t[0], t2 = T2.sym.t[1];
  int y12 = T2.sym.y[0][1];
  REQUIRE(T2.dga.diff[T2.sym.x[0][1]] ==
          NcPoly::gen(y12) - NcPoly::gen(t1, true) * NcPoly::gen(y12) * NcPoly::gen(t2));
  REQUIRE(T2.dga.diff[T2.a[0][0]] == -(NcPoly::gen(y12) * NcPoly::gen(T2.a[0][2])));
  REQUIRE(T2.dga.components.size() == 2);
}

TEST_CASE("augmentation counts of the trefoil two-copy satellite") {
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});

  auto augs = enumerate_augmentations(T.dga, 0, Field::get(2));
  REQUIRE(augs.size() == 146);
  REQUIRE(count_augs(T.dga, 0, 2) == 146);
  REQUIRE(aug_number(T.dga, 0, 2) == SqrtQ(Rat(0), Rat(73, 8), 2));

  // the augmentation count equals the cell-constrained representation count
  for (long long q : {2, 3}) {
    RepProblem P;
    P.dga = builtin_knot("trefoil");
    P.V = GradedVS{{0, 0}, q};
    P.d = Mat(2, 2);
    P.m = 0;
    P.targets = {Target::from_pathset(PathSubsetSpec(parse_braid("s1"), {0, 0}, 0, q))};
    REQUIRE(count_augs(T.dga, 0, q) == count_reps(P));
  }
}

TEST_CASE("satellite augmentations induce cell representations bijectively") {
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  const Field& F = Field::get(2);
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);
  const Dga& K = T.knot;

  auto augs = enumerate_augmentations(T.dga, 0, F);
  REQUIRE(augs.size() == 146);

  std::set<std::vector<unsigned>> images;
  for (const auto& eps : augs) {
    SatelliteRep R = aug_to_rep(T, eps, F);
    REQUIRE(R.d == Mat(2, 2));  // no degree -1 values at m = 0
    REQUIRE(path_subset_member(R.f.at(T.kt), spec));
    for (int g : K.chord_ids())
      if (!K.diff[g].is_zero())
        REQUIRE(eval_word_mat(K.diff[g], R.f, F, 2) == Mat(2, 2));

    std::vector<unsigned> key = R.d.e;
    for (const auto& [id, m] : R.f) key.insert(key.end(), m.e.begin(), m.e.end());
    images.insert(key);

    REQUIRE(rep_to_aug(T, R, spec) == eps);
  }
  REQUIRE(images.size() == 146);
}

TEST_CASE("sigma splits over the satellite generator classes") {
  Satellite T = build_satellite(builtin_knot("trefoil"), parse_braid("s1"), {0, 0});
  SigmaSplit s = sigma_decomposition(T, 0);
  REQUIRE(s.crossings == 1);
  REQUIRE(s.dips == 2);
  REQUIRE(s.chords == 4);
  REQUIRE(s.total() == sigma_m(degree_distribution(T.dga), 0));

  Satellite Tm = build_satellite(builtin_knot("m52"), parse_braid("s1"), {0, 0});
  SigmaSplit sm = sigma_decomposition(Tm, 2);
  REQUIRE(sm.total() == sigma_m(degree_distribution(Tm.dga), 2));

  Satellite Tp = build_satellite(builtin_knot("trefoil"), Braid(2, {}), {0, 0});
  REQUIRE(sigma_decomposition(Tp, 0).crossings == 0);
}

TEST_CASE("reduced words with equal permutation give equal counts") {
  Dga K = builtin_knot("unknot");
  Satellite Ta = build_satellite(K, parse_braid("s1 s3"), {0, 0, 0, 0});
  Satellite Tb = build_satellite(K, parse_braid("s3 s1"), {0, 0, 0, 0});
  REQUIRE(degree_distribution(Ta.dga) == degree_distribution(Tb.dga));
  REQUIRE(Ta.dga.components.size() == 2);
  for (int m : {0, 1})
    REQUIRE(count_augs(Ta.dga, m, 2) == count_augs(Tb.dga, m, 2));
}
