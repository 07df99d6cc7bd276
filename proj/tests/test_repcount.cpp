#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "replab/knotlib.hpp"
#include "replab/repcount.hpp"

using namespace replab;

namespace {

Mat mk(unsigned n, std::initializer_list<unsigned> vals) {
  Mat m(n, n);
  std::copy(vals.begin(), vals.end(), m.e.begin());
  return m;
}

// count pairs of 2x2 matrices (A, B) over F_q with det(I + AB) != 0;
// independent oracle for the two-dimensional counts of the five-two knot
unsigned long long ab_pair_count(long long q) {
  const Field& F = Field::get(q);
  unsigned long long total = 1;
  for (int i = 0; i < 4; ++i) total *= q;
  unsigned long long count = 0;
  Mat A(2, 2), B(2, 2);
  for (unsigned long long ca = 0; ca < total; ++ca) {
    unsigned long long r = ca;
    for (auto& e : A.e) {
      e = static_cast<unsigned>(r % q);
      r /= q;
    }
    for (unsigned long long cb = 0; cb < total; ++cb) {
      r = cb;
      for (auto& e : B.e) {
        e = static_cast<unsigned>(r % q);
        r /= q;
      }
      Mat M = mat_add(F, Mat::identity(2), mat_mul(F, A, B));
      if (mat_invertible(F, M)) ++count;
    }
  }
  return count;
}

RepProblem units_problem(const Dga& dga, GradedVS V, Mat d, int m) {
  RepProblem P{dga, std::move(V), std::move(d), m, {}};
  P.targets.assign(dga.components.size(), Target::units());
  return P;
}

}  // namespace

TEST_CASE("degree blocks and admissible differentials") {
  GradedVS flat{{0, 0}, 2};
  REQUIRE(block_dim(flat, 0, 0) == 4);
  REQUIRE(block_dim(flat, 1, 0) == 0);
  REQUIRE(block_dim(flat, 0, 2) == 4);
  REQUIRE(block_dim(flat, 1, 2) == 0);
  REQUIRE(enumerate_differentials(flat, 0) == std::vector<Mat>{Mat(2, 2)});
  REQUIRE(enumerate_differentials(flat, 2) == std::vector<Mat>{Mat(2, 2)});

  GradedVS split{{1, 0}, 2};
  auto ds = enumerate_differentials(split, 0);
  REQUIRE(ds.size() == 2);
  REQUIRE(valid_differential(split, Mat(2, 2), 0));
  REQUIRE(valid_differential(split, mk(2, {0, 1, 0, 0}), 0));
  REQUIRE_FALSE(valid_differential(split, mk(2, {0, 0, 1, 0}), 0));
  REQUIRE_FALSE(valid_differential(flat, mk(2, {0, 1, 0, 0}), 0));
}

TEST_CASE("shifted Euler characteristics on worked distributions") {
  DegreeDist sat{{-1, 1}, {0, 14}, {1, 8}};
  REQUIRE(chi_k(sat, 0) == 7);
  DegreeDist five2{{-2, 1}, {0, 3}, {1, 4}, {2, 1}};
  REQUIRE(chi_k(five2, -2) == 1);
  REQUIRE(chi_k(five2, 0) == -1);
  REQUIRE(chi_k(five2, 2) == 1);
  REQUIRE(chi_k(five2, -2) + chi_k(five2, 0) + chi_k(five2, 2) == 1);
  REQUIRE(chi_k(DegreeDist{}, 3) == 0);
}

TEST_CASE("augmentation counts on built-in knots") {
  Dga unknot = builtin_knot("unknot");
  for (long long q : {2, 3, 4, 5}) {
    REQUIRE(count_augs(unknot, 0, q) == 1);
    REQUIRE(aug_number(unknot, 0, q) == q_half_pow(q, 1) / SqrtQ(Rat(q - 1)));
    REQUIRE(reduced_rep_number(aug_problem(unknot, 0, q)) == SqrtQ(Rat(1)));
  }

  Dga tref = builtin_knot("trefoil");
  REQUIRE(count_augs(tref, 0, 2) == 5);
  // scalar equations force c1 = -(1+ab)^{-1} etc, leaving (a,b) with
  // 1 + ab != 0 free: q^2 - (q-1) solutions
  Dga m52 = builtin_knot("m52");
  for (long long q : {2, 3, 4, 5})
    REQUIRE(count_augs(m52, 2, q) ==
            static_cast<unsigned long long>(q * q - (q - 1)));
}

TEST_CASE("odd modulus uses characteristic two and the closed-form exponent") {
  Dga tref = builtin_knot("trefoil");
  REQUIRE_THROWS_AS(count_augs(tref, 3, 3), std::invalid_argument);
  REQUIRE(count_augs(tref, 3, 2) == 5);
  REQUIRE(aug_number(tref, 3, 2) == q_half_pow(2, -1) * SqrtQ(Rat(5)));
}

TEST_CASE("unknot representation counts fill the degree-one block") {
  Dga unknot = builtin_knot("unknot");
  for (long long q : {2, 3}) {
    for (auto degs : std::vector<std::vector<int>>{{0}, {0, 0}, {0, 1}}) {
      GradedVS V{degs, q};
      RepProblem P = units_problem(unknot, V, Mat(V.dim(), V.dim()), 0);
      unsigned long long want = 1;
      for (long long i = 0; i < block_dim(V, 1, 0); ++i) want *= q;
      REQUIRE(count_reps(P) == want);
    }
  }
}

TEST_CASE("reduced representation numbers of the unknot") {
  Dga unknot = builtin_knot("unknot");
  for (long long q : {2, 3}) {
    for (auto degs : std::vector<std::vector<int>>{{0}, {0, 0}, {1, 0}}) {
      GradedVS V{degs, q};
      RepProblem P = units_problem(unknot, V, Mat(V.dim(), V.dim()), 0);
      REQUIRE(reduced_rep_number(P) == SqrtQ(Rat(1)));
    }
    // with d = E12 pairing the two degrees, delta(f(b)) = c*I so the
    // c = 1 choice makes f(t) singular and drops out of the count
    GradedVS V{{1, 0}, q};
    RepProblem P = units_problem(unknot, V, mk(2, {0, 1, 0, 0}), 0);
    REQUIRE(count_reps(P) == static_cast<unsigned long long>(q - 1));
    REQUIRE(kernel_units_count(V, P.d, 0) == BigInt(q - 1));
    REQUIRE(reduced_rep_number(P) == SqrtQ(Rat(q - 1, q)));
  }
}

TEST_CASE("two-dimensional representation counts for the five-two knot") {
  Dga m52 = builtin_knot("m52");
  for (long long q : {2, 3, 4, 5}) {
    GradedVS V{{0, 0}, q};
    RepProblem P = units_problem(m52, V, Mat(2, 2), 2);
    long long want = q * q - q * q * q + 2 * q * q * q * q * q -
                     q * q * q * q * q * q - q * q * q * q * q * q * q +
                     q * q * q * q * q * q * q * q;
    REQUIRE(count_reps(P) == static_cast<unsigned long long>(want));

    Normalization N = normalization(P);
    REQUIRE(N.limit_product == SqrtQ(Rat(1, q * q)));
    REQUIRE(N.kernel_units == BigInt(gl_order(2, static_cast<unsigned>(q))));

    Rat g(gl_order(2, static_cast<unsigned>(q)));
    REQUIRE(rep_number(P) == SqrtQ(Rat(want) / (Rat(q * q) * g)));
    Rat reduced = Rat(1, q * q) - Rat(1, q) + 2 * Rat(q) - Rat(q * q) -
                  Rat(q * q * q) + Rat(q * q * q * q);
    REQUIRE(reduced_rep_number(P) == SqrtQ(reduced));
    REQUIRE(total_rep_number(m52, 2, 2, q) == rep_number(P));
  }
  REQUIRE(ab_pair_count(2) == 124);
  REQUIRE(ab_pair_count(3) == 4113);
}

TEST_CASE("trefoil split over the two-strand path subset targets") {
  Dga tref = builtin_knot("trefoil");
  GradedVS V{{0, 0}, 2};
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);

  RepProblem P{tref, V, Mat(2, 2), 0, {Target::from_pathset(spec)}};
  REQUIRE(count_reps(P) == 146);
  REQUIRE(rep_number(P) == SqrtQ(Rat(73, 12)));
  REQUIRE(reduced_rep_number(P) == SqrtQ(Rat(73, 8)));

  std::vector<std::pair<Mat, unsigned long long>> split = {
      {mk(2, {0, 1, 1, 0}), 40},
      {mk(2, {1, 1, 1, 0}), 33},
      {mk(2, {1, 0, 1, 1}), 40},
      {mk(2, {0, 1, 1, 1}), 33},
  };
  for (const auto& [target, want] : split) {
    RepProblem Q{tref, V, Mat(2, 2), 0, {Target::explicit_set({target})}};
    REQUIRE(count_reps(Q) == want);
  }
}

TEST_CASE("pruned search agrees with naive enumeration") {
  RepCountOptions naive;
  naive.naive = true;

  Dga unknot = builtin_knot("unknot");
  for (Mat d : {Mat(2, 2), mk(2, {0, 1, 0, 0})}) {
    RepProblem P = units_problem(unknot, GradedVS{{1, 0}, 2}, d, 0);
    REQUIRE(count_reps(P) == count_reps(P, naive));
  }

  Dga tref = builtin_knot("trefoil");
  for (long long q : {2, 3}) {
    RepProblem P = units_problem(tref, GradedVS{{0}, q}, Mat(1, 1), 0);
    REQUIRE(count_reps(P) == count_reps(P, naive));
  }
  RepProblem tref2 = units_problem(tref, GradedVS{{0, 0}, 2}, Mat(2, 2), 0);
  REQUIRE(count_reps(tref2) == count_reps(tref2, naive));

  Dga m52 = builtin_knot("m52");
  RepProblem P52 = units_problem(m52, GradedVS{{0}, 2}, Mat(1, 1), 2);
  REQUIRE(count_reps(P52) == count_reps(P52, naive));
}

TEST_CASE("unit-target counts decompose over the permutation path subsets") {
  Dga tref = builtin_knot("trefoil");
  for (long long q : {2, 3}) {
    GradedVS V{{0, 0}, q};
    RepProblem all = units_problem(tref, V, Mat(2, 2), 0);
    unsigned long long total = count_reps(all);
    unsigned long long split = 0;
    std::vector<int> perm = {0, 1};
    do {
      PathSubsetSpec spec(reduced_word(perm), {0, 0}, 0, q);
      RepProblem cell{tref, V, Mat(2, 2), 0, {Target::from_pathset(spec)}};
      split += count_reps(cell);
    } while (std::next_permutation(perm.begin(), perm.end()));
    REQUIRE(split == total);
  }

  Dga m52 = builtin_knot("m52");
  GradedVS V{{0, 0}, 2};
  unsigned long long split = 0;
  std::vector<int> perm = {0, 1};
  do {
    PathSubsetSpec spec(reduced_word(perm), {0, 0}, 2, 2);
    RepProblem cell{m52, V, Mat(2, 2), 2, {Target::from_pathset(spec)}};
    split += count_reps(cell);
  } while (std::next_permutation(perm.begin(), perm.end()));
  REQUIRE(split == 124);
}

TEST_CASE("representation numbers survive stabilization and basepoint splits") {
  for (const char* name : {"unknot", "trefoil", "m52"}) {
    Dga base = builtin_knot(name);
    for (long long q : {2, 3}) {
      for (int m : {0, 2}) {
        SqrtQ ref = aug_number(base, m, q);
        for (int k : {-1, 0, 1, 3}) {
          Dga stab = base;
          stabilize(stab, k);
          REQUIRE(aug_number(stab, m, q) == ref);
        }
        unsigned long long raw = count_augs(base, m, q);
        Dga twice = base;
        split_basepoint(twice, 0, 0, "tb");
        REQUIRE(count_augs(twice, m, q) == raw * (q - 1));
        REQUIRE(aug_number(twice, m, q) == ref);
        Dga thrice = twice;
        split_basepoint(thrice, 0, 1, "tc");
        REQUIRE(aug_number(thrice, m, q) == ref);
      }
    }
  }

  Dga tref = builtin_knot("trefoil");
  RepProblem P = units_problem(tref, GradedVS{{0, 0}, 2}, Mat(2, 2), 0);
  SqrtQ ref = rep_number(P);
  Dga stab = tref;
  stabilize(stab, 0);
  REQUIRE(rep_number(units_problem(stab, GradedVS{{0, 0}, 2}, Mat(2, 2), 0)) == ref);
  Dga split = tref;
  split_basepoint(split, 0, 0, "tb");
  REQUIRE(rep_number(units_problem(split, GradedVS{{0, 0}, 2}, Mat(2, 2), 0)) == ref);
}

TEST_CASE("sigma partial sums match the closed form") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> deg(-6, 6), cnt(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    DegreeDist dist;
    int entries = 1 + trial % 7;
    for (int i = 0; i < entries; ++i) {
      int c = cnt(rng);
      if (c) dist[deg(rng)] += c;
    }
    for (int m : {0, 2, 3, 4, 5})
      REQUIRE(sigma_m_partial(dist, m) == sigma_m_closed(dist, m));
  }
}

TEST_CASE("thread count does not change counts") {
  Dga tref = builtin_knot("trefoil");
  GradedVS V{{0, 0}, 2};
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);
  RepProblem P{tref, V, Mat(2, 2), 0, {Target::from_pathset(spec)}};
  RepCountOptions one, four;
  one.threads = 1;
  four.threads = 4;
  REQUIRE(count_reps(P, one) == 146);
  REQUIRE(count_reps(P, four) == 146);
}
