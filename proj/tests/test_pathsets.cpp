#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "replab/pathsets.hpp"

using namespace replab;

namespace {

Mat mk(unsigned n, std::initializer_list<unsigned> vals) {
  Mat m(n, n);
  std::copy(vals.begin(), vals.end(), m.e.begin());
  return m;
}

bool in_kalman_pattern(const Mat& S, const std::vector<int>& pi) {
  const unsigned n = S.rows;
  auto inv = perm_inverse(pi);
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i < n; ++i) {
      if (static_cast<int>(i) == pi[j]) {
        if (S.at(i, j) != 1) return false;
      } else if (S.at(i, j)) {
        if (static_cast<int>(i) >= pi[j]) return false;               // must be above its column's 1
        if (static_cast<int>(j) >= inv[static_cast<int>(i)]) return false;  // and left of its row's 1
      }
    }
  return true;
}

}  // namespace

TEST_CASE("two-strand path subset over F_2 is the four listed matrices") {
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);
  auto cell = enumerate_path_subset(spec);
  std::set<Mat> got(cell.begin(), cell.end());
  std::set<Mat> want = {mk(2, {0, 1, 1, 0}), mk(2, {1, 1, 1, 0}),
                        mk(2, {1, 0, 1, 1}), mk(2, {0, 1, 1, 1})};
  REQUIRE(got == want);
}

TEST_CASE("identity braid gives the Borel subgroup") {
  for (long long q : {2, 3, 4, 5}) {
    PathSubsetSpec spec(Braid(2, {}), {0, 0}, 0, q);
    auto cell = enumerate_path_subset(spec);
    REQUIRE(cell.size() == static_cast<size_t>((q - 1) * (q - 1) * q));
    for (const Mat& A : cell) {
      REQUIRE(A.at(1, 0) == 0);
      REQUIRE(A.at(0, 0) != 0);
      REQUIRE(A.at(1, 1) != 0);
    }
  }
}

TEST_CASE("cell size is (q-1)^n q^{l + n(n-1)/2} for constant potential") {
  for (unsigned n : {2u, 3u}) {
    for (long long q : {2, 3}) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        Braid b = reduced_word(perm);
        PathSubsetSpec spec(b, std::vector<int>(n, 0), 0, q);
        unsigned long long want = 1;
        for (unsigned i = 0; i < n; ++i) want *= q - 1;
        for (unsigned i = 0; i < b.length() + n * (n - 1) / 2; ++i) want *= q;
        REQUIRE(enumerate_path_subset(spec).size() == want);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}

TEST_CASE("spec rejects non-reduced words") {
  REQUIRE_THROWS_AS(PathSubsetSpec(parse_braid("s1 s2 s1"), {0, 0, 0}, 0, 2),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(PathSubsetSpec(parse_braid("s1 s1"), {0, 0}, 0, 2), std::invalid_argument);
}

TEST_CASE("elimination worked examples") {
  const Field& F2 = Field::get(2);
  auto cid = bruhat_reduce(F2, Mat::identity(3));
  REQUIRE(cid.pi == std::vector<int>{0, 1, 2});
  REQUIRE(cid.S == Mat::identity(3));

  auto cswap = bruhat_reduce(F2, mk(2, {0, 1, 1, 0}));
  REQUIRE(cswap.pi == std::vector<int>{1, 0});
  REQUIRE(cswap.S == mk(2, {0, 1, 1, 0}));
  REQUIRE(cswap.D == Mat::identity(2));
  REQUIRE(cswap.U == Mat::identity(2));

  auto cfree = bruhat_reduce(F2, mk(2, {1, 1, 1, 0}));
  REQUIRE(cfree.pi == std::vector<int>{1, 0});
  REQUIRE(cfree.S == mk(2, {1, 1, 1, 0}));

  REQUIRE_THROWS_AS(bruhat_reduce(F2, mk(2, {1, 1, 1, 1})), std::invalid_argument);
}

TEST_CASE("elimination factorization properties on random matrices") {
  std::mt19937 rng(20260826);
  for (long long q : {2, 3, 4, 5, 7}) {
    const Field& F = Field::get(q);
    for (unsigned n : {2u, 3u, 4u}) {
      for (int trial = 0; trial < 40; ++trial) {
        Mat A(n, n);
        do {
          for (auto& v : A.e) v = rng() % F.q();
        } while (!mat_invertible(F, A));
        auto cell = bruhat_reduce(F, A);
        REQUIRE(mat_mul(F, cell.D, mat_mul(F, A, cell.U)) == cell.S);
        REQUIRE(in_kalman_pattern(cell.S, cell.pi));
        for (unsigned i = 0; i < n; ++i) {
          REQUIRE(cell.D.at(i, i) != 0);
          REQUIRE(cell.U.at(i, i) == 1);
          for (unsigned j = 0; j < i; ++j) {
            REQUIRE(cell.U.at(i, j) == 0);
            if (i != j) REQUIRE(cell.D.at(i, j) == 0);
          }
        }
      }
    }
  }
}

TEST_CASE("ring map recovery on the two-strand cell") {
  PathSubsetSpec spec(parse_braid("s1"), {0, 0}, 0, 2);
  auto a1 = recover_ring_map(mk(2, {1, 0, 1, 1}), spec);
  REQUIRE(a1.has_value());
  REQUIRE(a1->p[0] == 1);
  REQUIRE(a1->x.at(0, 1) == 1);
  auto a2 = recover_ring_map(mk(2, {1, 1, 1, 0}), spec);
  REQUIRE(a2.has_value());
  REQUIRE(a2->p[0] == 1);
  REQUIRE(a2->x.at(0, 1) == 0);
  // identity matrix lies in the identity cell, not this one
  REQUIRE_FALSE(recover_ring_map(Mat::identity(2), spec).has_value());
}

TEST_CASE("recovery round-trips over every cell member") {
  for (long long q : {2, 3, 4}) {
    for (unsigned n : {2u, 3u}) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        PathSubsetSpec spec(reduced_word(perm), std::vector<int>(n, 0), 0, q);
        for (const Mat& A : enumerate_path_subset(spec)) {
          auto a = recover_ring_map(A, spec);
          REQUIRE(a.has_value());
          REQUIRE(eval_path_matrix(spec, *a) == A);
          REQUIRE(assignment_m_graded(spec, *a));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}

TEST_CASE("members of other cells are rejected") {
  long long q = 3;
  std::vector<int> id_perm = {0, 1, 2}, rev = {2, 1, 0};
  PathSubsetSpec spec_id(reduced_word(id_perm), {0, 0, 0}, 0, q);
  PathSubsetSpec spec_rev(reduced_word(rev), {0, 0, 0}, 0, q);
  for (const Mat& A : enumerate_path_subset(spec_id))
    REQUIRE_FALSE(recover_ring_map(A, spec_rev).has_value());
  for (const Mat& A : enumerate_path_subset(spec_rev))
    REQUIRE_FALSE(recover_ring_map(A, spec_id).has_value());
}

TEST_CASE("graded subset shrinks when potentials separate the strands") {
  // identity pattern on two strands with distinct potentials: the dip
  // generator x_{1,2} has nonzero degree, so it must vanish when m = 0
  for (long long q : {2, 3, 5}) {
    PathSubsetSpec graded(Braid(2, {}), {0, 1}, 0, q);
    auto cell = enumerate_path_subset(graded);
    REQUIRE(cell.size() == static_cast<size_t>((q - 1) * (q - 1)));
    for (const Mat& A : cell) {
      REQUIRE(A.at(0, 1) == 0);
      REQUIRE(A.at(1, 0) == 0);
    }
    // m = 1 removes the constraint
    PathSubsetSpec coarse(Braid(2, {}), {0, 1}, 1, q);
    REQUIRE(enumerate_path_subset(coarse).size() ==
            static_cast<size_t>((q - 1) * (q - 1) * q));
    // membership distinguishes the two
    Mat A = Mat::identity(2);
    A.at(0, 1) = 1;
    REQUIRE(path_subset_member(A, coarse));
    REQUIRE_FALSE(path_subset_member(A, graded));
  }
}

TEST_CASE("path subset depends only on the permutation, not the word") {
  // sigma_1 sigma_3 and sigma_3 sigma_1 are distinct reduced words for the
  // same permutation
  for (long long q : {2, 3}) {
    PathSubsetSpec s13(parse_braid("s1 s3"), {0, 0, 0, 0}, 0, q);
    PathSubsetSpec s31(parse_braid("s3 s1"), {0, 0, 0, 0}, 0, q);
    auto a = enumerate_path_subset(s13);
    auto b = enumerate_path_subset(s31);
    REQUIRE(a == b);
  }
}

TEST_CASE("path subsets partition the general linear group") {
  struct Case { unsigned n; long long q; unsigned long long gl; };
  for (auto [n, q, gl] : {Case{2, 2, 6}, Case{2, 3, 48}, Case{3, 2, 168}, Case{3, 3, 11232}}) {
    auto rep = verify_bruhat_partition(n, q);
    INFO("n=" << n << " q=" << q);
    REQUIRE(rep.gl == gl);
    REQUIRE(rep.total == gl);
    REQUIRE(rep.disjoint);
    REQUIRE(rep.covers);
    REQUIRE(rep.reduce_consistent);
    REQUIRE(rep.ok());
  }
}
