#include "catch2/catch_amalgamated.hpp"

#include "replab/gf.hpp"
#include "replab/linalg.hpp"
#include "replab/sqrtq.hpp"

using namespace replab;

static const unsigned kSmallQ[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16};

TEST_CASE("field axioms by exhaustion for q <= 16") {
  for (unsigned q : kSmallQ) {
    const Field& F = Field::get(q);
    REQUIRE(F.q() == q);
    for (unsigned a = 0; a < q; ++a) {
      REQUIRE(F.add(a, 0) == a);
      REQUIRE(F.mul(a, 1) == a);
      REQUIRE(F.add(a, F.neg(a)) == 0);
      if (a) REQUIRE(F.mul(a, F.inv(a)) == 1);
      for (unsigned b = 0; b < q; ++b) {
        REQUIRE(F.add(a, b) == F.add(b, a));
        REQUIRE(F.mul(a, b) == F.mul(b, a));
        for (unsigned c = 0; c < q; ++c) {
          REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
          REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
          REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("multiplicative group is cyclic") {
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u, 32u, 49u, 64u, 81u, 101u, 121u, 128u, 256u}) {
    const Field& F = Field::get(q);
    bool has_generator = false;
    for (unsigned a = 1; a < q && !has_generator; ++a)
      has_generator = (F.order(a) == q - 1);
    REQUIRE(has_generator);
  }
}

TEST_CASE("frobenius is additive and multiplicative") {
  for (unsigned q : kSmallQ) {
    const Field& F = Field::get(q);
    for (unsigned a = 0; a < q; ++a)
      for (unsigned b = 0; b < q; ++b) {
        REQUIRE(F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b)));
        REQUIRE(F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b)));
      }
  }
}

TEST_CASE("F4 uses modulus x^2 + x + 1") {
  const Field& F = Field::get(4);
  REQUIRE(F.modulus() == std::vector<unsigned>{1, 1, 1});
  // x * x = x + 1 under that modulus: indices 2*2 = 3
  REQUIRE(F.mul(2, 2) == 3);
}

TEST_CASE("prime fields up to 101 work") {
  for (unsigned q : {17u, 31u, 53u, 101u}) {
    const Field& F = Field::get(q);
    for (unsigned a = 1; a < q; ++a) REQUIRE(F.mul(a, F.inv(a)) == 1);
    REQUIRE(F.from_int(-1) == q - 1);
  }
}

TEST_CASE("checked elements reject mixed fields") {
  Fel a(Field::get(4), 2), b(Field::get(5), 2);
  REQUIRE_THROWS_AS(a + b, std::domain_error);
  REQUIRE_THROWS_AS(a * b, std::domain_error);
  Fel c(Field::get(4), 3);
  REQUIRE((a + c).v == 1);
}

TEST_CASE("invalid field orders are rejected") {
  REQUIRE_THROWS_AS(Field::get(6), std::domain_error);
  REQUIRE_THROWS_AS(Field::get(12), std::domain_error);
  REQUIRE_THROWS_AS(Field::get(257), std::domain_error);
}

TEST_CASE("matrix inverse and linear solve over F_q") {
  for (unsigned q : {2u, 3u, 5u, 9u}) {
    const Field& F = Field::get(q);
    // random-ish matrices via a simple LCG, checked against definition
    unsigned long long seed = 12345;
    auto rnd = [&]() { seed = seed * 6364136223846793005ULL + 1442695040888963407ULL; return unsigned((seed >> 33) % q); };
    for (int trial = 0; trial < 50; ++trial) {
      Mat a(3, 3);
      for (auto& x : a.e) x = rnd();
      Mat inv;
      if (mat_inverse(F, a, inv)) {
        REQUIRE(mat_mul(F, a, inv) == Mat::identity(3));
        REQUIRE(mat_mul(F, inv, a) == Mat::identity(3));
      }
      // solve a x = b and verify every reported solution
      std::vector<std::vector<unsigned>> rows(3, std::vector<unsigned>(3));
      for (unsigned i = 0; i < 3; ++i)
        for (unsigned j = 0; j < 3; ++j) rows[i][j] = a.at(i, j);
      std::vector<unsigned> b = {rnd(), rnd(), rnd()};
      auto sol = solve_linear(F, rows, b);
      if (sol.consistent) {
        unsigned long long count = 0;
        for_each_solution(F, sol, [&](const std::vector<unsigned>& x) {
          for (unsigned i = 0; i < 3; ++i) {
            unsigned acc = 0;
            for (unsigned j = 0; j < 3; ++j) acc = F.add(acc, F.mul(a.at(i, j), x[j]));
            REQUIRE(acc == b[i]);
          }
          ++count;
          return true;
        });
        unsigned long long expect = 1;
        for (unsigned i = 0; i < sol.nullity(); ++i) expect *= q;
        REQUIRE(count == expect);
      }
    }
  }
}

TEST_CASE("gl_order matches brute force for small cases") {
  REQUIRE(gl_order(2, 2) == 6);
  REQUIRE(gl_order(2, 3) == 48);
  REQUIRE(gl_order(3, 2) == 168);
  REQUIRE(gl_order(3, 3) == 11232);
  const Field& F = Field::get(3);
  unsigned long long count = 0;
  for (unsigned long long code = 0; code < 81; ++code) {
    Mat m(2, 2);
    unsigned long long c = code;
    for (auto& x : m.e) { x = unsigned(c % 3); c /= 3; }
    if (mat_invertible(F, m)) ++count;
  }
  REQUIRE(count == 48);
}

TEST_CASE("sqrtq exact arithmetic") {
  SqrtQ x(Rat(1), Rat(2), 2);  // 1 + 2 sqrt2
  SqrtQ y(Rat(3), Rat(-1), 2);
  REQUIRE((x * y) == SqrtQ(Rat(-1), Rat(5), 2));
  REQUIRE((x * x.inv()) == SqrtQ(Rat(1)));
  REQUIRE_THROWS_AS(x * SqrtQ(Rat(0), Rat(1), 3), std::domain_error);
  // perfect squares collapse to rationals
  REQUIRE(q_half_pow(4, 1) == SqrtQ(Rat(2)));
  REQUIRE(q_half_pow(9, 3) == SqrtQ(Rat(27)));
  REQUIRE(q_half_pow(2, -1) == SqrtQ(Rat(0), Rat(1, 2), 2));
  REQUIRE(z_of_q(4) == SqrtQ(Rat(3, 2)));
  REQUIRE(z_of_q(2) * z_of_q(2) == SqrtQ(Rat(1, 2)));
  // z(2)^2 = (sqrt2 - 1/sqrt2)^2 = 2 - 2 + 1/2 = 1/2
}

TEST_CASE("q_half_pow multiplies like a power") {
  for (long long q : {2, 3, 5, 8, 9}) {
    for (long long e1 = -4; e1 <= 4; ++e1)
      for (long long e2 = -4; e2 <= 4; ++e2)
        REQUIRE(q_half_pow(q, e1) * q_half_pow(q, e2) == q_half_pow(q, e1 + e2));
  }
}
