#include "catch2/catch_amalgamated.hpp"

#include "replab/dga.hpp"
#include "replab/knotlib.hpp"

using namespace replab;

TEST_CASE("canonical form merges, sorts and cancels") {
  Algebra A;
  int x = A.add_gen("x", 0);
  int y = A.add_gen("y", 1);
  int t = A.add_gen("t", 0, true);

  NcPoly p = NcPoly::gen(y) + NcPoly::gen(x) + NcPoly::gen(y);
  REQUIRE(p.str(A) == "x + 2*y");

  NcPoly tt = NcPoly::gen(t) * NcPoly::gen(t, true);
  REQUIRE(tt == NcPoly::constant(1));
  REQUIRE((NcPoly::gen(t, true) * NcPoly::gen(x) * NcPoly::constant(0)).is_zero());

  NcPoly w = NcPoly::term(1, {make_letter(x), make_letter(t), make_letter(t, true), make_letter(y)});
  REQUIRE(w == NcPoly::gen(x) * NcPoly::gen(y));

  // length-lex: shorter words first, then lexicographic
  NcPoly q = NcPoly::gen(x) * NcPoly::gen(y) + NcPoly::gen(y) + NcPoly::gen(x) * NcPoly::gen(x);
  REQUIRE(q.str(A) == "y + x*x + x*y");
}

TEST_CASE("noncommutative multiplication keeps order") {
  Algebra A;
  int x = A.add_gen("x", 0);
  int y = A.add_gen("y", 0);
  NcPoly xy = NcPoly::gen(x) * NcPoly::gen(y);
  NcPoly yx = NcPoly::gen(y) * NcPoly::gen(x);
  REQUIRE(xy != yx);
  REQUIRE((xy - yx + yx) == xy);
}

TEST_CASE("signed Leibniz rule") {
  Dga D;
  int a = D.add_chord("a", 1);   // odd
  int b = D.add_chord("b", 0);
  int u = D.add_chord("u", 2);   // even
  D.set_diff(a, NcPoly::gen(b));
  D.set_diff(u, NcPoly::gen(a));

  // d(a*a) = b*a - a*b  (sign flips across odd-degree a)
  NcPoly aa = NcPoly::gen(a) * NcPoly::gen(a);
  REQUIRE(apply_diff(D, aa) ==
          NcPoly::gen(b) * NcPoly::gen(a) - NcPoly::gen(a) * NcPoly::gen(b));
  // d(u*a) = a*a + u*b (no sign flip across even u)
  NcPoly ua = NcPoly::gen(u) * NcPoly::gen(a);
  REQUIRE(apply_diff(D, ua) ==
          NcPoly::gen(a) * NcPoly::gen(a) + NcPoly::gen(u) * NcPoly::gen(b));
  // product rule on a general product
  NcPoly p = aa + NcPoly::gen(u);
  NcPoly q = NcPoly::gen(a) + NcPoly::constant(3);
  NcPoly lhs = apply_diff(D, p * q);
  // deg(p) = 2 even
  NcPoly rhs = apply_diff(D, p) * q + p * apply_diff(D, q);
  REQUIRE(lhs == rhs);
}

TEST_CASE("check_dga accepts built-ins and rejects a broken differential") {
  for (const char* name : {"unknot", "trefoil", "m52"}) {
    Dga D = builtin_knot(name);
    auto r = check_dga(D);
    INFO(name);
    for (auto& e : r.errors) INFO(e);
    REQUIRE(r.ok);
  }
  Dga bad;
  int a = bad.add_chord("a", 1);
  int c = bad.add_chord("c", 1);
  bad.set_diff(a, NcPoly::gen(c));  // degree 1 != 0
  REQUIRE_FALSE(check_dga(bad).ok);

  // d^2 != 0
  Dga bad2;
  int x = bad2.add_chord("x", 2);
  int y = bad2.add_chord("y", 1);
  int z = bad2.add_chord("z", 0);
  bad2.set_diff(x, NcPoly::gen(y));
  bad2.set_diff(y, NcPoly::gen(z));
  REQUIRE_FALSE(check_dga(bad2).ok);
}

TEST_CASE("degree distribution of built-ins") {
  auto m52 = degree_distribution(builtin_knot("m52"));
  REQUIRE(m52 == std::map<int, long long>{{-2, 1}, {0, 3}, {1, 4}, {2, 1}});
  auto tre = degree_distribution(builtin_knot("trefoil"));
  REQUIRE(tre == std::map<int, long long>{{0, 3}, {1, 2}});
}

TEST_CASE("stabilization stays a DGA") {
  Dga D = builtin_knot("trefoil");
  stabilize(D, 2);
  stabilize(D, 0, "_2");
  REQUIRE(check_dga(D).ok);
  auto dd = degree_distribution(D);
  REQUIRE(dd[2] == 1);
  REQUIRE(dd[-1] == 1);
}

TEST_CASE("basepoint split stays a DGA and rewrites differentials") {
  Dga D = builtin_knot("trefoil");
  int t = D.alg.find("t");
  split_basepoint(D, 0, 0, "t2");
  REQUIRE(check_dga(D).ok);
  REQUIRE(D.components[0].size() == 2);
  int t2 = D.alg.find("t2");
  // t^-1 in d a4 became t2^-1 t^-1
  NcPoly expect = NcPoly::gen(t2, true) * NcPoly::gen(t, true);
  bool found = false;
  for (const auto& term : D.diff[D.alg.find("a4")].terms())
    if (NcPoly::term(term.c, term.w) == expect) found = true;
  REQUIRE(found);
}
