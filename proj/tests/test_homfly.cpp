#include <catch2/catch_amalgamated.hpp>
#include <fstream>

#include "replab/homfly.hpp"
#include "replab/knotlib.hpp"

using namespace replab;

#ifndef REPLAB_DATA_DIR
#define REPLAB_DATA_DIR "data"
#endif

static PolyFile load(const char* name) {
  std::ifstream in(std::string(REPLAB_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  return parse_poly_file(in);
}

TEST_CASE("two-variable polynomial parsing") {
  REQUIRE(parse_poly("0").is_zero());
  REQUIRE(parse_poly("a - a").is_zero());
  REQUIRE(parse_poly("q - q^(2/2)").is_zero());
  REQUIRE(parse_poly("q^(1/2)*q^(1/2) - q").is_zero());
  REQUIRE(parse_poly("q^(-1/2) - 1/q^(1/2)").is_zero());
  REQUIRE(parse_poly("(a + 1)*(a - 1) - a^2 + 1").is_zero());
  REQUIRE(parse_poly("a^-3*a^3 - 1").is_zero());
  REQUIRE(parse_poly("(q^2 - 1)/(q - 1) - q - 1").is_zero());

  TwoVarPoly p = parse_poly("q^-5*a^-2*(q^4 - q^2 + q + 1)");
  REQUIRE(p.c.size() == 1);
  REQUIRE(p.deg_a() == -2);
  // value at q = 4 (s = 2): 4^-5 * (256 - 16 + 4 + 1) = 245/1024
  REQUIRE(p.get(-2).eval_at_q(4) == SqrtQ(Rat(245, 1024)));

  REQUIRE_THROWS_AS(parse_poly("a +"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_poly("(a"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_poly("a^(1/2)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_poly("q^(1/3)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_poly("x"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_poly("1/(a + 1)"), std::domain_error);
  REQUIRE_THROWS_AS(parse_poly("1/(q - q)"), std::domain_error);
}

TEST_CASE("specialization at a^{-1} = 0") {
  REQUIRE(specialize_a_inv_zero(parse_poly("0")).is_zero());
  REQUIRE(specialize_a_inv_zero(parse_poly("a^-3*q + 5")) == RatFuncS(Rat(5)));
  REQUIRE_THROWS_AS(specialize_a_inv_zero(parse_poly("a*q")), std::domain_error);

  // (P*Q)| = P|*Q| when both sides specialize
  TwoVarPoly P = parse_poly("q + a^-1");
  TwoVarPoly Q = parse_poly("q^-2 - a^-2*q");
  REQUIRE(specialize_a_inv_zero(P * Q) ==
          specialize_a_inv_zero(P) * specialize_a_inv_zero(Q));
}

TEST_CASE("stored m52 data matches the representation counts") {
  PolyFile f = load("m52_n2.poly");
  REQUIRE(f.header.at("knot") == "m52");
  REQUIRE(f.header.at("n") == "2");

  // the unknot factor contributes a^2, the remaining part tops out at a^-2
  REQUIRE(f.poly.deg_a() == 0);

  RatFuncS spec = specialize_a_inv_zero(f.poly);
  RatFuncS expect = parse_poly(
                        "q^-2*(q^8 - q^7 - q^6 + 2*q^5 - q^3 + q^2)"
                        "/((q^2 - 1)*(q^2 - q))")
                        .get(0);
  REQUIRE(spec == expect);
  REQUIRE(spec.eval_at_q(2) == SqrtQ(Rat(31, 6)));

  Dga m52 = builtin_knot("m52");
  auto rep = compare_with_rep(f.poly, m52, 2, {2, 3, 4, 5});
  REQUIRE(rep.all_equal);
  for (const auto& row : rep.rows) {
    INFO("q=" << row.q);
    REQUIRE(row.equal);
  }

  // perturbed data must be flagged with the failing q
  TwoVarPoly bad = f.poly + parse_poly("q - 2");
  auto badrep = compare_with_rep(bad, m52, 2, {2, 3});
  REQUIRE(!badrep.all_equal);
  REQUIRE(badrep.rows[0].equal);   // q = 2 still matches
  REQUIRE(!badrep.rows[1].equal);  // q = 3 differs

  // m52 has maximal tb = -1 and rotation 0; the bound is sharp, matching the
  // existence of 2-dimensional 2-graded representations
  auto bounds = check_degree_bounds(f.poly, KnotMeta{-1, 0}, 2);
  REQUIRE(bounds.deg_a == 0);
  REQUIRE(bounds.spec_bound == 0);
  REQUIRE(bounds.spec_bound_ok);
  REQUIRE(bounds.phat_deg_a == 2);
  REQUIRE(bounds.tb_bound_ok == true);
  REQUIRE(bounds.sharp == true);
  REQUIRE(total_rep_number(m52, 2, 2, 2) != SqrtQ(Rat(0)));  // witness at q = 2
}

TEST_CASE("unknot data and the framing caveat") {
  PolyFile f = load("unknot_n1.poly");
  // the stored polynomial carries the topological 0-framing, whose positive
  // a-degree blocks the specialization
  REQUIRE(f.poly.deg_a() == 1);
  REQUIRE(!check_degree_bounds(f.poly, KnotMeta{std::nullopt, 0}, 1).spec_bound_ok);
  REQUIRE_THROWS_AS(specialize_a_inv_zero(f.poly), std::domain_error);

  // converting to the Legendrian framing (tb = -1) multiplies by a^{-1}
  TwoVarPoly leg = parse_poly("a^-1") * f.poly;
  RatFuncS spec = specialize_a_inv_zero(leg);
  Dga unknot = builtin_knot("unknot");
  for (long long q : {2, 3, 4, 5}) {
    REQUIRE(spec.eval_at_q(q) == z_of_q(q).inv());
    REQUIRE(spec.eval_at_q(q) == total_rep_number(unknot, 1, 2, q));
  }
  auto bounds = check_degree_bounds(leg, KnotMeta{-1, 0}, 1);
  REQUIRE(bounds.spec_bound_ok);
  REQUIRE(bounds.phat_deg_a == 1);
  REQUIRE(bounds.tb_bound_ok == true);
  REQUIRE(bounds.sharp == true);
}
