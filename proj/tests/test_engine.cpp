// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "treemi/engine.hpp"
#include "treemi/parser.hpp"

using namespace treemi;

namespace {

Problem prepared(const std::string& text) {
  Problem p = parse_problem(text);
  establish_support(p);
  return p;
}

Problem load(const std::string& name) {
  std::ifstream in(std::string(TREEMI_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return prepared(ss.str());
}

Polynomial poly(std::vector<long> coeffs) {
  std::vector<Rational> v;
  for (long c : coeffs) v.push_back(Rational(c));
  return Polynomial(std::move(v));
}

const char* kLeafPair =
    "(declare-real xi) (declare-real xj)"
    "(assert (< 0 xi)) (assert (< xi 1))"
    "(assert (< xi xj))"
    "(assert (< 0 xj)) (assert (< xj 2))";

}  // namespace

TEST_CASE("critical points") {
  SUBCASE("one bivariate line against a unit node interval") {
    Problem p = prepared(kLeafPair);
    PiecewisePoly base = PiecewisePoly::constant(rat(0), rat(1), rat(1));
    auto pts = critical_points(p, 0, 1, base, p.node_formula(0), *p.edge_formula(0, 1));
    CHECK(pts == std::vector<Rational>{rat(0), rat(1), rat(2)});
  }
  SUBCASE("diagonal crossing both node bounds") {
    Problem p = prepared(
        "(declare-real xi) (declare-real xj)"
        "(assert (< 0 xi)) (assert (< xi 2))"
        "(assert (< (+ xi xj) 2))"
        "(assert (< 0 xj)) (assert (< xj 2))");
    PiecewisePoly base = PiecewisePoly::constant(rat(0), rat(2), rat(1));
    auto pts = critical_points(p, 0, 1, base, p.node_formula(0), *p.edge_formula(0, 1));
    CHECK(pts == std::vector<Rational>{rat(0), rat(2)});
  }
  SUBCASE("empty edge formula leaves only the support endpoints") {
    Problem p = prepared(kLeafPair);
    PiecewisePoly base = PiecewisePoly::constant(rat(0), rat(1), rat(1));
    auto pts = critical_points(p, 0, 1, base, p.node_formula(0), {});
    CHECK(pts == std::vector<Rational>{rat(0), rat(2)});
  }
}

TEST_CASE("intervals from points") {
  CHECK(intervals_from_points({rat(0), rat(1), rat(2)}).size() == 2);
  auto iv = intervals_from_points({rat(0), rat(2)});
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].lo == rat(0));
  CHECK(iv[0].hi == rat(2));
  CHECK(intervals_from_points({rat(5)}).empty());
  CHECK(intervals_from_points({}).empty());
}

TEST_CASE("symbolic bounds") {
  Problem p = prepared(kLeafPair);
  PiecewisePoly base = PiecewisePoly::constant(rat(0), rat(1), rat(1));

  SUBCASE("moving upper bound below the crossing") {
    auto triples = symbolic_bounds(p, 0, 1, base, p.node_formula(0),
                                   *p.edge_formula(0, 1), Interval{rat(0), rat(1)});
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].lower == AffineExpr::constant(rat(0)));
    CHECK(triples[0].upper == AffineExpr(rat(1), rat(0)));
    CHECK(triples[0].integrand == poly({1}));
  }
  SUBCASE("constant bounds above the crossing") {
    auto triples = symbolic_bounds(p, 0, 1, base, p.node_formula(0),
                                   *p.edge_formula(0, 1), Interval{rat(1), rat(2)});
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].lower == AffineExpr::constant(rat(0)));
    CHECK(triples[0].upper == AffineExpr::constant(rat(1)));
  }
  SUBCASE("a disjunction contributes two disjoint triples") {
    Problem d = prepared(
        "(declare-real xi) (declare-real xj)"
        "(assert (< -5 xi)) (assert (< xi 5))"
        "(assert (or (< xi (- xj 2)) (< (+ xj 2) xi)))"
        "(assert (< -5 xj)) (assert (< xj 5))");
    PiecewisePoly wide = PiecewisePoly::constant(rat(-5), rat(5), rat(1));
    auto pts = critical_points(d, 0, 1, wide, d.node_formula(0), *d.edge_formula(0, 1));
    CHECK(pts == std::vector<Rational>{rat(-5), rat(-3), rat(3), rat(5)});
    auto triples = symbolic_bounds(d, 0, 1, wide, d.node_formula(0),
                                   *d.edge_formula(0, 1), Interval{rat(-3), rat(3)});
    REQUIRE(triples.size() == 2);
    CHECK(triples[0].lower == AffineExpr::constant(rat(-5)));
    CHECK(triples[0].upper == AffineExpr(rat(1), rat(-2)));
    CHECK(triples[1].lower == AffineExpr(rat(1), rat(2)));
    CHECK(triples[1].upper == AffineExpr::constant(rat(5)));
  }
}

TEST_CASE("send_message: leaf integrates the running minimum") {
  Problem p = prepared(kLeafPair);
  PiecewisePoly base = PiecewisePoly::constant(rat(0), rat(1), rat(1));
  PiecewisePoly msg = send_message_over(p, 0, 1, base, *p.edge_formula(0, 1));
  PiecewisePoly expected = PiecewisePoly::from_pieces(
      {Piece{rat(0), rat(1), poly({0, 1})}, Piece{rat(1), rat(2), poly({1})}});
  CHECK(msg == expected);
}

TEST_CASE("send_message: two-piece message with a saturated tail") {
  // 0 < x1 < 2, x1 < x2, 0 < x2 < 3: the message to x2 rises then saturates.
  Problem p = prepared(
      "(declare-real x1) (declare-real x2)"
      "(assert (< 0 x1)) (assert (< x1 2))"
      "(assert (< x1 x2))"
      "(assert (< 0 x2)) (assert (< x2 3))");
  PiecewisePoly base = PiecewisePoly::constant(rat(0), rat(2), rat(1));
  PiecewisePoly msg = send_message_over(p, 0, 1, base, *p.edge_formula(0, 1));
  PiecewisePoly expected = PiecewisePoly::from_pieces(
      {Piece{rat(0), rat(2), poly({0, 1})}, Piece{rat(2), rat(3), poly({2})}});
  CHECK(msg == expected);
}

TEST_CASE("three-variable chain: messages, beliefs, MI") {
  Problem p = load("fig1_chain.mi");
  PrimalGraph g = primal_graph(p);
  assert_tree(g, p.variables);
  PseudoTree t = root_at(g, 2);  // orient the chain toward x3
  BeliefTable table = run(p, t);

  // support of x2 tightens to (0,2) through the x2 < x3 edge
  CHECK(p.support[1].lo == rat(0));
  CHECK(p.support[1].hi == rat(2));

  CHECK(table.messages.at({0, 1}) ==
        PiecewisePoly::from_pieces({Piece{rat(0), rat(2), poly({0, 1})}}));
  CHECK(table.messages.at({1, 2}) ==
        PiecewisePoly::from_pieces(
            {Piece{rat(1), rat(2), Polynomial({Rational(0), Rational(0), rat(1, 2)})}}));
  CHECK(table.messages.at({2, 1}) ==
        PiecewisePoly::from_pieces(
            {Piece{rat(0), rat(1), poly({1})}, Piece{rat(1), rat(2), poly({2, -1})}}));

  PiecewisePoly b2 = PiecewisePoly::from_pieces(
      {Piece{rat(0), rat(1), poly({0, 1})}, Piece{rat(1), rat(2), poly({0, 2, -1})}});
  CHECK(table.beliefs[1] == b2);
  CHECK(mi(table, p) == rat(7, 6));

  SUBCASE("marginal of the middle variable") {
    PiecewisePoly m = marginal(table, p, 1);
    CHECK(m == b2.scale(rat(6, 7)));
    CHECK(m.integrate_all() == rat(1));
  }
  SUBCASE("single-edge recomposition agrees with the MI value") {
    for (const auto& [edge, msg] : table.messages) {
      VarId i = edge.first, j = edge.second;
      PiecewisePoly pi_j;
      bool any = false;
      std::vector<VarId> nb = t.children[j];
      if (t.parent[j] >= 0) nb.push_back(t.parent[j]);
      for (VarId c : nb) {
        if (c == i) continue;
        pi_j = any ? pw_multiply(pi_j, table.messages.at({c, j})) : table.messages.at({c, j});
        any = true;
      }
      if (!any) pi_j = PiecewisePoly::constant(p.support[j].lo, p.support[j].hi, rat(1));
      Rational via_edge =
          integrate_against(p, pw_multiply(msg, pi_j), j, {&p.node_formula(j)});
      CHECK(via_edge == table.mi_value);
    }
  }
}

TEST_CASE("unit box run") {
  Problem p = load("unitbox.mi");
  Solved s = solve_problem(p);
  CHECK(mi(s.table, s.problem) == rat(1));
  CHECK(s.table.beliefs[0] == PiecewisePoly::constant(rat(0), rat(1), rat(1)));

  CHECK(moment(s.table, s.problem, 0, 0) == rat(1));
  CHECK(moment(s.table, s.problem, 0, 1) == rat(1, 2));
  CHECK(moment(s.table, s.problem, 0, 2) == rat(1, 3));
  CHECK(marginal(s.table, s.problem, 0) == PiecewisePoly::constant(rat(0), rat(1), rat(1)));

  Query half = parse_query("(< x 1/2)", s.problem);
  CHECK(query_univariate(s.table, s.problem, s.tree, 0, half.clauses) == rat(1, 2));
  Query tautology = parse_query("true", s.problem);
  CHECK(query_univariate(s.table, s.problem, s.tree, 0, tautology.clauses) == rat(1));
}

TEST_CASE("two-variable simplex") {
  Problem p = load("simplex.mi");
  Solved s = solve_problem(p);
  CHECK(mi(s.table, s.problem) == rat(1, 2));

  // marginal of x1 is 2*x1 on (0,1); first moment 2/3
  CHECK(marginal(s.table, s.problem, 0) ==
        PiecewisePoly::from_pieces({Piece{rat(0), rat(1), poly({0, 2})}}));
  CHECK(moment(s.table, s.problem, 0, 1) == rat(2, 3));

  SUBCASE("bivariate queries on the edge") {
    Query contra = parse_query("(< x1 x2)", s.problem);
    CHECK(query_bivariate(s.table, s.problem, s.tree, 0, 1, contra.clauses) == rat(0));
    Query diag = parse_query("(< (+ x1 x2) 1)", s.problem);
    CHECK(query_bivariate(s.table, s.problem, s.tree, 0, 1, diag.clauses) == rat(1, 2));
    Query tautology = parse_query("true", s.problem);
    CHECK(query_bivariate(s.table, s.problem, s.tree, 0, 1, tautology.clauses) == rat(1));
  }
}

TEST_CASE("infeasible problem yields zero with empty beliefs") {
  Problem p = prepared("(declare-real x) (assert (< x 0)) (assert (< 1 x))");
  Solved s = solve_problem(p);
  CHECK(s.table.mi_value == rat(0));
  CHECK(s.table.beliefs[0].empty());
  CHECK(mi(s.table, s.problem) == rat(0));
  CHECK_THROWS_AS(marginal(s.table, s.problem, 0), UndefinedDistributionError);
  CHECK_THROWS_AS(moment(s.table, s.problem, 0, 1), UndefinedDistributionError);
}

TEST_CASE("forest: MI is the product over components") {
  Problem p = prepared(
      "(declare-real a) (declare-real b) (declare-real c)"
      "(assert (< 0 a)) (assert (< a 2))"
      "(assert (< 0 b)) (assert (< b 1)) (assert (< b a))"
      "(assert (< 0 c)) (assert (< c 3))");
  Solved s = solve_problem(p);
  // component {a,b}: area of 0<b<min(a,1), 0<a<2 = 1/2 + 1 = 3/2; times |c| = 3
  CHECK(mi(s.table, s.problem) == rat(9, 2));
  REQUIRE(s.table.component_mi.size() == 2);
  // every node's belief integrates to the global value (checked by mi()),
  // including the isolated variable
  Rational c_mi = integrate_against(s.problem, s.table.beliefs[2], 2,
                                    {&s.problem.node_formula(2)});
  CHECK(c_mi == rat(9, 2));
}

TEST_CASE("root invariance on the chain") {
  Problem p = load("fig1_chain.mi");
  PrimalGraph g = primal_graph(p);
  Rational reference;
  for (VarId r = 0; r < p.var_count(); ++r) {
    BeliefTable table = run(p, root_at(g, r));
    if (r == 0)
      reference = mi(table, p);
    else
      CHECK(mi(table, p) == reference);
  }
  CHECK(reference == rat(7, 6));
}

TEST_CASE("nonconforming bivariate query is rejected") {
  Problem p = load("fig1_chain.mi");
  Solved s = solve_problem(p);
  Query q = parse_query("(< x1 x3)", s.problem);
  CHECK_THROWS_AS(query_bivariate(s.table, s.problem, s.tree, 0, 2, q.clauses),
                  NonconformingQueryError);
}
