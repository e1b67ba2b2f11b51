// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "treemi/engine.hpp"
#include "treemi/parser.hpp"
#include "treemi/verify.hpp"

using namespace treemi;

TEST_CASE("subset_count enumerates") {
  CHECK(subset_count(SubsetInstance{{1, 2}, 3}) == 1);
  CHECK(subset_count(SubsetInstance{{1, 2, 3}, 3}) == 2);
  CHECK(subset_count(SubsetInstance{{5}, 1}) == 0);
  CHECK(subset_count(SubsetInstance{{1, 1, 1, 1}, 2}) == 6);
}

TEST_CASE("nested oracle on named problems") {
  Problem box = parse_problem("(declare-real x) (assert (< 0 x)) (assert (< x 1))");
  establish_support(box);
  CHECK(oracle_nested_mi(box) == rat(1));

  Problem simplex = parse_problem(
      "(declare-real x1) (declare-real x2)"
      "(assert (< 0 x1)) (assert (< x1 1)) (assert (< 0 x2)) (assert (< x2 1))"
      "(assert (< x2 x1))");
  establish_support(simplex);
  CHECK(oracle_nested_mi(simplex) == rat(1, 2));

  Problem big = gen_path(9, 0);
  establish_support(big);
  CHECK_THROWS_AS(oracle_nested_mi(big), std::invalid_argument);
}

TEST_CASE("engine matches the nested oracle on small random trees") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (int n = 2; n <= 6; ++n) {
      for (int family = 0; family < 3; ++family) {
        Problem p = family == 0   ? gen_path(n, seed)
                    : family == 1 ? gen_star(n, seed + 100)
                                  : gen_snow(n, seed + 200);
        establish_support(p);
        Rational expected = oracle_nested_mi(p);
        Solved s = solve_problem(p);
        CHECK(mi(s.table, s.problem) == expected);
        ++checked;
      }
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("subset chain: closed forms and the counting identity") {
  SUBCASE("S = {1,2}, L = 3") {
    ChainInstance inst = gen_subset_chain(SubsetInstance{{1, 2}, 3});
    Solved s = solve_problem(inst.problem);
    CHECK(mi(s.table, s.problem) == rat(1));  // 2^2 * (1/2)^2
    Rational prob = query_univariate(s.table, s.problem, s.tree, 1, inst.query.clauses);
    CHECK(prob * s.table.mi_value == rat(1, 4));  // 1 * (1/2)^2
  }
  SUBCASE("S = {1,2,3}, L = 3") {
    ChainInstance inst = gen_subset_chain(SubsetInstance{{1, 2, 3}, 3});
    Solved s = solve_problem(inst.problem);
    CHECK(mi(s.table, s.problem) == rat(8, 27));  // 2^3 * (1/3)^3
    Rational prob = query_univariate(s.table, s.problem, s.tree, 2, inst.query.clauses);
    CHECK(prob * s.table.mi_value == rat(2, 27));  // 2 * (1/3)^3
  }
  SUBCASE("identity n^n * MI(conj query) = subset count") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
      int n = 2 + static_cast<int>(rng.next() % 5);
      SubsetInstance inst;
      for (int i = 0; i < n; ++i) inst.s.push_back(1 + static_cast<long>(rng.next() % 9));
      long total = 0;
      for (long v : inst.s) total += v;
      inst.target = 1 + static_cast<long>(rng.next() % total);
      ChainInstance chain = gen_subset_chain(inst);
      Solved s = solve_problem(chain.problem);
      Rational nn(1);
      for (int i = 0; i < n; ++i) nn *= n;
      Rational constrained =
          query_univariate(s.table, s.problem, s.tree, n - 1, chain.query.clauses) *
          s.table.mi_value;
      CHECK(nn * constrained == Rational(subset_count(inst)));
    }
  }
}

TEST_CASE("subset tree construction") {
  Problem p = gen_subset_tree(SubsetInstance{{1, 2}, 3});
  CHECK(p.var_count() == 3);
  CHECK(!p.decomposed);
  Problem p4 = gen_subset_tree(SubsetInstance{{1, 2, 1, 2}, 3});
  CHECK(p4.var_count() == 7);
  CHECK_THROWS_AS(gen_subset_tree(SubsetInstance{{1, 2, 3}, 3}), std::invalid_argument);

  SUBCASE("monte carlo agrees with the closed form for n = 2") {
    establish_support(p);
    // MI = 2^n * (1/(2n))^(2n-1) = 4 / 4^3 = 1/16
    double truth = 1.0 / 16.0;
    McEstimate est = oracle_monte_carlo(p, 400000, 5);
    CHECK(std::abs(est.estimate - truth) <= 4 * est.std_error);
    CHECK(est.hits > 0);
  }
}

TEST_CASE("monte carlo basics") {
  Problem box = parse_problem("(declare-real x) (assert (< 0 x)) (assert (< x 1))");
  establish_support(box);
  McEstimate est = oracle_monte_carlo(box, 1000, 42);
  CHECK(est.estimate == 1.0);
  CHECK(est.std_error == 0.0);

  Problem simplex = parse_problem(
      "(declare-real x1) (declare-real x2)"
      "(assert (< 0 x1)) (assert (< x1 1)) (assert (< 0 x2)) (assert (< x2 1))"
      "(assert (< x2 x1))");
  establish_support(simplex);
  McEstimate e2 = oracle_monte_carlo(simplex, 1000000, 7);
  CHECK(std::abs(e2.estimate - 0.5) <= 3 * e2.std_error);

  Problem bad = parse_problem("(declare-real x) (assert (< x 0)) (assert (< 1 x))");
  establish_support(bad);
  McEstimate e3 = oracle_monte_carlo(bad, 1000, 1);
  CHECK(e3.estimate == 0.0);

  // determinism
  McEstimate a = oracle_monte_carlo(simplex, 10000, 99);
  McEstimate b = oracle_monte_carlo(simplex, 10000, 99);
  CHECK(a.hits == b.hits);
}

TEST_CASE("generators are deterministic and structurally right") {
  Problem a = gen_path(5, 0);
  Problem b = gen_path(5, 0);
  CHECK(pretty_print(a) == pretty_print(b));
  PrimalGraph g = primal_graph(a);
  CHECK(g.edges.size() == 4);
  for (int i = 0; i + 1 < 5; ++i) CHECK(g.has_edge(i, i + 1));

  Problem star = gen_star(10, 0);
  GraphStats ss = graph_stats(star, choose_root(primal_graph(star)));
  CHECK(ss.diameter == 2);

  Problem snow = gen_snow(13, 0);
  PrimalGraph gs = primal_graph(snow);
  CHECK(gs.edges.size() == 12);
  for (int i = 1; i < 13; ++i) CHECK(gs.has_edge((i - 1) / 3, i));

  CHECK(pretty_print(gen_snow(13, 0)) == pretty_print(snow));
  // different seeds give different instances (overwhelmingly)
  CHECK(pretty_print(gen_path(5, 1)) != pretty_print(gen_path(5, 2)));
}

TEST_CASE("generated instances have positive volume") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Problem p = gen_path(4, seed);
    establish_support(p);
    Solved s = solve_problem(p);
    CHECK(s.table.mi_value > 0);
  }
}

TEST_CASE("weighted nested oracle against hand integration") {
  // integral of x*y over the triangle 0<x<2, 0<y<2, x+y<2 is 2/3
  Problem tri = parse_problem(
      "(declare-real x) (declare-real y)"
      "(assert (< 0 x)) (assert (< x 2)) (assert (< 0 y)) (assert (< y 2))"
      "(assert (< (+ x y) 2))");
  establish_support(tri);
  CHECK(oracle_nested_weighted(tri, rat(1), {{0, 1}, {1, 1}}) == rat(2, 3));
  CHECK(oracle_nested_weighted(tri, rat(3), {}) == rat(6));  // 3 * area
}

TEST_CASE("weight reduction matches direct weighted integration") {
  // random monomial weights on the unit-clause domain literals of a box
  SplitMix64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    int nvars = 1 + static_cast<int>(rng.next() % 3);
    std::string text;
    for (int v = 0; v < nvars; ++v) {
      std::string name = "x" + std::to_string(v);
      text += "(declare-real " + name + ")";
      text += "(assert (< 0 " + name + "))";
      long hi = 1 + static_cast<long>(rng.next() % 3);
      text += "(assert (< " + name + " " + std::to_string(hi) + "))";
    }
    WmiProblem w = parse_wmi(text);
    std::vector<std::pair<VarId, int>> monomial;
    Rational coeff(1 + static_cast<long>(rng.next() % 5));
    for (int v = 0; v < nvars; ++v) {
      int e = static_cast<int>(rng.next() % 3);
      if (e > 0) monomial.emplace_back(v, e);
    }
    // attach the whole monomial to the lower-bound literal of x0 (a unit
    // clause), factor by factor
    WeightSpec ws;
    ws.literal = w.clauses[0].literals[0];
    ws.coefficient = coeff;
    ws.monomial = monomial;
    w.weights.push_back(ws);

    Problem direct = parse_problem(text);
    establish_support(direct);
    CHECK(wmi(w) == oracle_nested_weighted(direct, coeff, monomial));
  }
}
