// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "treemi/json_io.hpp"
#include "treemi/parser.hpp"

using namespace treemi;

TEST_CASE("piecewise polynomial JSON round trip is bit-exact") {
  PiecewisePoly pw = PiecewisePoly::from_pieces(
      {Piece{rat(0), rat(1, 3), Polynomial({rat(1, 7), rat(-2)})},
       Piece{rat(1, 2), rat(161, 24), Polynomial({rat(0), rat(0), rat(5, 3)})}});
  nlohmann::json j = to_json(pw);
  CHECK(piecewise_from_json(j) == pw);
  CHECK(j[0]["lower"] == "0");
  CHECK(j[1]["upper"] == "161/24");
  CHECK(j[1]["coeffs"][2] == "5/3");
}

TEST_CASE("problem JSON carries rationals as p/q strings") {
  Problem p = parse_problem(
      "(declare-real x) (declare-real y)"
      "(assert (< 0 x)) (assert (< x 1/2)) (assert (< 0 y)) (assert (< y 1))"
      "(assert (<= (- (* 2 x) y) 1/3))");
  establish_support(p);
  nlohmann::json j = to_json(p);
  CHECK(j["variables"].size() == 2);
  CHECK(j["support"]["x"][1] == "1/2");
  bool found = false;
  for (const auto& cj : j["clauses"])
    for (const auto& aj : cj)
      if (aj["rel"] == "<=" && aj["coeffs"].contains("y")) found = true;
  CHECK(found);
}

TEST_CASE("belief table JSON round trip") {
  Problem p = parse_problem(
      "(declare-real x1) (declare-real x2)"
      "(assert (< 0 x1)) (assert (< x1 1)) (assert (< 0 x2)) (assert (< x2 1))"
      "(assert (< x2 x1))");
  Solved s = solve_problem(p);
  nlohmann::json j = to_json(s.table, s.problem);
  BeliefTable back = belief_table_from_json(j, s.problem);
  CHECK(back.mi_value == s.table.mi_value);
  CHECK(back.messages.size() == s.table.messages.size());
  for (const auto& [edge, value] : s.table.messages)
    CHECK(back.messages.at(edge) == value);
  for (VarId v = 0; v < s.problem.var_count(); ++v)
    CHECK(back.beliefs[v] == s.table.beliefs[v]);

  // queries from the deserialized table answer identically
  Query q = parse_query("(< x1 1/2)", s.problem);
  CHECK(query_univariate(back, s.problem, s.tree, 0, q.clauses) ==
        query_univariate(s.table, s.problem, s.tree, 0, q.clauses));
}

TEST_CASE("fingerprint distinguishes problems and roots") {
  Problem a = parse_problem("(declare-real x) (assert (< 0 x)) (assert (< x 1))");
  Problem b = parse_problem("(declare-real x) (assert (< 0 x)) (assert (< x 2))");
  CHECK(problem_fingerprint(a, 0) != problem_fingerprint(b, 0));
  CHECK(problem_fingerprint(a, 0) != problem_fingerprint(a, -1));
  CHECK(problem_fingerprint(a, 0) == problem_fingerprint(a, 0));
}
