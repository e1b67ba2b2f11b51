// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Randomized invariants, all with fixed seeds.
#include <doctest.h>

#include "treemi/engine.hpp"
#include "treemi/parser.hpp"
#include "treemi/verify.hpp"

using namespace treemi;

namespace {

Rational random_rational(SplitMix64& rng, long span = 50) {
  long num = static_cast<long>(rng.next() % (2 * span + 1)) - span;
  long den = 1 + static_cast<long>(rng.next() % 10);
  return rat(num, den);
}

Polynomial random_poly(SplitMix64& rng, int max_degree) {
  std::vector<Rational> c;
  int d = static_cast<int>(rng.next() % (max_degree + 1));
  for (int i = 0; i <= d; ++i) c.push_back(random_rational(rng, 6));
  return Polynomial(std::move(c));
}

PiecewisePoly random_piecewise(SplitMix64& rng) {
  std::vector<Rational> cuts;
  int k = 2 + static_cast<int>(rng.next() % 4);
  for (int i = 0; i < k; ++i) cuts.push_back(random_rational(rng, 8));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> pieces;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (rng.next() % 4 == 0) continue;  // leave gaps
    pieces.push_back(Piece{cuts[i], cuts[i + 1], random_poly(rng, 3)});
  }
  return PiecewisePoly::from_pieces(std::move(pieces));
}

Problem generated(int which, int n, std::uint64_t seed) {
  Problem p = which == 0 ? gen_path(n, seed) : which == 1 ? gen_star(n, seed) : gen_snow(n, seed);
  establish_support(p);
  return p;
}

}  // namespace

TEST_CASE("pw_multiply is commutative, associative and pointwise correct") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    PiecewisePoly a = random_piecewise(rng);
    PiecewisePoly b = random_piecewise(rng);
    PiecewisePoly c = random_piecewise(rng);
    CHECK(pw_multiply(a, b) == pw_multiply(b, a));
    CHECK(pw_multiply(pw_multiply(a, b), c) == pw_multiply(a, pw_multiply(b, c)));
    PiecewisePoly ab = pw_multiply(a, b);
    for (int s = 0; s < 10; ++s) {
      Rational x = random_rational(rng, 9);
      // away from breakpoints the product is pointwise
      bool on_break = false;
      for (const Rational& bp : ab.breakpoints())
        if (bp == x) on_break = true;
      for (const Rational& bp : a.breakpoints())
        if (bp == x) on_break = true;
      for (const Rational& bp : b.breakpoints())
        if (bp == x) on_break = true;
      if (!on_break) CHECK(ab.eval(x) == a.eval(x) * b.eval(x));
    }
  }
}

TEST_CASE("canonicalization is idempotent") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    PiecewisePoly a = random_piecewise(rng);
    std::vector<Piece> copy = a.pieces();
    CHECK(PiecewisePoly::from_pieces(copy) == a);
  }
}

TEST_CASE("integration is additive over splits") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    PiecewisePoly a = random_piecewise(rng);
    Rational l = random_rational(rng, 10), u = random_rational(rng, 10);
    if (u < l) std::swap(l, u);
    Rational m = l + (u - l) * rat(1 + static_cast<long>(rng.next() % 7), 8);
    CHECK(a.integrate(l, u) == a.integrate(l, m) + a.integrate(m, u));
  }
}

TEST_CASE("symbolic integration specializes to numeric integration") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    Polynomial p = random_poly(rng, 4);
    AffineExpr lower(random_rational(rng, 3), random_rational(rng, 5));
    AffineExpr upper(random_rational(rng, 3), random_rational(rng, 5));
    Polynomial symbolic = pw_integrate_symbolic(p, lower, upper);
    for (int s = 0; s < 5; ++s) {
      Rational y = random_rational(rng, 5);
      Rational a = lower.eval(y), b = upper.eval(y);
      Polynomial F = p.antiderivative();
      CHECK(symbolic.eval(y) == F.eval(b) - F.eval(a));
    }
  }
}

TEST_CASE("product of nonnegative piecewise polys stays nonnegative at samples") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    // squares are nonnegative everywhere
    PiecewisePoly a = random_piecewise(rng);
    PiecewisePoly b = random_piecewise(rng);
    PiecewisePoly a2 = pw_multiply(a, a), b2 = pw_multiply(b, b);
    PiecewisePoly prod = pw_multiply(a2, b2);
    for (int s = 0; s < 20; ++s) {
      Rational x = random_rational(rng, 9);
      CHECK(prod.eval(x) >= 0);
    }
  }
}

TEST_CASE("support soundness: satisfying samples fall inside every interval") {
  SplitMix64 rng(31337);
  for (int which = 0; which < 3; ++which) {
    Problem p = generated(which, 5, 17 + which);
    // wide box from the unit clauses only
    int n = p.var_count();
    std::vector<Rational> lo(n, Rational(0)), hi(n, Rational(0));
    for (VarId v = 0; v < n; ++v) {
      bool has_lo = false, has_hi = false;
      for (const auto& c : p.node_formulas[v])
        for (const auto& a : c.literals) {
          Rational cv = a.coeff(v);
          Rational root = -a.expr.constant / cv;
          if (cv < 0 && (!has_lo || root < lo[v])) { lo[v] = root; has_lo = true; }
          if (cv > 0 && (!has_hi || root > hi[v])) { hi[v] = root; has_hi = true; }
        }
      REQUIRE(has_lo);
      REQUIRE(has_hi);
    }
    int satisfying = 0;
    for (int s = 0; s < 10000; ++s) {
      std::vector<Rational> point(n);
      for (int v = 0; v < n; ++v)
        point[v] = lo[v] + (hi[v] - lo[v]) * rat(static_cast<long>(rng.next() % 1001), 1000);
      bool sat = true;
      for (const auto& c : p.clauses)
        if (!c.satisfied(point)) {
          sat = false;
          break;
        }
      if (!sat) continue;
      ++satisfying;
      for (int v = 0; v < n; ++v) {
        CHECK(point[v] >= p.support[v].lo);
        CHECK(point[v] <= p.support[v].hi);
      }
    }
    CHECK(satisfying > 0);
  }
}

TEST_CASE("messages are nonnegative at sampled rational points") {
  SplitMix64 rng(8);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Problem p = generated(static_cast<int>(seed % 3), 5, 23 + seed);
    Solved s = solve_problem(p);
    for (const auto& [edge, msg] : s.table.messages) {
      for (int k = 0; k < 30; ++k) {
        const Interval& sup = s.problem.support[edge.second];
        Rational x = sup.lo + (sup.hi - sup.lo) * rat(static_cast<long>(rng.next() % 997), 996);
        CHECK(msg.eval(x) >= 0);
      }
    }
  }
}

TEST_CASE("amortized queries equal from-scratch constrained runs") {
  SplitMix64 rng(404);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Problem p = generated(static_cast<int>(seed % 3), 5, 31 + seed);
    Solved s = solve_problem(p);
    Rational base_mi = s.table.mi_value;
    REQUIRE(base_mi > 0);

    for (int trial = 0; trial < 10; ++trial) {
      VarId i = static_cast<VarId>(rng.next() % p.var_count());
      const Interval& sup = s.problem.support[i];
      Rational a = sup.lo + (sup.hi - sup.lo) * rat(static_cast<long>(rng.next() % 100), 101);
      Rational b = sup.lo + (sup.hi - sup.lo) * rat(static_cast<long>(rng.next() % 100), 101);
      if (b < a) std::swap(a, b);
      Clause lower{{Atom{}}}, upper{{Atom{}}};
      lower.literals[0].rel = Rel::LT;
      lower.literals[0].expr.constant = a;
      lower.literals[0].expr.add_term(i, rat(-1));
      upper.literals[0].rel = Rel::LT;
      upper.literals[0].expr.constant = -b;
      upper.literals[0].expr.add_term(i, rat(1));
      std::vector<Clause> phi{lower, upper};

      Rational amortized = query_univariate(s.table, s.problem, s.tree, i, phi);
      Problem constrained = s.problem.conjoin(phi);
      constrained.support_ok = false;
      Solved cs = solve_problem(constrained);
      CHECK(amortized == cs.table.mi_value / base_mi);
    }

    // one bivariate edge-conforming query per problem
    if (!s.problem.edge_formulas.empty()) {
      auto edge = s.problem.edge_formulas.begin()->first;
      Clause c{{Atom{}}};
      c.literals[0].rel = Rel::LT;
      c.literals[0].expr.add_term(edge.first, rat(1));
      c.literals[0].expr.add_term(edge.second, rat(-1));
      c.literals[0].expr.constant = random_rational(rng, 2);
      std::vector<Clause> phi{c};
      Rational amortized =
          query_bivariate(s.table, s.problem, s.tree, edge.first, edge.second, phi);
      Problem constrained = s.problem.conjoin(phi);
      constrained.support_ok = false;
      Solved cs = solve_problem(constrained);
      CHECK(amortized == cs.table.mi_value / base_mi);
    }
  }
}

TEST_CASE("marginals normalize to one on generated problems") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Problem p = generated(static_cast<int>(seed % 3), 4, 47 + seed);
    Solved s = solve_problem(p);
    if (s.table.mi_value == 0) continue;
    for (VarId v = 0; v < p.var_count(); ++v)
      CHECK(marginal(s.table, s.problem, v).integrate_all() == rat(1));
  }
}
