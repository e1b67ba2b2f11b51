// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>
#include <variant>

#include "treemi/engine.hpp"
#include "treemi/verify.hpp"

namespace treemi {

namespace {

Atom atom_between_lo(VarId v, const Rational& lo) {
  Atom a;  // lo < x_v
  a.rel = Rel::LT;
  a.expr.constant = lo;
  a.expr.add_term(v, Rational(-1));
  return a;
}

Atom atom_between_hi(VarId v, const Rational& hi) {
  Atom a;  // x_v < hi
  a.rel = Rel::LT;
  a.expr.constant = -hi;
  a.expr.add_term(v, Rational(1));
  return a;
}

// Random instance over the given tree edges; regenerates until a sampling
// probe certifies a satisfying region.
Problem gen_tree_family(int n, std::uint64_t seed,
                        const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw std::invalid_argument("generator needs n >= 1");
  SplitMix64 rng(seed);
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));

  for (int attempt = 0; attempt < 400; ++attempt) {
    std::vector<Clause> clauses;
    std::vector<double> lo(n), hi(n);
    for (int v = 0; v < n; ++v) {
      long a = rng.next_in(-3, 2);
      long w = rng.next_in(1, 4);
      lo[v] = static_cast<double>(a);
      hi[v] = static_cast<double>(a + w);
      clauses.push_back(Clause{{atom_between_lo(v, Rational(a))}});
      clauses.push_back(Clause{{atom_between_hi(v, Rational(a + w))}});
    }
    for (const auto& [i, j] : edges) {
      long nclauses = rng.next_in(1, 2);
      for (long ci = 0; ci < nclauses; ++ci) {
        Clause c;
        long natoms = rng.next_in(1, 2);
        for (long ai = 0; ai < natoms; ++ai) {
          long cc = rng.next_in(0, 3);
          long dd = rng.next_in(0, 3);
          static const long kCoef[4] = {-2, -1, 1, 2};
          long e = rng.next_in(-3, 3);
          Atom a;
          a.rel = Rel::LT;
          a.expr.add_term(i, Rational(kCoef[cc]));
          a.expr.add_term(j, Rational(kCoef[dd]));
          a.expr.constant = Rational(-e);
          c.literals.push_back(std::move(a));
        }
        clauses.push_back(std::move(c));
      }
    }

    // Probe: one strictly satisfying sample proves a positive-volume region.
    bool feasible = false;
    std::vector<double> x(n);
    for (int s = 0; s < 40000 && !feasible; ++s) {
      for (int v = 0; v < n; ++v) x[v] = lo[v] + rng.next_double() * (hi[v] - lo[v]);
      bool ok = true;
      for (const auto& c : clauses) {
        bool sat = false;
        for (const auto& a : c.literals) {
          double val = to_double(a.expr.constant);
          for (const auto& [v, coef] : a.expr.coeffs) val += to_double(coef) * x[v];
          if (val < 0) {
            sat = true;
            break;
          }
        }
        if (!sat) {
          ok = false;
          break;
        }
      }
      if (ok) feasible = true;
    }
    if (feasible) return Problem::from_clauses(names, std::move(clauses));
  }
  throw std::runtime_error("generator could not find a satisfiable instance");
}

}  // namespace

Problem gen_path(int n, std::uint64_t seed) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return gen_tree_family(n, seed, edges);
}

Problem gen_star(int n, std::uint64_t seed) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return gen_tree_family(n, seed, edges);
}

Problem gen_snow(int n, std::uint64_t seed) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back((i - 1) / 3, i);
  return gen_tree_family(n, seed, edges);
}

long subset_count(const SubsetInstance& inst) {
  const int n = static_cast<int>(inst.s.size());
  if (n > 20) throw std::invalid_argument("subset_count refuses n > 20");
  long count = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    long sum = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1ULL << i)) sum += inst.s[i];
    if (sum == inst.target) ++count;
  }
  return count;
}

ChainInstance gen_subset_chain(const SubsetInstance& inst) {
  const int n = static_cast<int>(inst.s.size());
  if (n < 1) throw std::invalid_argument("chain instance needs n >= 1");
  Rational tol = Rational(1) / Rational(2 * n);

  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<Clause> clauses;

  // Clause i offers X_i in (prev + s_i -+ tol) or (prev -+ tol); the
  // disjunction of two conjunctions is written as its four CNF clauses.
  for (int i = 0; i < n; ++i) {
    // Step branch atoms: a = lower, b = upper; zero branch atoms: c, d.
    Rational step(inst.s[i]);
    auto lower_atom = [&](const Rational& offset) {
      // prev + offset < X_i  i.e.  prev + offset - X_i < 0
      Atom a;
      a.rel = Rel::LT;
      a.expr.constant = offset;
      if (i > 0) a.expr.add_term(i - 1, Rational(1));
      a.expr.add_term(i, Rational(-1));
      return a;
    };
    auto upper_atom = [&](const Rational& offset) {
      // X_i < prev + offset
      Atom a;
      a.rel = Rel::LT;
      a.expr.constant = -offset;
      if (i > 0) a.expr.add_term(i - 1, Rational(-1));
      a.expr.add_term(i, Rational(1));
      return a;
    };
    Atom a = lower_atom(step - tol);
    Atom b = upper_atom(step + tol);
    Atom c = lower_atom(-tol);
    Atom d = upper_atom(tol);
    clauses.push_back(Clause{{a, c}});
    clauses.push_back(Clause{{a, d}});
    clauses.push_back(Clause{{b, c}});
    clauses.push_back(Clause{{b, d}});
  }

  ChainInstance out;
  out.problem = Problem::from_clauses(std::move(names), std::move(clauses));
  Rational half(1, 2);
  Rational l = Rational(inst.target) - half, u = Rational(inst.target) + half;
  Query q;
  q.clauses.push_back(Clause{{atom_between_lo(n - 1, l)}});
  q.clauses.push_back(Clause{{atom_between_hi(n - 1, u)}});
  q.vars = {n - 1};
  out.query = std::move(q);
  return out;
}

Problem gen_subset_tree(const SubsetInstance& inst) {
  const int n = static_cast<int>(inst.s.size());
  int k = 0;
  while ((1 << k) < n) ++k;
  if ((1 << k) != n || n < 2)
    throw std::invalid_argument("subset tree needs n a power of two, n >= 2");
  Rational tol = Rational(1) / Rational(4 * n);

  // Levels j = 1..k+1 with 2^(j-1) nodes; node (j, i) at index.
  std::vector<std::string> names;
  std::vector<std::vector<int>> id(k + 2);
  for (int j = 1; j <= k + 1; ++j) {
    id[j].resize(1 << (j - 1));
    for (int i = 1; i <= (1 << (j - 1)); ++i) {
      id[j][i - 1] = static_cast<int>(names.size());
      names.push_back("x" + std::to_string(j) + "_" + std::to_string(i));
    }
  }

  std::vector<Clause> clauses;
  // Leaves pick 0 or s_i within the tolerance band (CNF of the two bands).
  for (int i = 0; i < n; ++i) {
    VarId v = id[k + 1][i];
    Atom a = atom_between_lo(v, Rational(inst.s[i]) - tol);
    Atom b = atom_between_hi(v, Rational(inst.s[i]) + tol);
    Atom c = atom_between_lo(v, -tol);
    Atom d = atom_between_hi(v, tol);
    clauses.push_back(Clause{{a, c}});
    clauses.push_back(Clause{{a, d}});
    clauses.push_back(Clause{{b, c}});
    clauses.push_back(Clause{{b, d}});
  }
  // Internal nodes pin the sum of their two children: two atoms over three
  // variables each, which is exactly the triangle that breaks treeness.
  for (int j = 1; j <= k; ++j) {
    for (int i = 1; i <= (1 << (j - 1)); ++i) {
      VarId parent = id[j][i - 1];
      VarId c1 = id[j + 1][2 * i - 2], c2 = id[j + 1][2 * i - 1];
      Atom lo;  // c1 + c2 - tol < parent
      lo.rel = Rel::LT;
      lo.expr.constant = -tol;
      lo.expr.add_term(c1, Rational(1));
      lo.expr.add_term(c2, Rational(1));
      lo.expr.add_term(parent, Rational(-1));
      Atom hi;  // parent < c1 + c2 + tol
      hi.rel = Rel::LT;
      hi.expr.constant = -tol;
      hi.expr.add_term(c1, Rational(-1));
      hi.expr.add_term(c2, Rational(-1));
      hi.expr.add_term(parent, Rational(1));
      clauses.push_back(Clause{{lo}});
      clauses.push_back(Clause{{hi}});
    }
  }
  return Problem::from_clauses(std::move(names), std::move(clauses),
                               /*allow_wide_clauses=*/true);
}

Rational wmi_boolean_brute_force(const WmiProblem& w) {
  const int nb = static_cast<int>(w.bool_vars.size());
  if (nb > 20) throw std::invalid_argument("brute force refuses more than 20 Booleans");

  Rational total(0);
  for (std::uint64_t mask = 0; mask < (1ULL << nb); ++mask) {
    auto bool_value = [&](int b) { return (mask & (1ULL << b)) != 0; };
    // Simplify clauses under the assignment.
    std::vector<WmiClause> simplified;
    bool infeasible = false;
    for (const auto& c : w.clauses) {
      WmiClause nc;
      bool sat = false;
      for (const auto& lit : c.literals) {
        if (std::holds_alternative<BoolLit>(lit)) {
          const auto& bl = std::get<BoolLit>(lit);
          if (bool_value(bl.bool_id) != bl.negated) sat = true;
        } else {
          nc.literals.push_back(lit);
        }
      }
      if (sat) continue;
      if (nc.literals.empty()) {
        infeasible = true;
        break;
      }
      simplified.push_back(std::move(nc));
    }
    if (infeasible) continue;

    Rational bool_weight(1);
    WmiProblem real_only;
    real_only.real_vars = w.real_vars;
    real_only.clauses = std::move(simplified);
    for (const auto& ws : w.weights) {
      if (std::holds_alternative<BoolLit>(ws.literal)) {
        const auto& bl = std::get<BoolLit>(ws.literal);
        if (bool_value(bl.bool_id) != bl.negated) bool_weight *= ws.coefficient;
      } else {
        real_only.weights.push_back(ws);
      }
    }
    total += bool_weight * wmi(real_only);
  }
  return total;
}

}  // namespace treemi
