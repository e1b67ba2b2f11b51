// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/wmi.hpp"

#include <algorithm>
#include <set>

#include "treemi/engine.hpp"
#include "treemi/graph.hpp"

namespace treemi {

namespace {

std::string fresh_name(std::string base, std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  taken.insert(base);
  return base;
}

Atom atom_var_gt(VarId v, const Rational& bound) {
  // bound < x_v   i.e.  -x_v + bound < 0
  Atom a;
  a.rel = Rel::LT;
  a.expr.constant = bound;
  a.expr.add_term(v, Rational(-1));
  return a;
}

Atom atom_var_lt(VarId v, const Rational& bound) {
  // x_v < bound
  Atom a;
  a.rel = Rel::LT;
  a.expr.constant = -bound;
  a.expr.add_term(v, Rational(1));
  return a;
}

Atom atom_var_lt_var(VarId v, VarId w) {
  // x_v < x_w
  Atom a;
  a.rel = Rel::LT;
  a.expr.add_term(v, Rational(1));
  a.expr.add_term(w, Rational(-1));
  return a;
}

}  // namespace

BoolElimResult eliminate_booleans(const WmiProblem& w) {
  BoolElimResult res;
  if (w.bool_vars.empty()) {
    res.problem = w;
    return res;
  }

  const int nb = static_cast<int>(w.bool_vars.size());
  std::vector<Rational> c_plus(nb, Rational(1)), c_minus(nb, Rational(1));
  std::vector<WeightSpec> real_weights;
  for (const auto& ws : w.weights) {
    if (std::holds_alternative<BoolLit>(ws.literal)) {
      if (!ws.monomial.empty())
        throw UnsupportedWeightError("non-constant weight on a Boolean literal");
      const auto& b = std::get<BoolLit>(ws.literal);
      (b.negated ? c_minus : c_plus)[b.bool_id] *= ws.coefficient;
    } else {
      real_weights.push_back(ws);
    }
  }

  std::set<std::string> taken(w.real_vars.begin(), w.real_vars.end());
  for (const auto& n : w.bool_vars) taken.insert(n);

  WmiProblem out;
  out.real_vars = w.real_vars;
  std::vector<VarId> z_of(nb);
  for (int b = 0; b < nb; ++b) {
    std::string name = fresh_name("z_" + w.bool_vars[b], taken);
    z_of[b] = static_cast<VarId>(out.real_vars.size());
    out.real_vars.push_back(name);
    res.origins.push_back(VarOrigin{
        name, "encodes Boolean " + w.bool_vars[b] + ": true on (0," +
                  to_string(c_plus[b]) + "), false on (-" + to_string(c_minus[b]) + ",0)"});
  }

  // Within the domain clause, Z_B > 0 is exactly the interval (0, c+) and
  // Z_B < 0 is (-c-, 0), so a Boolean literal maps to a single atom.
  for (const auto& clause : w.clauses) {
    WmiClause nc;
    for (const auto& lit : clause.literals) {
      if (std::holds_alternative<Atom>(lit)) {
        nc.literals.push_back(lit);
      } else {
        const auto& b = std::get<BoolLit>(lit);
        nc.literals.push_back(b.negated ? atom_var_lt(z_of[b.bool_id], Rational(0))
                                        : atom_var_gt(z_of[b.bool_id], Rational(0)));
      }
    }
    out.clauses.push_back(std::move(nc));
  }
  for (int b = 0; b < nb; ++b) {
    out.clauses.push_back(WmiClause{{atom_var_gt(z_of[b], -c_minus[b])}});
    out.clauses.push_back(WmiClause{{atom_var_lt(z_of[b], c_plus[b])}});
  }
  out.weights = std::move(real_weights);
  res.problem = std::move(out);
  return res;
}

ReduceResult reduce_weights(const WmiProblem& w) {
  if (!w.bool_vars.empty())
    throw std::logic_error("reduce_weights requires a Boolean-free problem");

  ReduceResult res;
  std::vector<std::string> vars = w.real_vars;
  std::set<std::string> taken(vars.begin(), vars.end());
  std::vector<Clause> clauses;
  for (const auto& wc : w.clauses) {
    Clause c;
    for (const auto& lit : wc.literals) c.literals.push_back(std::get<Atom>(lit));
    clauses.push_back(std::move(c));
  }

  auto is_unit_clause = [&](const Atom& lit) {
    for (const auto& c : clauses)
      if (c.literals.size() == 1 && c.literals[0] == lit) return true;
    return false;
  };

  auto add_var = [&](const std::string& base, const std::string& note) {
    std::string name = fresh_name(base, taken);
    VarId id = static_cast<VarId>(vars.size());
    vars.push_back(name);
    res.origins.push_back(VarOrigin{name, note});
    return id;
  };

  int aux_idx = 0;
  for (const auto& ws : w.weights) {
    const Atom& lit = std::get<Atom>(ws.literal);
    auto lit_vars = lit.vars();
    bool unit = is_unit_clause(lit);
    if (ws.coefficient == 1 && ws.monomial.empty()) continue;  // weight 1, no-op

    if (unit) {
      // The literal always holds, so the auxiliary ranges are unconditional.
      if (ws.coefficient != 1) {
        VarId z = add_var("z_c" + std::to_string(aux_idx++),
                          "constant factor " + to_string(ws.coefficient));
        clauses.push_back(Clause{{atom_var_gt(z, Rational(0))}});
        clauses.push_back(Clause{{atom_var_lt(z, ws.coefficient)}});
      }
      for (const auto& [v, e] : ws.monomial) {
        for (int rep = 0; rep < e; ++rep) {
          VarId z = add_var("z_" + w.real_vars[v] + "_" + std::to_string(aux_idx++),
                            "monomial factor " + w.real_vars[v]);
          clauses.push_back(Clause{{atom_var_gt(z, Rational(0))}});
          clauses.push_back(Clause{{atom_var_lt_var(z, v)}});
        }
      }
      continue;
    }

    // Guarded encoding: the auxiliary integrates to the factor where the
    // literal holds and to 1 elsewhere. Each clause may mention only the
    // literal's variable and the auxiliary, so the literal must be
    // univariate and the factor a constant or a variable of the literal.
    if (lit_vars.size() > 1)
      throw UnsupportedWeightError(
          "reduction would create a 3-clique: weighted literal over two variables "
          "is not a unit clause");
    Atom neg = lit.negated();
    auto add_guarded = [&](VarId z, const Atom& upper_when_true) {
      clauses.push_back(Clause{{atom_var_gt(z, Rational(0))}});
      clauses.push_back(Clause{{neg, upper_when_true}});
      clauses.push_back(Clause{{lit, atom_var_lt(z, Rational(1))}});
      // Implied by the two guarded clauses; stated explicitly so interval
      // propagation can bound z from a single clause.
      clauses.push_back(Clause{{upper_when_true, atom_var_lt(z, Rational(1))}});
    };
    if (ws.coefficient != 1) {
      VarId z = add_var("z_c" + std::to_string(aux_idx++),
                        "constant factor " + to_string(ws.coefficient) + " guarded by literal");
      add_guarded(z, atom_var_lt(z, ws.coefficient));
    }
    for (const auto& [v, e] : ws.monomial) {
      if (std::find(lit_vars.begin(), lit_vars.end(), v) == lit_vars.end())
        throw UnsupportedWeightError(
            "reduction would create a 3-clique: monomial variable " + w.real_vars[v] +
            " is not mentioned by its guarded literal");
      for (int rep = 0; rep < e; ++rep) {
        VarId z = add_var("z_" + w.real_vars[v] + "_" + std::to_string(aux_idx++),
                          "monomial factor " + w.real_vars[v] + " guarded by literal");
        add_guarded(z, atom_var_lt_var(z, v));
      }
    }
  }

  res.problem = Problem::from_clauses(std::move(vars), std::move(clauses));
  return res;
}

Rational wmi(const WmiProblem& w) {
  BoolElimResult be = eliminate_booleans(w);
  ReduceResult rr = reduce_weights(be.problem);
  Solved s = solve_problem(std::move(rr.problem));
  return mi(s.table, s.problem);
}

}  // namespace treemi
