// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <sstream>
#include <variant>

#include "treemi/formula.hpp"
#include "treemi/wmi.hpp"

namespace treemi {

namespace {

void print_expr(std::ostream& os, const LinearExpr& e,
                const std::vector<std::string>& names) {
  size_t terms = e.coeffs.size() + (e.constant != 0 ? 1 : 0);
  if (terms == 0) {
    os << "0";
    return;
  }
  if (terms > 1) os << "(+ ";
  bool first = true;
  for (const auto& [v, c] : e.coeffs) {
    if (!first) os << " ";
    first = false;
    if (c == 1)
      os << names[v];
    else
      os << "(* " << to_string(c) << " " << names[v] << ")";
  }
  if (e.constant != 0) {
    if (!first) os << " ";
    os << to_string(e.constant);
  }
  if (terms > 1) os << ")";
}

void print_atom(std::ostream& os, const Atom& a, const std::vector<std::string>& names) {
  os << (a.rel == Rel::LT ? "(< " : "(<= ");
  print_expr(os, a.expr, names);
  os << " 0)";
}

void print_clause_atoms(std::ostream& os, const std::vector<Atom>& lits,
                        const std::vector<std::string>& names) {
  if (lits.size() == 1) {
    print_atom(os, lits[0], names);
    return;
  }
  os << "(or";
  for (const auto& a : lits) {
    os << " ";
    print_atom(os, a, names);
  }
  os << ")";
}

}  // namespace

std::string pretty_print(const Problem& p) {
  std::ostringstream os;
  for (const auto& v : p.variables) os << "(declare-real " << v << ")\n";
  for (const auto& c : p.clauses) {
    os << "(assert ";
    print_clause_atoms(os, c.literals, p.variables);
    os << ")\n";
  }
  return os.str();
}

std::string pretty_print_wmi(const WmiProblem& w) {
  std::ostringstream os;
  for (const auto& v : w.real_vars) os << "(declare-real " << v << ")\n";
  for (const auto& v : w.bool_vars) os << "(declare-bool " << v << ")\n";
  auto print_lit = [&](const WmiLiteral& lit) {
    if (std::holds_alternative<BoolLit>(lit)) {
      const auto& b = std::get<BoolLit>(lit);
      if (b.negated) os << "(not " << w.bool_vars[b.bool_id] << ")";
      else os << w.bool_vars[b.bool_id];
    } else {
      print_atom(os, std::get<Atom>(lit), w.real_vars);
    }
  };
  for (const auto& c : w.clauses) {
    os << "(assert ";
    if (c.literals.size() == 1) {
      print_lit(c.literals[0]);
    } else {
      os << "(or";
      for (const auto& lit : c.literals) {
        os << " ";
        print_lit(lit);
      }
      os << ")";
    }
    os << ")\n";
  }
  for (const auto& ws : w.weights) {
    os << "(weight ";
    print_lit(ws.literal);
    os << " " << to_string(ws.coefficient);
    for (const auto& [v, e] : ws.monomial) {
      if (e == 1)
        os << " " << w.real_vars[v];
      else
        os << " (^ " << w.real_vars[v] << " " << e << ")";
    }
    os << ")\n";
  }
  return os.str();
}

}  // namespace treemi
