// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/formula.hpp"

#include <algorithm>
#include <set>

namespace treemi {

void LinearExpr::add_term(VarId v, const Rational& c) {
  if (c == 0) return;
  auto it = coeffs.find(v);
  if (it == coeffs.end()) {
    coeffs.emplace(v, c);
  } else {
    it->second += c;
    if (it->second == 0) coeffs.erase(it);
  }
}

LinearExpr LinearExpr::operator-() const {
  LinearExpr r;
  r.constant = -constant;
  for (const auto& [v, c] : coeffs) r.coeffs.emplace(v, -c);
  return r;
}

LinearExpr LinearExpr::operator-(const LinearExpr& o) const { return *this + (-o); }

LinearExpr LinearExpr::operator+(const LinearExpr& o) const {
  LinearExpr r = *this;
  r.constant += o.constant;
  for (const auto& [v, c] : o.coeffs) r.add_term(v, c);
  return r;
}

Rational LinearExpr::eval(const std::vector<Rational>& point) const {
  Rational acc = constant;
  for (const auto& [v, c] : coeffs) acc += c * point.at(v);
  return acc;
}

std::vector<VarId> LinearExpr::vars() const {
  std::vector<VarId> v;
  v.reserve(coeffs.size());
  for (const auto& [id, c] : coeffs) v.push_back(id);
  return v;
}

Atom Atom::negated() const {
  Atom a;
  a.expr = -expr;
  a.rel = (rel == Rel::LT) ? Rel::LE : Rel::LT;
  return a;
}

bool Atom::satisfied(const std::vector<Rational>& point) const {
  Rational v = expr.eval(point);
  return rel == Rel::LT ? v < 0 : v <= 0;
}

Rational Atom::coeff(VarId v) const {
  auto it = expr.coeffs.find(v);
  return it == expr.coeffs.end() ? Rational(0) : it->second;
}

std::vector<VarId> Clause::vars() const {
  std::set<VarId> s;
  for (const auto& a : literals)
    for (VarId v : a.vars()) s.insert(v);
  return std::vector<VarId>(s.begin(), s.end());
}

bool Clause::satisfied(const std::vector<Rational>& point) const {
  for (const auto& a : literals)
    if (a.satisfied(point)) return true;
  return false;
}

VarId Problem::var_id(const std::string& name) const {
  for (size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return static_cast<VarId>(i);
  return -1;
}

const std::vector<Clause>* Problem::edge_formula(VarId i, VarId j) const {
  auto key = std::minmax(i, j);
  auto it = edge_formulas.find({key.first, key.second});
  return it == edge_formulas.end() ? nullptr : &it->second;
}

namespace {

// Truth value of a variable-free atom.
bool constant_atom_true(const Atom& a) {
  return a.rel == Rel::LT ? a.expr.constant < 0 : a.expr.constant <= 0;
}

}  // namespace

Problem Problem::from_clauses(std::vector<std::string> vars, std::vector<Clause> cls,
                              bool allow_wide_clauses) {
  Problem p;
  p.variables = std::move(vars);

  // Fold constant literals away so the decomposition only sees clauses
  // that genuinely mention variables.
  for (auto& c : cls) {
    Clause kept;
    bool tautology = false;
    for (auto& a : c.literals) {
      if (a.vars().empty()) {
        if (constant_atom_true(a)) {
          tautology = true;
          break;
        }
        continue;  // false literal, drop
      }
      kept.literals.push_back(std::move(a));
    }
    if (tautology) continue;
    if (kept.literals.empty()) {
      p.trivially_false = true;
      continue;
    }
    p.clauses.push_back(std::move(kept));
  }

  p.node_formulas.assign(p.variables.size(), {});
  bool wide = false;
  for (const auto& c : p.clauses) {
    if (c.vars().size() > 2) {
      if (!allow_wide_clauses)
        throw NonTreeError("non-tree clause: primal graph would contain a clique");
      wide = true;
    }
  }
  if (wide) {
    p.decomposed = false;
    p.node_formulas.clear();
    return p;
  }
  for (const auto& c : p.clauses) {
    auto vs = c.vars();
    if (vs.size() == 1) {
      p.node_formulas[vs[0]].push_back(c);
    } else {
      auto key = std::minmax(vs[0], vs[1]);
      p.edge_formulas[{key.first, key.second}].push_back(c);
    }
  }
  p.decomposed = true;
  return p;
}

Problem Problem::conjoin(const std::vector<Clause>& extra) const {
  std::vector<Clause> cls = clauses;
  cls.insert(cls.end(), extra.begin(), extra.end());
  return from_clauses(variables, std::move(cls), !decomposed);
}

}  // namespace treemi
