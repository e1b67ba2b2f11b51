// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Structure-blind exact MI. The recursion keeps a set of pending
// (multi-literal) clauses, a conjunction of atoms, and a sparse multivariate
// polynomial integrand. Eliminating the last remaining variable expands the
// pending clauses that mention it, solves every atom for it, and sums over
// the cells "this lower bound is the largest, this upper bound is the
// smallest", pushing the ordering conditions outward as new atoms.
#include <algorithm>
#include <map>
#include <stdexcept>

#include "treemi/verify.hpp"

namespace treemi {

namespace {

// Sparse multivariate polynomial over the problem variables.
struct MPoly {
  int nvars = 0;
  std::map<std::vector<int>, Rational> terms;

  static MPoly constant(int nvars, const Rational& c) {
    MPoly p;
    p.nvars = nvars;
    if (c != 0) p.terms.emplace(std::vector<int>(nvars, 0), c);
    return p;
  }

  void add_term(const std::vector<int>& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  MPoly operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [e, c] : o.terms) r.add_term(e, c);
    return r;
  }

  MPoly operator-(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [e, c] : o.terms) r.add_term(e, -c);
    return r;
  }

  MPoly antiderivative(int v) const {
    MPoly r;
    r.nvars = nvars;
    for (const auto& [e, c] : terms) {
      std::vector<int> e2 = e;
      e2[v] += 1;
      r.add_term(e2, c / Rational(e2[v]));
    }
    return r;
  }

  // x_v := slope * x_other + intercept (other < 0 means a constant bound).
  MPoly subst_affine(int v, int other, const Rational& slope,
                     const Rational& intercept) const {
    MPoly r;
    r.nvars = nvars;
    for (const auto& [e, c] : terms) {
      int d = e[v];
      std::vector<int> base = e;
      base[v] = 0;
      if (d == 0) {
        r.add_term(base, c);
        continue;
      }
      // (slope*x_other + intercept)^d via binomial expansion.
      Rational binom(1);
      for (int k = 0; k <= d; ++k) {
        Rational coeff = c * binom;
        if (slope != 0 || k == 0) {
          Rational sk(1), td(1);
          for (int t = 0; t < k; ++t) sk *= slope;
          for (int t = 0; t < d - k; ++t) td *= intercept;
          Rational full = coeff * sk * td;
          if (full != 0) {
            std::vector<int> e2 = base;
            if (k > 0) e2[other] += k;
            r.add_term(e2, full);
          }
        }
        binom = binom * Rational(d - k) / Rational(k + 1);
      }
    }
    return r;
  }

  Rational constant_value() const {
    if (terms.empty()) return Rational(0);
    if (terms.size() != 1 || terms.begin()->first != std::vector<int>(nvars, 0))
      throw std::logic_error("nested oracle: non-constant residue");
    return terms.begin()->second;
  }
};

// A bound on the eliminated variable: slope * x_other + intercept.
struct Bound {
  int other;  // -1 for constant
  Rational slope, intercept;
  bool operator==(const Bound& o) const {
    return other == o.other && slope == o.slope && intercept == o.intercept;
  }
};

struct Cell {
  std::vector<Clause> pending;  // multi-literal clauses not yet expanded
  std::vector<Atom> conj;       // unit conjuncts
};

struct NestedOracle {
  const Problem& p;
  int n;
  Rational total{0};

  explicit NestedOracle(const Problem& prob) : p(prob), n(prob.var_count()) {}

  // Cheap interval check against the support box: false means the atom is
  // definitely unsatisfiable there, so the branch can be pruned.
  bool atom_possible(const Atom& a) const {
    Rational mn = a.expr.constant;
    for (const auto& [v, c] : a.expr.coeffs)
      mn += c * (c > 0 ? p.support[v].lo : p.support[v].hi);
    return a.rel == Rel::LT ? mn < 0 : mn <= 0;
  }

  void recurse(Cell cell, int next_var, const MPoly& integrand) {
    if (next_var < 0) {
      // Only constant atoms may remain.
      for (const auto& a : cell.conj) {
        if (!a.expr.coeffs.empty())
          throw std::logic_error("nested oracle: leftover variable atom");
        bool ok = a.rel == Rel::LT ? a.expr.constant < 0 : a.expr.constant <= 0;
        if (!ok) return;
      }
      total += integrand.constant_value();
      return;
    }

    // Expand pending clauses that mention the variable being eliminated;
    // branch b asserts literal b and the negations of literals before it.
    for (size_t ci = 0; ci < cell.pending.size(); ++ci) {
      if (cell.pending[ci].literals.size() == 1) {
        cell.conj.push_back(cell.pending[ci].literals[0]);
        cell.pending.erase(cell.pending.begin() + ci);
        --ci;
        continue;
      }
      bool mentions = false;
      for (const auto& a : cell.pending[ci].literals)
        if (a.coeff(next_var) != 0) mentions = true;
      if (!mentions) continue;
      Clause k = cell.pending[ci];
      cell.pending.erase(cell.pending.begin() + ci);
      for (size_t b = 0; b < k.literals.size(); ++b) {
        Cell branch = cell;
        bool feasible = atom_possible(k.literals[b]);
        for (size_t q = 0; q < b && feasible; ++q) {
          Atom neg = k.literals[q].negated();
          if (!atom_possible(neg)) feasible = false;
          branch.conj.push_back(std::move(neg));
        }
        if (!feasible) continue;
        branch.conj.push_back(k.literals[b]);
        recurse(std::move(branch), next_var, integrand);
      }
      return;
    }

    eliminate(std::move(cell), next_var, integrand);
  }

  void eliminate(Cell cell, int v, const MPoly& integrand) {
    std::vector<Bound> lowers, uppers;
    std::vector<Atom> outer;
    for (const auto& a : cell.conj) {
      Rational cv = a.coeff(v);
      if (cv == 0) {
        outer.push_back(a);
        continue;
      }
      // cv*x_v + rest rel 0 with rest over at most one other variable.
      Bound b;
      b.other = -1;
      b.slope = 0;
      b.intercept = -a.expr.constant / cv;
      for (const auto& [w, c] : a.expr.coeffs) {
        if (w == v) continue;
        if (b.other != -1) throw std::logic_error("nested oracle: atom over 3 variables");
        b.other = w;
        b.slope = -c / cv;
      }
      (cv > 0 ? uppers : lowers).push_back(b);
    }
    auto dedupe = [](std::vector<Bound>& bs) {
      std::vector<Bound> out;
      for (const auto& b : bs)
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
      bs = std::move(out);
    };
    dedupe(lowers);
    dedupe(uppers);
    if (lowers.empty() || uppers.empty())
      throw std::logic_error("nested oracle: variable without box bounds");

    MPoly F = integrand.antiderivative(v);
    for (const auto& lo : lowers) {
      for (const auto& up : uppers) {
        Cell next;
        next.pending = cell.pending;
        next.conj = outer;
        bool feasible = true;
        // lo is the largest lower bound, up the smallest upper, lo < up.
        auto order_atom = [&](const Bound& a, const Bound& b) {
          // a - b < 0
          Atom atom;
          atom.rel = Rel::LT;
          atom.expr.constant = a.intercept - b.intercept;
          if (a.other >= 0) atom.expr.add_term(a.other, a.slope);
          if (b.other >= 0) atom.expr.add_term(b.other, -b.slope);
          return atom;
        };
        for (const auto& lo2 : lowers) {
          if (lo2 == lo) continue;
          Atom cond = order_atom(lo2, lo);
          if (!atom_possible(cond)) feasible = false;
          next.conj.push_back(std::move(cond));
        }
        for (const auto& up2 : uppers) {
          if (up2 == up) continue;
          Atom cond = order_atom(up, up2);
          if (!atom_possible(cond)) feasible = false;
          next.conj.push_back(std::move(cond));
        }
        Atom lu = order_atom(lo, up);
        if (!atom_possible(lu)) feasible = false;
        next.conj.push_back(std::move(lu));
        if (!feasible) continue;
        MPoly piece = F.subst_affine(v, up.other, up.slope, up.intercept) -
                      F.subst_affine(v, lo.other, lo.slope, lo.intercept);
        recurse(std::move(next), v - 1, piece);
      }
    }
  }
};

Rational run_nested(const Problem& p, const MPoly& initial) {
  if (!p.support_ok) throw std::logic_error("nested oracle requires supports");
  if (p.var_count() > 8)
    throw std::invalid_argument("nested oracle refuses more than 8 variables");
  if (p.infeasible) return Rational(0);

  Cell root;
  for (const auto& c : p.clauses) {
    if (c.literals.size() == 1)
      root.conj.push_back(c.literals[0]);
    else
      root.pending.push_back(c);
  }
  // Support box atoms guarantee both bound directions for every variable.
  for (VarId v = 0; v < p.var_count(); ++v) {
    Atom lo, hi;
    lo.rel = Rel::LT;
    lo.expr.constant = p.support[v].lo;
    lo.expr.add_term(v, Rational(-1));
    hi.rel = Rel::LT;
    hi.expr.constant = -p.support[v].hi;
    hi.expr.add_term(v, Rational(1));
    root.conj.push_back(lo);
    root.conj.push_back(hi);
  }

  NestedOracle oracle(p);
  oracle.recurse(std::move(root), p.var_count() - 1, initial);
  return oracle.total;
}

}  // namespace

Rational oracle_nested_mi(const Problem& p) {
  return run_nested(p, MPoly::constant(p.var_count(), Rational(1)));
}

Rational oracle_nested_weighted(const Problem& p, const Rational& coefficient,
                                const std::vector<std::pair<VarId, int>>& monomial) {
  MPoly init;
  init.nvars = p.var_count();
  std::vector<int> e(p.var_count(), 0);
  for (const auto& [v, d] : monomial) e[v] += d;
  init.add_term(e, coefficient);
  return run_nested(p, init);
}

}  // namespace treemi
