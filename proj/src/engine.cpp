// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace treemi {

namespace {

// Neighbors of i in the primal forest, via the pseudo tree.
std::vector<VarId> tree_neighbors(const PseudoTree& t, VarId i) {
  std::vector<VarId> nb = t.children[i];
  if (t.parent[i] >= 0) nb.push_back(t.parent[i]);
  std::sort(nb.begin(), nb.end());
  return nb;
}

PiecewisePoly constant_one_on_support(const Problem& p, VarId i) {
  const Interval& s = p.support[i];
  return PiecewisePoly::constant(s.lo, s.hi, Rational(1));
}

// Product of cached messages into i, excluding the one from `exclude`
// (pass -1 to keep all). Constant 1 on the support when nothing comes in.
PiecewisePoly incoming_product(const Problem& p, const PseudoTree& t,
                               const BeliefTable& table, VarId i, VarId exclude) {
  PiecewisePoly acc;
  bool any = false;
  for (VarId c : tree_neighbors(t, i)) {
    if (c == exclude) continue;
    auto it = table.messages.find({c, i});
    if (it == table.messages.end())
      throw std::logic_error("message " + std::to_string(c) + "->" + std::to_string(i) +
                             " requested before it was computed");
    acc = any ? pw_multiply(acc, it->second) : it->second;
    any = true;
  }
  if (!any) return constant_one_on_support(p, i);
  return acc;
}

struct Line {
  // ci * x_src + cj * x_dst + c0 relation 0, ci != 0, cj != 0
  Rational ci, cj, c0;
};

}  // namespace

std::vector<Rational> critical_points(const Problem& p, VarId src, VarId dst,
                                      const PiecewisePoly& base,
                                      const std::vector<Clause>& node_clauses,
                                      const std::vector<Clause>& edge_clauses) {
  const Interval& sj = p.support[dst];
  std::set<Rational> pts{sj.lo, sj.hi};

  // Source breakpoints: base pieces plus roots of source-only atoms.
  std::set<Rational> betas;
  for (const Rational& b : base.breakpoints()) betas.insert(b);
  auto add_source_roots = [&](const std::vector<Clause>& cls) {
    for (const auto& c : cls)
      for (const auto& a : c.literals) {
        Rational ci = a.coeff(src), cj = a.coeff(dst);
        if (ci != 0 && cj == 0 && a.expr.coeffs.size() == 1)
          betas.insert(-a.expr.constant / ci);
      }
  };
  add_source_roots(node_clauses);
  add_source_roots(edge_clauses);

  std::vector<Line> lines;
  for (const auto& c : edge_clauses)
    for (const auto& a : c.literals) {
      Rational ci = a.coeff(src), cj = a.coeff(dst);
      if (ci == 0 && cj != 0) pts.insert(-a.expr.constant / cj);  // dst-only root
      if (ci != 0 && cj != 0) lines.push_back(Line{ci, cj, a.expr.constant});
    }

  for (const auto& ln : lines) {
    // Crossings with constant source values.
    for (const Rational& beta : betas) pts.insert(-(ln.c0 + ln.ci * beta) / ln.cj);
  }
  for (size_t a = 0; a < lines.size(); ++a)
    for (size_t b = a + 1; b < lines.size(); ++b) {
      Rational det = lines[a].ci * lines[b].cj - lines[b].ci * lines[a].cj;
      if (det != 0)
        pts.insert((lines[b].ci * lines[a].c0 - lines[a].ci * lines[b].c0) / det);
    }

  std::vector<Rational> out;
  for (const Rational& x : pts)
    if (sj.lo <= x && x <= sj.hi) out.push_back(x);
  return out;
}

std::vector<Interval> intervals_from_points(const std::vector<Rational>& pts) {
  std::vector<Interval> out;
  for (size_t k = 0; k + 1 < pts.size(); ++k)
    out.push_back(Interval{pts[k], pts[k + 1]});
  return out;
}

std::vector<BoundTriple> symbolic_bounds(const Problem& p, VarId src, VarId dst,
                                         const PiecewisePoly& base,
                                         const std::vector<Clause>& node_clauses,
                                         const std::vector<Clause>& edge_clauses,
                                         const Interval& interval) {
  if (base.empty()) return {};
  Rational y0 = midpoint(interval.lo, interval.hi);

  // Boundaries of the satisfying source set, from the atoms only. Between
  // critical points none of them cross each other or a base breakpoint, so
  // the order at the midpoint is the order on the whole interval.
  std::vector<std::pair<Rational, AffineExpr>> cands;
  auto add_atom_bounds = [&](const std::vector<Clause>& cls) {
    for (const auto& c : cls)
      for (const auto& a : c.literals) {
        Rational ci = a.coeff(src), cj = a.coeff(dst);
        if (ci == 0) continue;
        AffineExpr sym(-cj / ci, -a.expr.constant / ci);
        cands.emplace_back(sym.eval(y0), sym);
      }
  };
  add_atom_bounds(node_clauses);
  add_atom_bounds(edge_clauses);
  // The base support brackets everything; the integrand is zero outside.
  const auto& pieces = base.pieces();
  cands.emplace_back(pieces.front().lower, AffineExpr::constant(pieces.front().lower));
  cands.emplace_back(pieces.back().upper, AffineExpr::constant(pieces.back().upper));

  std::sort(cands.begin(), cands.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  cands.erase(std::unique(cands.begin(), cands.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              cands.end());

  std::vector<Rational> point(p.var_count(), Rational(0));
  point[dst] = y0;
  auto all_satisfied = [&](const std::vector<Clause>& cls) {
    for (const auto& c : cls)
      if (!c.satisfied(point)) return false;
    return true;
  };

  std::vector<BoundTriple> out;
  for (size_t k = 0; k + 1 < cands.size(); ++k) {
    const Rational& lo_val = cands[k].first;
    const Rational& hi_val = cands[k + 1].first;
    point[src] = midpoint(lo_val, hi_val);
    if (!all_satisfied(node_clauses) || !all_satisfied(edge_clauses)) continue;
    // Emit one triple per base piece overlapping this satisfied cell; the
    // tighter of the cell bound and the piece bound applies, decided at the
    // midpoint and constant across the interval.
    auto it = std::upper_bound(pieces.begin(), pieces.end(), lo_val,
                               [](const Rational& v, const Piece& pc) { return v < pc.upper; });
    for (; it != pieces.end() && it->lower < hi_val; ++it) {
      AffineExpr lower = it->lower > lo_val ? AffineExpr::constant(it->lower) : cands[k].second;
      AffineExpr upper = it->upper < hi_val ? AffineExpr::constant(it->upper) : cands[k + 1].second;
      out.push_back(BoundTriple{lower, upper, it->poly});
    }
  }
  return out;
}

PiecewisePoly send_message_over(const Problem& p, VarId src, VarId dst,
                                const PiecewisePoly& base,
                                const std::vector<Clause>& edge_clauses) {
  if (base.empty()) return PiecewisePoly();
  const std::vector<Clause>& node_clauses = p.node_formula(src);
  std::vector<Rational> pts = critical_points(p, src, dst, base, node_clauses, edge_clauses);
  std::vector<Piece> pieces;
  for (const Interval& iv : intervals_from_points(pts)) {
    std::vector<BoundTriple> triples =
        symbolic_bounds(p, src, dst, base, node_clauses, edge_clauses, iv);
    Polynomial f;
    for (const auto& tr : triples)
      f = f + pw_integrate_symbolic(tr.integrand, tr.lower, tr.upper);
    if (!f.is_zero()) pieces.push_back(Piece{iv.lo, iv.hi, f});
  }
  return PiecewisePoly::from_pieces(std::move(pieces));
}

Message send_message(const Problem& p, const PseudoTree& t, const BeliefTable& table,
                     VarId src, VarId dst) {
  const std::vector<Clause>* edge = p.edge_formula(src, dst);
  static const std::vector<Clause> kNoClauses;
  PiecewisePoly base = incoming_product(p, t, table, src, dst);
  Message m;
  m.from = src;
  m.to = dst;
  m.value = send_message_over(p, src, dst, base, edge ? *edge : kNoClauses);
  return m;
}

Rational integrate_against(const Problem& p, const PiecewisePoly& f, VarId i,
                           const std::vector<const std::vector<Clause>*>& clause_sets) {
  if (f.empty()) return Rational(0);
  const Interval& s = p.support[i];
  std::set<Rational> cuts;
  for (const Rational& b : f.breakpoints()) cuts.insert(b);
  cuts.insert(s.lo);
  cuts.insert(s.hi);
  for (const auto* cls : clause_sets)
    for (const auto& c : *cls)
      for (const auto& a : c.literals) {
        Rational ci = a.coeff(i);
        if (ci != 0 && a.expr.coeffs.size() == 1) cuts.insert(-a.expr.constant / ci);
      }
  std::vector<Rational> pts;
  for (const Rational& x : cuts)
    if (s.lo <= x && x <= s.hi) pts.push_back(x);

  std::vector<Rational> point(p.var_count(), Rational(0));
  Rational acc(0);
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    point[i] = midpoint(pts[k], pts[k + 1]);
    bool ok = true;
    for (const auto* cls : clause_sets) {
      for (const auto& c : *cls)
        if (!c.satisfied(point)) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (ok) acc += f.integrate(pts[k], pts[k + 1]);
  }
  return acc;
}

namespace {

void check_degree_bound(const PiecewisePoly& msg, int sending_subtree, VarId src, VarId dst) {
  if (msg.max_degree() > sending_subtree)
    throw std::logic_error("message " + std::to_string(src) + "->" + std::to_string(dst) +
                           " exceeds the subtree degree bound");
}

}  // namespace

BeliefTable run(const Problem& p, const PseudoTree& t) {
  if (!p.decomposed) throw std::logic_error("run() requires a decomposed problem");
  if (!p.support_ok) throw std::logic_error("run() requires established supports");

  BeliefTable table;
  const int n = p.var_count();
  table.component_mi.assign(t.roots.size(), Rational(0));
  if (p.infeasible) {
    table.beliefs.assign(n, PiecewisePoly());
    table.mi_value = 0;
    return table;
  }

  for (VarId u : t.upward_order) {
    VarId par = t.parent[u];
    if (par < 0) continue;
    Message m = send_message(p, t, table, u, par);
    check_degree_bound(m.value, t.subtree_size[u], u, par);
    table.messages[{u, par}] = std::move(m.value);
  }
  for (VarId u : t.downward_order) {
    for (VarId c : t.children[u]) {
      Message m = send_message(p, t, table, u, c);
      int comp_size = t.subtree_size[t.roots[t.component[u]]];
      check_degree_bound(m.value, comp_size - t.subtree_size[c], u, c);
      table.messages[{u, c}] = std::move(m.value);
    }
  }

  table.beliefs.assign(n, PiecewisePoly());
  for (VarId i = 0; i < n; ++i) {
    PiecewisePoly b = incoming_product(p, t, table, i, -1);
    table.beliefs[i] = b.clip(p.support[i].lo, p.support[i].hi);
  }

  for (size_t k = 0; k < t.roots.size(); ++k) {
    VarId r = t.roots[k];
    table.component_mi[k] =
        integrate_against(p, table.beliefs[r], r, {&p.node_formula(r)});
  }
  table.mi_value = 1;
  for (const Rational& c : table.component_mi) table.mi_value *= c;

  // Scale each belief by the MI of the other components so that every
  // belief is the global unnormalized marginal.
  for (VarId i = 0; i < n; ++i) {
    Rational other(1);
    for (size_t k = 0; k < t.roots.size(); ++k)
      if (static_cast<int>(k) != t.component[i]) other *= table.component_mi[k];
    if (other != 1) table.beliefs[i] = table.beliefs[i].scale(other);
  }
  return table;
}

Rational mi(const BeliefTable& table, const Problem& p) {
  for (VarId i = 0; i < p.var_count(); ++i) {
    Rational node_mi = integrate_against(p, table.beliefs[i], i, {&p.node_formula(i)});
    if (node_mi != table.mi_value)
      throw std::logic_error("node " + p.variables[i] +
                             " belief is inconsistent with the MI value: " +
                             to_string(node_mi) + " vs " + to_string(table.mi_value));
  }
  return table.mi_value;
}

namespace {

// Satisfying cells of univariate clause sets within the support, refined by
// the breakpoints of f.
std::vector<Interval> satisfied_cells(const Problem& p, const PiecewisePoly& f, VarId i,
                                      const std::vector<const std::vector<Clause>*>& sets) {
  const Interval& s = p.support[i];
  std::set<Rational> cuts{s.lo, s.hi};
  for (const Rational& b : f.breakpoints()) cuts.insert(b);
  for (const auto* cls : sets)
    for (const auto& c : *cls)
      for (const auto& a : c.literals) {
        Rational ci = a.coeff(i);
        if (ci != 0 && a.expr.coeffs.size() == 1) cuts.insert(-a.expr.constant / ci);
      }
  std::vector<Rational> pts;
  for (const Rational& x : cuts)
    if (s.lo <= x && x <= s.hi) pts.push_back(x);
  std::vector<Rational> point(p.var_count(), Rational(0));
  std::vector<Interval> cells;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    point[i] = midpoint(pts[k], pts[k + 1]);
    bool ok = true;
    for (const auto* cls : sets) {
      for (const auto& c : *cls)
        if (!c.satisfied(point)) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (ok) cells.push_back(Interval{pts[k], pts[k + 1]});
  }
  return cells;
}

}  // namespace

PiecewisePoly marginal(const BeliefTable& table, const Problem& p, VarId i) {
  if (table.mi_value == 0)
    throw UndefinedDistributionError("distribution undefined: the formula has MI = 0");
  std::vector<Piece> pieces;
  for (const Interval& cell : satisfied_cells(p, table.beliefs[i], i, {&p.node_formula(i)})) {
    PiecewisePoly clipped = table.beliefs[i].clip(cell.lo, cell.hi);
    for (const Piece& pc : clipped.pieces()) pieces.push_back(pc);
  }
  PiecewisePoly restricted = PiecewisePoly::from_pieces(std::move(pieces));
  return restricted.scale(1 / table.mi_value);
}

Rational moment(const BeliefTable& table, const Problem& p, VarId i, int k) {
  if (table.mi_value == 0)
    throw UndefinedDistributionError("moment undefined: the formula has MI = 0");
  PiecewisePoly weighted = table.beliefs[i].times_monomial(k);
  Rational num = integrate_against(p, weighted, i, {&p.node_formula(i)});
  return num / table.mi_value;
}

Rational query_univariate(const BeliefTable& table, const Problem& p,
                          const PseudoTree& t, VarId i,
                          const std::vector<Clause>& phi) {
  (void)t;
  for (const auto& c : phi)
    for (VarId v : c.vars())
      if (v != i)
        throw NonconformingQueryError("univariate query mentions another variable");
  if (table.mi_value == 0)
    throw UndefinedDistributionError("probability undefined: the formula has MI = 0");
  Rational num = integrate_against(p, table.beliefs[i], i, {&p.node_formula(i), &phi});
  return num / table.mi_value;
}

Rational query_bivariate(const BeliefTable& table, const Problem& p,
                         const PseudoTree& t, VarId i, VarId j,
                         const std::vector<Clause>& phi) {
  if (i == j || (t.parent[i] != j && t.parent[j] != i))
    throw NonconformingQueryError("query does not conform to primal graph: " +
                                  p.variables[i] + " and " + p.variables[j] +
                                  " are not adjacent");
  if (table.mi_value == 0)
    throw UndefinedDistributionError("probability undefined: the formula has MI = 0");
  for (const auto& c : phi)
    for (VarId v : c.vars())
      if (v != i && v != j)
        throw NonconformingQueryError("bivariate query mentions a third variable");

  // Updated message j -> i under the conjoined edge formula, from the
  // cached product over j's other neighbors (the division-free form of the
  // belief ratio).
  PiecewisePoly pi_j = incoming_product(p, t, table, j, i);
  const std::vector<Clause>* edge = p.edge_formula(i, j);
  std::vector<Clause> edge_clauses = edge ? *edge : std::vector<Clause>{};
  edge_clauses.insert(edge_clauses.end(), phi.begin(), phi.end());
  PiecewisePoly updated = send_message_over(p, j, i, pi_j, edge_clauses);

  PiecewisePoly rest = incoming_product(p, t, table, i, j);
  PiecewisePoly b_star =
      pw_multiply(updated, rest).clip(p.support[i].lo, p.support[i].hi);
  Rational num = integrate_against(p, b_star, i, {&p.node_formula(i)});
  for (size_t k = 0; k < table.component_mi.size(); ++k)
    if (static_cast<int>(k) != t.component[i]) num *= table.component_mi[k];
  return num / table.mi_value;
}

Rational mi_upward_only(const Problem& p, const PseudoTree& t) {
  if (p.infeasible) return Rational(0);
  BeliefTable table;
  table.component_mi.assign(t.roots.size(), Rational(0));
  for (VarId u : t.upward_order) {
    VarId par = t.parent[u];
    if (par < 0) continue;
    table.messages[{u, par}] = send_message(p, t, table, u, par).value;
  }
  Rational acc(1);
  for (VarId r : t.roots) {
    PiecewisePoly b;
    bool any = false;
    for (VarId c : t.children[r]) {
      const PiecewisePoly& m = table.messages.at({c, r});
      b = any ? pw_multiply(b, m) : m;
      any = true;
    }
    if (!any) b = PiecewisePoly::constant(p.support[r].lo, p.support[r].hi, Rational(1));
    b = b.clip(p.support[r].lo, p.support[r].hi);
    acc *= integrate_against(p, b, r, {&p.node_formula(r)});
  }
  return acc;
}

Solved solve_problem(Problem p, std::optional<VarId> root) {
  if (!p.support_ok) establish_support(p);
  PrimalGraph g = primal_graph(p);
  assert_tree(g, p.variables);
  PseudoTree t = root ? root_at(g, *root) : choose_root(g);
  BeliefTable table = run(p, t);
  return Solved{std::move(p), std::move(t), std::move(table)};
}

}  // namespace treemi
