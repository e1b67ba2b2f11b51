// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Message passing over the primal tree of an SMT(LRA) formula. Each message
// is a univariate piecewise polynomial obtained by integrating the sender's
// node formula, the edge formula and the product of the other incoming
// messages over the sender's variable; each belief is the product of all
// incoming messages and equals the node's unnormalized marginal. One upward
// and one downward pass make every directed-edge message available, which
// amortizes all later univariate and edge-conforming bivariate queries.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "treemi/formula.hpp"
#include "treemi/graph.hpp"
#include "treemi/poly.hpp"

namespace treemi {

struct Message {
  VarId from = -1, to = -1;
  PiecewisePoly value;
};

/// The complete output of one message-passing run: every directed edge
/// message plus the per-node beliefs. Immutable once built; queries
/// against it are read-only and safe to issue concurrently.
struct BeliefTable {
  std::map<std::pair<VarId, VarId>, PiecewisePoly> messages;
  std::vector<PiecewisePoly> beliefs;   // scaled so each integrates to mi_value
  std::vector<Rational> component_mi;   // per pseudo-tree component
  Rational mi_value{0};
};

/// Destination values at which the shape of the satisfying source region
/// can change: roots of destination-only atoms, pairwise intersections of
/// bivariate atom lines, crossings of those lines with source breakpoints,
/// and the destination support endpoints. Sorted, deduplicated, restricted
/// to the destination support.
std::vector<Rational> critical_points(const Problem& p, VarId src, VarId dst,
                                      const PiecewisePoly& base,
                                      const std::vector<Clause>& node_clauses,
                                      const std::vector<Clause>& edge_clauses);

/// Consecutive open intervals between sorted points.
std::vector<Interval> intervals_from_points(const std::vector<Rational>& pts);

struct BoundTriple {
  AffineExpr lower, upper;  // bounds on the source variable, affine in dst
  Polynomial integrand;     // the base piece polynomial on that range
};

/// Case analysis at the interval midpoint: the satisfying source set of the
/// node and edge formulas intersected with the base pieces, one triple per
/// resulting subinterval with bounds lifted back to affine form. Valid on
/// the whole interval because no two boundary lines cross between critical
/// points.
std::vector<BoundTriple> symbolic_bounds(const Problem& p, VarId src, VarId dst,
                                         const PiecewisePoly& base,
                                         const std::vector<Clause>& node_clauses,
                                         const std::vector<Clause>& edge_clauses,
                                         const Interval& interval);

/// One directed message with an explicit base integrand and edge clause
/// set; the building block for both passes and for constrained queries.
PiecewisePoly send_message_over(const Problem& p, VarId src, VarId dst,
                                const PiecewisePoly& base,
                                const std::vector<Clause>& edge_clauses);

/// Equation-style entry point: message src -> dst using the cached
/// incoming messages of `table`.
Message send_message(const Problem& p, const PseudoTree& t, const BeliefTable& table,
                     VarId src, VarId dst);

/// Runs the upward and downward passes and assembles beliefs and the MI
/// value. Requires a decomposed problem with established supports and a
/// forest-shaped primal graph.
BeliefTable run(const Problem& p, const PseudoTree& t);

/// Returns mi_value after asserting the per-node consistency invariant:
/// integrating any node's belief against its node formula reproduces the
/// same rational bit-exactly. Throws std::logic_error on violation.
Rational mi(const BeliefTable& table, const Problem& p);

/// The normalized marginal density of variable i as a piecewise polynomial
/// integrating to exactly 1. Requires mi_value > 0.
PiecewisePoly marginal(const BeliefTable& table, const Problem& p, VarId i);

/// k-th moment of variable i, exact. Requires mi_value > 0.
Rational moment(const BeliefTable& table, const Problem& p, VarId i, int k);

/// Probability of a query over variable i only, answered from the cached
/// belief without re-running message passing.
Rational query_univariate(const BeliefTable& table, const Problem& p,
                          const PseudoTree& t, VarId i,
                          const std::vector<Clause>& phi);

/// Probability of a query over an edge {i, j} of the primal tree: one
/// updated message j -> i against the conjoined edge formula, reusing all
/// cached messages. Throws NonconformingQueryError for non-adjacent pairs.
Rational query_bivariate(const BeliefTable& table, const Problem& p,
                         const PseudoTree& t, VarId i, VarId j,
                         const std::vector<Clause>& phi);

/// Integral of `f` over the satisfying set of the univariate clause sets
/// (all over variable i) within the support of i.
Rational integrate_against(const Problem& p, const PiecewisePoly& f, VarId i,
                           const std::vector<const std::vector<Clause>*>& clause_sets);

/// Upward pass only, rooted as in `t`; enough to read off MI at the roots.
/// This is the single-query baseline the benchmark compares against.
Rational mi_upward_only(const Problem& p, const PseudoTree& t);

/// Parse-free pipeline helper: decompose, establish supports, check the
/// forest shape, choose (or force) a root, run both passes.
struct Solved {
  Problem problem;
  PseudoTree tree;
  BeliefTable table;
};
Solved solve_problem(Problem p, std::optional<VarId> root = std::nullopt);

}  // namespace treemi
