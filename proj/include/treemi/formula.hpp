// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treemi/rational.hpp"

namespace treemi {

using VarId = int;

// Errors surfaced to the CLI with stable exit codes.
struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(col_) + ")"),
        line(line_), column(col_) {}
};
struct NonTreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndefinedDistributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedWeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonconformingQueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Rel { LT, LE };

/// sum(coeffs[v] * x_v) + constant. Zero coefficients are never stored.
struct LinearExpr {
  std::map<VarId, Rational> coeffs;
  Rational constant{0};

  void add_term(VarId v, const Rational& c);
  LinearExpr operator-() const;
  LinearExpr operator-(const LinearExpr& o) const;
  LinearExpr operator+(const LinearExpr& o) const;
  Rational eval(const std::vector<Rational>& point) const;
  std::vector<VarId> vars() const;
  bool operator==(const LinearExpr& o) const {
    return coeffs == o.coeffs && constant == o.constant;
  }
};

/// Canonical linear atom: expr < 0 or expr <= 0.
struct Atom {
  LinearExpr expr;
  Rel rel = Rel::LT;

  /// not(e < 0) = -e <= 0 and vice versa; an involution.
  Atom negated() const;
  bool satisfied(const std::vector<Rational>& point) const;
  std::vector<VarId> vars() const { return expr.vars(); }
  bool mentions(VarId v) const { return expr.coeffs.count(v) > 0; }
  Rational coeff(VarId v) const;
  bool operator==(const Atom& o) const { return rel == o.rel && expr == o.expr; }
};

/// Disjunction of atoms (negations already pushed into the atoms).
struct Clause {
  std::vector<Atom> literals;

  std::vector<VarId> vars() const;
  bool satisfied(const std::vector<Rational>& point) const;
  bool operator==(const Clause& o) const { return literals == o.literals; }
};

struct Interval {
  Rational lo, hi;
  bool is_empty() const { return !(lo < hi); }
  Rational length() const { return hi - lo; }
};

/// An SMT(LRA) CNF problem over real variables, decomposed into per-node
/// univariate formulas and per-edge bivariate formulas. Immutable once
/// built; safe to share across threads.
class Problem {
 public:
  std::vector<std::string> variables;
  std::vector<Clause> clauses;

  // The decomposition: every clause lands in exactly one of the two maps.
  // Available iff `decomposed` (all clauses mention at most 2 variables).
  std::vector<std::vector<Clause>> node_formulas;
  std::map<std::pair<VarId, VarId>, std::vector<Clause>> edge_formulas;
  bool decomposed = false;

  // Finite per-variable bounds containing every satisfying value.
  // Filled by establish_support.
  std::vector<Interval> support;
  bool support_ok = false;
  // Set when interval propagation proves the formula unsatisfiable.
  bool infeasible = false;
  // Set when some input clause is constant-false (e.g. only false literals).
  bool trivially_false = false;

  int var_count() const { return static_cast<int>(variables.size()); }
  VarId var_id(const std::string& name) const;  // -1 if unknown
  const std::vector<Clause>& node_formula(VarId i) const { return node_formulas.at(i); }
  const std::vector<Clause>* edge_formula(VarId i, VarId j) const;

  /// Builds a problem and its node/edge decomposition. When
  /// `allow_wide_clauses` is false, a clause mentioning 3 or more distinct
  /// variables raises NonTreeError; otherwise the decomposition is skipped
  /// and only clause-level operations are usable.
  static Problem from_clauses(std::vector<std::string> variables,
                              std::vector<Clause> clauses,
                              bool allow_wide_clauses = false);

  /// A copy with extra clauses conjoined (decomposition and support redone
  /// by the caller via establish_support).
  Problem conjoin(const std::vector<Clause>& extra) const;
};

/// Parses the s-expression problem format. Rejects Boolean declarations and
/// weights; use parse_wmi for those. See the README for the grammar.
Problem parse_problem(std::string_view text, bool allow_wide_clauses = false);

/// Canonical text form; reparsing yields a structurally identical Problem.
std::string pretty_print(const Problem& p);

/// Computes finite per-variable supports by interval propagation over the
/// unit constraints and edge atoms. Throws UnboundedError when some
/// variable admits no finite bound (and the formula is not already proved
/// empty). Sets p.infeasible when propagation yields an empty interval.
void establish_support(Problem& p);

/// One formula of a query file: a conjunction of clauses over at most two
/// variables.
struct Query {
  std::vector<Clause> clauses;
  std::vector<VarId> vars;  // sorted, deduplicated
};

Query parse_query(std::string_view line, const Problem& p);

}  // namespace treemi
