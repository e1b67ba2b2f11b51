// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "treemi/formula.hpp"

namespace treemi {

/// A Boolean literal in a hybrid clause. `negated` refers to the variable
/// itself, i.e. {b, true} stands for "not b".
struct BoolLit {
  int bool_id;
  bool negated;
  bool operator==(const BoolLit& o) const {
    return bool_id == o.bool_id && negated == o.negated;
  }
};

using WmiLiteral = std::variant<Atom, BoolLit>;

struct WmiClause {
  std::vector<WmiLiteral> literals;
};

/// One factor of the weight function, attached to a literal: the factor
/// coefficient * prod(var^exp) applies whenever the literal is satisfied.
struct WeightSpec {
  WmiLiteral literal;
  Rational coefficient{1};
  std::vector<std::pair<VarId, int>> monomial;  // real var id -> exponent
};

/// A weighted hybrid problem over real and Boolean variables, with a
/// per-literal monomial weight function.
struct WmiProblem {
  std::vector<std::string> real_vars;
  std::vector<std::string> bool_vars;
  std::vector<WmiClause> clauses;
  std::vector<WeightSpec> weights;

  bool pure_mi() const { return bool_vars.empty() && weights.empty(); }
  VarId real_var_id(const std::string& name) const;
  int bool_var_id(const std::string& name) const;
};

/// Origin notes for variables introduced by the reductions, so a reduced
/// file can document where each auxiliary variable came from.
struct VarOrigin {
  std::string var;
  std::string note;
};

struct BoolElimResult {
  WmiProblem problem;  // no Boolean variables left
  std::vector<VarOrigin> origins;
};

/// Replaces every Boolean variable B by a fresh real Z_B whose positive
/// range (0, c+) encodes B and negative range (-c-, 0) encodes not-B, with
/// the constant weights of the two Boolean literals folded into the range
/// lengths. Adds the domain clause -c- < Z_B < c+. Throws
/// UnsupportedWeightError for a non-constant weight on a Boolean literal.
BoolElimResult eliminate_booleans(const WmiProblem& w);

struct ReduceResult {
  Problem problem;
  std::vector<VarOrigin> origins;
};

/// Turns per-literal monomial weights on a real-only problem into fresh
/// auxiliary variables whose integration ranges reproduce the weights:
/// unconditional 0 < Z < factor for weights on unit-clause literals,
/// guarded (not l or Z < factor) and (l or Z < 1) otherwise. Each auxiliary
/// variable attaches to one existing node, so tree shape is preserved.
/// Throws UnsupportedWeightError when the encoding would need a clause over
/// three variables.
ReduceResult reduce_weights(const WmiProblem& w);

/// Full pipeline: eliminate_booleans, reduce_weights, message passing, MI.
Rational wmi(const WmiProblem& w);

std::string pretty_print_wmi(const WmiProblem& w);

}  // namespace treemi
