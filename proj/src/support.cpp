// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <optional>

#include "treemi/formula.hpp"

namespace treemi {

namespace {

// One end of a possibly-unbounded interval.
struct Ext {
  bool finite = false;
  Rational value{0};
};

struct Box {
  std::optional<Rational> lo, hi;
};

// Range of expr over the current boxes, ignoring variable `skip`.
// Returns {min_end, max_end}.
std::pair<Ext, Ext> expr_range(const LinearExpr& e, VarId skip,
                               const std::vector<Box>& boxes) {
  Ext lo{true, e.constant}, hi{true, e.constant};
  for (const auto& [v, c] : e.coeffs) {
    if (v == skip) continue;
    const Box& b = boxes[v];
    // c * [b.lo, b.hi]
    const std::optional<Rational>& low_end = (c > 0) ? b.lo : b.hi;
    const std::optional<Rational>& high_end = (c > 0) ? b.hi : b.lo;
    if (lo.finite) {
      if (low_end)
        lo.value += c * *low_end;
      else
        lo.finite = false;
    }
    if (hi.finite) {
      if (high_end)
        hi.value += c * *high_end;
      else
        hi.finite = false;
    }
  }
  return {lo, hi};
}

// Hull of the satisfying set of one clause projected onto variable v,
// relative to the current boxes of the other variables.
struct Hull {
  bool whole_line = false;
  bool has_lo = false, has_hi = false;
  Rational lo{0}, hi{0};

  void absorb_upper(const Ext& ub) {
    if (!ub.finite) { whole_line = true; return; }
    if (!has_hi || ub.value > hi) { has_hi = true; hi = ub.value; }
  }
  void absorb_lower(const Ext& lb) {
    if (!lb.finite) { whole_line = true; return; }
    if (!has_lo || lb.value < lo) { has_lo = true; lo = lb.value; }
  }
};

}  // namespace

void establish_support(Problem& p) {
  const int n = p.var_count();
  std::vector<Box> boxes(n);

  const int max_sweeps = std::max(4, 2 * n + 2);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (const auto& c : p.clauses) {
      for (VarId v : c.vars()) {
        Hull hull;
        bool upper_seen = false, lower_seen = false;
        for (const auto& atom : c.literals) {
          Rational a = atom.coeff(v);
          if (a == 0) {
            // Literal not over v: if it can hold somewhere in the box, the
            // clause cannot bound v at all.
            auto [mn, mx] = expr_range(atom.expr, -1, boxes);
            bool possible = !mn.finite || (atom.rel == Rel::LT ? mn.value < 0
                                                               : mn.value <= 0);
            if (possible) {
              hull.whole_line = true;
              break;
            }
            continue;  // impossible literal, ignore
          }
          // a*x_v + rest < 0 projects onto x_v as x_v < -rest/a (a > 0) or
          // x_v > -rest/a (a < 0), existentially over the box, so the bound
          // is taken at the minimum of rest either way.
          LinearExpr rest = atom.expr;
          rest.coeffs.erase(v);
          auto [mn, mx] = expr_range(rest, v, boxes);
          (void)mx;
          Ext bound{mn.finite, mn.finite ? Rational(-mn.value / a) : Rational(0)};
          if (a > 0) {
            hull.absorb_upper(bound);
            upper_seen = true;
          } else {
            hull.absorb_lower(bound);
            lower_seen = true;
          }
          if (hull.whole_line) break;
        }
        if (hull.whole_line) continue;
        // Mixed directions across literals hull to the whole line.
        if (upper_seen && lower_seen) continue;
        Box& b = boxes[v];
        if (hull.has_hi && (!b.hi || hull.hi < *b.hi)) { b.hi = hull.hi; changed = true; }
        if (hull.has_lo && (!b.lo || hull.lo > *b.lo)) { b.lo = hull.lo; changed = true; }
      }
    }
    if (!changed) break;
  }

  // Emptiness wins over unboundedness: an empty box proves MI = 0 even when
  // some other variable has no finite bound.
  bool empty = p.trivially_false;
  for (int v = 0; v < n; ++v)
    if (boxes[v].lo && boxes[v].hi && !(*boxes[v].lo < *boxes[v].hi)) empty = true;

  if (empty) {
    p.support.assign(n, Interval{Rational(0), Rational(0)});
    for (int v = 0; v < n; ++v) {
      if (boxes[v].lo && boxes[v].hi)
        p.support[v] = Interval{*boxes[v].lo, *boxes[v].hi};
    }
    p.infeasible = true;
    p.support_ok = true;
    return;
  }

  for (int v = 0; v < n; ++v) {
    if (!boxes[v].lo || !boxes[v].hi)
      throw UnboundedError("unbounded variable " + p.variables[v]);
  }
  p.support.resize(n);
  for (int v = 0; v < n; ++v) p.support[v] = Interval{*boxes[v].lo, *boxes[v].hi};
  p.support_ok = true;
  p.infeasible = false;
}

}  // namespace treemi
