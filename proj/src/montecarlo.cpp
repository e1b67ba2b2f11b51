// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "treemi/verify.hpp"

namespace treemi {

namespace {

struct FlatAtom {
  std::vector<std::pair<int, double>> terms;
  double constant;
  bool strict;
};

struct FlatClause {
  int begin, end;  // range into atoms
};

}  // namespace

McEstimate oracle_monte_carlo(const Problem& p, std::uint64_t samples,
                              std::uint64_t seed) {
  if (!p.support_ok) throw std::logic_error("Monte Carlo requires established supports");
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  if (p.infeasible || samples == 0) return est;

  const int n = p.var_count();
  std::vector<double> lo(n), width(n);
  double volume = 1.0;
  for (int v = 0; v < n; ++v) {
    lo[v] = to_double(p.support[v].lo);
    width[v] = to_double(p.support[v].hi) - lo[v];
    volume *= width[v];
  }

  // Flatten clauses once; the sampling loop is pure double arithmetic.
  std::vector<FlatAtom> atoms;
  std::vector<FlatClause> clauses;
  for (const auto& c : p.clauses) {
    FlatClause fc{static_cast<int>(atoms.size()), 0};
    for (const auto& a : c.literals) {
      FlatAtom fa;
      fa.constant = to_double(a.expr.constant);
      fa.strict = a.rel == Rel::LT;
      for (const auto& [v, coef] : a.expr.coeffs) fa.terms.emplace_back(v, to_double(coef));
      atoms.push_back(std::move(fa));
    }
    fc.end = static_cast<int>(atoms.size());
    clauses.push_back(fc);
  }

  SplitMix64 rng(seed);
  std::vector<double> x(n);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int v = 0; v < n; ++v) x[v] = lo[v] + rng.next_double() * width[v];
    bool ok = true;
    for (const auto& fc : clauses) {
      bool sat = false;
      for (int ai = fc.begin; ai < fc.end && !sat; ++ai) {
        const FlatAtom& fa = atoms[ai];
        double val = fa.constant;
        for (const auto& [v, coef] : fa.terms) val += coef * x[v];
        sat = fa.strict ? (val < 0) : (val <= 0);
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) ++hits;
  }

  double phat = static_cast<double>(hits) / static_cast<double>(samples);
  est.hits = hits;
  est.estimate = volume * phat;
  est.std_error = volume * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  return est;
}

}  // namespace treemi
