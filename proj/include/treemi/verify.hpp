// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles and problem generators. The nested-elimination oracle
// shares nothing with the message-passing engine beyond exact rationals, so
// agreement between the two is a meaningful end-to-end check.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "treemi/formula.hpp"
#include "treemi/wmi.hpp"

namespace treemi {

/// SplitMix64: the documented, portable generator behind every randomized
/// component. state' = state + 0x9E3779B97F4A7C15; output mixes the state
/// with xor-shifts and the constants 0xBF58476D1CE4E5B9, 0x94D049BB133111EB.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [lo, hi] (inclusive); hi - lo small.
  long next_in(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

/// Exact MI by fixed-order nested elimination with no tree exploitation:
/// variables are integrated out in reverse declaration order; at each step
/// the combinatorial cells over the eliminated variable are enumerated by
/// conditioning on which lower bound is largest and which upper bound is
/// smallest, and the per-cell integral is carried symbolically. Exponential;
/// refuses n > 8. Requires established supports.
Rational oracle_nested_mi(const Problem& p);

/// Same oracle with an initial monomial integrand coefficient*prod(v^exp),
/// the direct definition of a weighted integral.
Rational oracle_nested_weighted(const Problem& p, const Rational& coefficient,
                                const std::vector<std::pair<VarId, int>>& monomial);

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
};

/// Uniform rejection sampling in the support box with a deterministic
/// seeded stream; estimate = box_volume * hits / samples and
/// std_error = box_volume * sqrt(p(1-p)/samples).
McEstimate oracle_monte_carlo(const Problem& p, std::uint64_t samples,
                              std::uint64_t seed);

/// Sum over all Boolean assignments of the real-only weighted MI of the
/// simplified formula times the satisfied Boolean literal weights. The
/// brute-force ground truth for the Boolean elimination stage. |B| <= 20.
Rational wmi_boolean_brute_force(const WmiProblem& w);

// Random benchmark families: linear chains, stars and complete ternary
// trees. Each node gets a random integer-endpoint domain, each edge one or
// two clauses of one or two random bivariate atoms c*Xi + d*Xj < e with
// c, d in {-2..2}\{0} and e in {-3..3}. Instances that a cheap sampling
// probe cannot certify satisfiable are regenerated; fully deterministic
// per seed.
Problem gen_path(int n, std::uint64_t seed);
Problem gen_star(int n, std::uint64_t seed);
Problem gen_snow(int n, std::uint64_t seed);

struct SubsetInstance {
  std::vector<long> s;  // positive integers
  long target;          // L
};

/// Number of subsets of s summing to target, by enumeration. n <= 20.
long subset_count(const SubsetInstance& inst);

struct ChainInstance {
  Problem problem;
  Query query;  // L - 1/2 < X_n < L + 1/2
};

/// The diameter-n chain construction whose MI, conjoined with the interval
/// query on the last variable, counts subset sums: each clause offers the
/// step s_i or 0 within a 1/(2n) tolerance band.
ChainInstance gen_subset_chain(const SubsetInstance& inst);

/// The treewidth-two balanced construction: leaf variables pick 0 or s_i,
/// each internal variable pins the sum of its two children within 1/(4n).
/// Its primal graph contains triangles, so tree checking must reject it;
/// the Monte-Carlo oracle still estimates it. n must be a power of two.
Problem gen_subset_tree(const SubsetInstance& inst);

}  // namespace treemi
