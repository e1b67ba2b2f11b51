// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <vector>

#include "treemi/formula.hpp"

namespace treemi {

/// Undirected graph with one node per variable and an edge wherever two
/// variables appear together in at least one clause.
struct PrimalGraph {
  int n = 0;
  std::set<std::pair<VarId, VarId>> edges;  // first < second
  std::vector<std::vector<VarId>> adj;      // sorted neighbor lists

  bool has_edge(VarId i, VarId j) const {
    auto k = std::minmax(i, j);
    return edges.count({k.first, k.second}) > 0;
  }
};

PrimalGraph primal_graph(const Problem& p);

/// Succeeds iff the graph is a forest (disconnected components are solved
/// independently and multiplied). Throws NonTreeError naming three nodes on
/// a cycle otherwise.
void assert_tree(const PrimalGraph& g, const std::vector<std::string>& names);

/// A rooted orientation of the primal forest. Each component is rooted
/// separately; the two orders cover all nodes and are reverses of each
/// other. depth/subtree_size drive the pass schedule and the per-message
/// degree bound check.
struct PseudoTree {
  std::vector<VarId> roots;                // one per component, by min node id
  std::vector<VarId> parent;               // -1 for roots
  std::vector<std::vector<VarId>> children;
  std::vector<VarId> upward_order;         // children before parents
  std::vector<VarId> downward_order;       // parents before children
  std::vector<int> depth;
  std::vector<int> component;              // node -> component index
  std::vector<int> subtree_size;

  VarId root() const { return roots.at(0); }
  int component_count() const { return static_cast<int>(roots.size()); }
};

/// Roots every component at a center (a node minimizing the rooted height),
/// ties broken by smallest variable id. Deterministic.
PseudoTree choose_root(const PrimalGraph& g);

/// Roots the component containing r at r; all other components at their
/// centers. Used for root-invariance checks and the --root CLI option.
PseudoTree root_at(const PrimalGraph& g, VarId r);

/// Structural diagnostics plus the cost estimate l * (n^3 * m^h_p)^h_t.
struct GraphStats {
  int n = 0;         // variables
  int m = 0;         // LRA literal occurrences
  int diameter = 0;  // longest shortest path (max over components)
  int h_t = 0;       // pseudo-tree height
  int h_p = 0;       // primal-tree height from the chosen root
  int leaves = 0;    // pseudo-tree leaf count
  BigInt cost_estimate;
};

GraphStats graph_stats(const Problem& p, const PseudoTree& t);

}  // namespace treemi
