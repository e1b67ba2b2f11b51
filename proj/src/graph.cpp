// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/graph.hpp"

#include <algorithm>
#include <queue>

namespace treemi {

PrimalGraph primal_graph(const Problem& p) {
  PrimalGraph g;
  g.n = p.var_count();
  g.adj.assign(g.n, {});
  for (const auto& c : p.clauses) {
    auto vs = c.vars();
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j)
        g.edges.insert({std::min(vs[i], vs[j]), std::max(vs[i], vs[j])});
  }
  for (const auto& [a, b] : g.edges) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

void assert_tree(const PrimalGraph& g, const std::vector<std::string>& names) {
  std::vector<int> parent(g.n, -2);  // -2 unvisited, -1 root
  for (VarId start = 0; start < g.n; ++start) {
    if (parent[start] != -2) continue;
    parent[start] = -1;
    std::vector<VarId> stack{start};
    while (!stack.empty()) {
      VarId u = stack.back();
      stack.pop_back();
      for (VarId v : g.adj[u]) {
        if (v == parent[u]) continue;
        if (parent[v] != -2) {
          // Extra edge u-v on top of the tree paths: u, v and u's tree
          // neighbor toward their meeting point all lie on the cycle.
          VarId third = parent[u] >= 0 ? parent[u] : parent[v];
          throw NonTreeError("cycle detected through " + names.at(v) + ", " +
                             names.at(u) + ", " + names.at(third));
        }
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
}

namespace {

// Depths of all nodes of one component when rooted at r; also returns the
// component's node set in BFS order.
std::vector<VarId> bfs_order(const PrimalGraph& g, VarId r, std::vector<int>& dist) {
  std::vector<VarId> order;
  dist.assign(g.n, -1);
  dist[r] = 0;
  std::queue<VarId> q;
  q.push(r);
  while (!q.empty()) {
    VarId u = q.front();
    q.pop();
    order.push_back(u);
    for (VarId v : g.adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return order;
}

PseudoTree build_tree(const PrimalGraph& g, const std::vector<VarId>& roots_by_comp) {
  PseudoTree t;
  t.parent.assign(g.n, -1);
  t.children.assign(g.n, {});
  t.depth.assign(g.n, 0);
  t.component.assign(g.n, -1);
  t.subtree_size.assign(g.n, 1);
  for (VarId r : roots_by_comp) {
    int comp = static_cast<int>(t.roots.size());
    t.roots.push_back(r);
    std::vector<int> dist;
    std::vector<VarId> order = bfs_order(g, r, dist);
    for (VarId u : order) {
      t.component[u] = comp;
      t.depth[u] = dist[u];
      t.downward_order.push_back(u);
      for (VarId v : g.adj[u])
        if (dist[v] == dist[u] + 1) {
          t.parent[v] = u;
          t.children[u].push_back(v);
        }
    }
  }
  t.upward_order.assign(t.downward_order.rbegin(), t.downward_order.rend());
  for (VarId u : t.upward_order)
    if (t.parent[u] >= 0) t.subtree_size[t.parent[u]] += t.subtree_size[u];
  return t;
}

// Component representatives (smallest node id first), and the component's
// members.
std::vector<std::vector<VarId>> components(const PrimalGraph& g) {
  std::vector<std::vector<VarId>> comps;
  std::vector<bool> seen(g.n, false);
  for (VarId s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<int> dist;
    std::vector<VarId> order = bfs_order(g, s, dist);
    for (VarId u : order) seen[u] = true;
    std::sort(order.begin(), order.end());
    comps.push_back(std::move(order));
  }
  return comps;
}

}  // namespace

PseudoTree choose_root(const PrimalGraph& g) {
  std::vector<VarId> roots;
  for (const auto& comp : components(g)) {
    VarId best = -1;
    int best_ecc = -1;
    for (VarId cand : comp) {
      std::vector<int> dist;
      bfs_order(g, cand, dist);
      int ecc = 0;
      for (VarId u : comp) ecc = std::max(ecc, dist[u]);
      if (best < 0 || ecc < best_ecc) {
        best = cand;
        best_ecc = ecc;
      }
    }
    roots.push_back(best);  // comp is sorted, so ties fall to the smallest id
  }
  return build_tree(g, roots);
}

PseudoTree root_at(const PrimalGraph& g, VarId r) {
  PseudoTree centered = choose_root(g);
  std::vector<VarId> roots = centered.roots;
  roots[centered.component[r]] = r;
  return build_tree(g, roots);
}

GraphStats graph_stats(const Problem& p, const PseudoTree& t) {
  GraphStats s;
  s.n = p.var_count();
  for (const auto& c : p.clauses) s.m += static_cast<int>(c.literals.size());
  PrimalGraph g = primal_graph(p);
  // Diameter: max eccentricity over all nodes (components are small).
  for (VarId u = 0; u < g.n; ++u) {
    std::vector<int> dist;
    bfs_order(g, u, dist);
    for (int d : dist) s.diameter = std::max(s.diameter, d);
  }
  for (VarId u = 0; u < g.n; ++u) {
    s.h_t = std::max(s.h_t, t.depth[u]);
    if (t.children[u].empty()) ++s.leaves;
  }
  // The pseudo tree is the rooted primal tree itself, so the two heights
  // coincide here; both are reported.
  s.h_p = s.h_t;
  BigInt n3 = BigInt(s.n) * s.n * s.n;
  BigInt mhp = 1;
  for (int i = 0; i < s.h_p; ++i) mhp *= s.m;
  BigInt base = n3 * mhp;
  BigInt pow = 1;
  for (int i = 0; i < s.h_t; ++i) pow *= base;
  s.cost_estimate = BigInt(s.leaves) * pow;
  return s;
}

}  // namespace treemi
