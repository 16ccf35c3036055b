// Copyright 2026 The bnol Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bnol/clique_tree.hpp"

#include <algorithm>
#include <numeric>

#include "bnol/errors.hpp"

namespace bnol {

namespace {

bool includes_sorted(const std::vector<int>& big, const std::vector<int>& sub) {
  return std::includes(big.begin(), big.end(), sub.begin(), sub.end());
}

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

ChordalityCheck is_chordal(const UndirectedGraph& g) {
  const int n = g.num_vertices();
  ChordalityCheck out;
  if (n == 0) {
    out.chordal = true;
    return out;
  }

  // Maximum-cardinality search; ties go to the lowest vertex label.
  std::vector<int> weight(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<int> visit_order;
  visit_order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (visited[v]) continue;
      if (best < 0 || weight[v] > weight[best]) best = v;
    }
    visited[best] = true;
    visit_order.push_back(best);
    for (int w : g.neighbors(best))
      if (!visited[w]) ++weight[w];
  }

  // Reverse visit order is a perfect elimination order iff g is chordal.
  std::vector<int> peo(visit_order.rbegin(), visit_order.rend());
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[peo[i]] = i;

  // Fill check: later neighbors of v minus the earliest of them must all be
  // adjacent to that earliest one.
  for (int i = 0; i < n; ++i) {
    const int v = peo[i];
    int first = -1;
    for (int w : g.neighbors(v)) {
      if (pos[w] <= i) continue;
      if (first < 0 || pos[w] < pos[first]) first = w;
    }
    if (first < 0) continue;
    for (int w : g.neighbors(v)) {
      if (pos[w] <= i || w == first) continue;
      if (!g.has_edge(first, w)) return out;  // chordless cycle witnessed
    }
  }
  out.chordal = true;
  out.peo = std::move(peo);
  return out;
}

CliqueTree build_clique_tree(const UndirectedGraph& g, int forced_root) {
  const ChordalityCheck check = is_chordal(g);
  if (!check.chordal) throw NotChordalError("graph is not chordal");
  const int n = g.num_vertices();

  CliqueTree ct;
  if (n == 0) return ct;

  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[check.peo[i]] = i;

  // Candidate cliques {v} ∪ {later neighbors of v}; the maximal ones are
  // exactly the maximal cliques of a chordal graph.
  std::vector<std::vector<int>> cands(n);
  for (int i = 0; i < n; ++i) {
    const int v = check.peo[i];
    auto& c = cands[i];
    c.push_back(v);
    for (int w : g.neighbors(v))
      if (pos[w] > i) c.push_back(w);
    std::sort(c.begin(), c.end());
  }
  std::vector<std::vector<int>> cliques;
  for (int i = 0; i < n; ++i) {
    bool maximal = true;
    for (int j = 0; j < n && maximal; ++j) {
      if (j == i || cands[j].size() <= cands[i].size()) continue;
      if (includes_sorted(cands[j], cands[i])) maximal = false;
    }
    if (maximal) cliques.push_back(cands[i]);
  }
  std::sort(cliques.begin(), cliques.end());
  const int m = static_cast<int>(cliques.size());
  if (forced_root >= m)
    throw DomainError("forced root clique index out of range");

  // Maximum-weight spanning forest of the clique intersection graph,
  // weight |C ∩ C'|, ties by lowest clique pair.
  struct CliqueEdge {
    int w, a, b;
  };
  std::vector<CliqueEdge> cedges;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const int w =
          static_cast<int>(intersect_sorted(cliques[a], cliques[b]).size());
      if (w > 0) cedges.push_back({w, a, b});
    }
  std::sort(cedges.begin(), cedges.end(),
            [](const CliqueEdge& x, const CliqueEdge& y) {
              if (x.w != y.w) return x.w > y.w;
              return std::pair(x.a, x.b) < std::pair(y.a, y.b);
            });
  UnionFind uf(m);
  std::vector<std::vector<int>> tree_adj(m);
  for (const auto& e : cedges) {
    if (uf.unite(e.a, e.b)) {
      tree_adj[e.a].push_back(e.b);
      tree_adj[e.b].push_back(e.a);
    }
  }
  for (auto& a : tree_adj) std::sort(a.begin(), a.end());

  ct.nodes_.resize(m);
  for (int i = 0; i < m; ++i) ct.nodes_[i].vertices = cliques[i];

  // Root each component, then BFS to set parents and a topo order.
  std::vector<int> comp(m, -1);
  std::vector<std::vector<int>> comp_members;
  for (int i = 0; i < m; ++i) {
    if (comp[i] >= 0) continue;
    const int c = static_cast<int>(comp_members.size());
    comp_members.emplace_back();
    std::vector<int> stack{i};
    comp[i] = c;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      comp_members[c].push_back(x);
      for (int y : tree_adj[x])
        if (comp[y] < 0) {
          comp[y] = c;
          stack.push_back(y);
        }
    }
    std::sort(comp_members[c].begin(), comp_members[c].end());
  }
  for (const auto& members : comp_members) {
    int root = members.front();
    if (forced_root >= 0 && comp[forced_root] == comp[members.front()])
      root = forced_root;
    ct.roots_.push_back(root);
    std::vector<int> queue{root};
    std::vector<bool> seen(m, false);
    seen[root] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      const int x = queue[qi];
      ct.topo_.push_back(x);
      for (int y : tree_adj[x]) {
        if (seen[y]) continue;
        seen[y] = true;
        ct.nodes_[y].parent = x;
        ct.nodes_[x].children.push_back(y);
        queue.push_back(y);
      }
    }
  }
  for (auto& node : ct.nodes_)
    std::sort(node.children.begin(), node.children.end());

  for (int i = 0; i < m; ++i) {
    auto& node = ct.nodes_[i];
    if (node.parent >= 0)
      node.separator =
          intersect_sorted(node.vertices, ct.nodes_[node.parent].vertices);
  }

  // Subtree vertex sets bottom-up, then link edges.
  for (auto it = ct.topo_.rbegin(); it != ct.topo_.rend(); ++it) {
    auto& node = ct.nodes_[*it];
    std::vector<int> acc = node.vertices;
    for (int c : node.children) {
      const auto& sub = ct.nodes_[c].subtree_vertices;
      std::vector<int> merged;
      std::set_union(acc.begin(), acc.end(), sub.begin(), sub.end(),
                     std::back_inserter(merged));
      acc = std::move(merged);
    }
    node.subtree_vertices = std::move(acc);
  }
  for (int i = 0; i < m; ++i) {
    auto& node = ct.nodes_[i];
    std::vector<bool> in_clique(n, false), in_subtree(n, false);
    for (int v : node.vertices) in_clique[v] = true;
    for (int v : node.subtree_vertices) in_subtree[v] = true;
    for (int id = 0; id < g.num_edges(); ++id) {
      const Edge& e = g.edge(id);
      if (!in_subtree[e.u] || !in_subtree[e.v]) continue;
      if (in_clique[e.u] || in_clique[e.v]) node.link_edges.push_back(id);
    }
  }
  return ct;
}

bool is_valid_clique_tree(const UndirectedGraph& g, const CliqueTree& ct,
                          std::string* why) {
  const auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  const int n = g.num_vertices();
  const int m = ct.num_cliques();

  std::vector<std::vector<int>> cliques_of(n);
  for (int i = 0; i < m; ++i) {
    const auto& c = ct.node(i).vertices;
    if (c.empty()) return fail("empty clique");
    if (!std::is_sorted(c.begin(), c.end())) return fail("unsorted clique");
    for (size_t a = 0; a < c.size(); ++a)
      for (size_t b = a + 1; b < c.size(); ++b)
        if (!g.has_edge(c[a], c[b])) return fail("clique is not a clique");
    for (int v : c) cliques_of[v].push_back(i);
  }
  for (int v = 0; v < n; ++v)
    if (cliques_of[v].empty()) return fail("vertex in no clique");
  for (int id = 0; id < g.num_edges(); ++id) {
    const Edge& e = g.edge(id);
    bool covered = false;
    for (int i : cliques_of[e.u]) {
      const auto& c = ct.node(i).vertices;
      if (std::binary_search(c.begin(), c.end(), e.v)) covered = true;
    }
    if (!covered) return fail("edge covered by no clique");
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (includes_sorted(ct.node(i).vertices, ct.node(j).vertices) ||
          includes_sorted(ct.node(j).vertices, ct.node(i).vertices))
        return fail("clique contained in another");
    }

  // Induced-subtree property: the cliques containing any vertex must form a
  // connected piece of the forest.
  for (int v = 0; v < n; ++v) {
    const auto& cs = cliques_of[v];
    std::vector<bool> member(m, false);
    for (int i : cs) member[i] = true;
    std::vector<bool> reached(m, false);
    std::vector<int> stack{cs.front()};
    reached[cs.front()] = true;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      std::vector<int> nbrs = ct.node(x).children;
      if (ct.node(x).parent >= 0) nbrs.push_back(ct.node(x).parent);
      for (int y : nbrs) {
        if (member[y] && !reached[y]) {
          reached[y] = true;
          stack.push_back(y);
        }
      }
    }
    for (int i : cs)
      if (!reached[i]) return fail("vertex cliques not connected in tree");
  }
  return true;
}

}  // namespace bnol
