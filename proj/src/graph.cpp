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

#include "bnol/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bnol/errors.hpp"

namespace bnol {

UndirectedGraph::UndirectedGraph(int n,
                                 const std::vector<std::pair<int, int>>& edges)
    : n_(n) {
  if (n < 0) throw DomainError("vertex count must be non-negative");
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("self-loops are not allowed");
    if (u > v) std::swap(u, v);
    edges_.push_back({u, v});
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  edges_.erase(std::unique(edges_.begin(), edges_.end(),
                           [](const Edge& a, const Edge& b) {
                             return a.u == b.u && a.v == b.v;
                           }),
               edges_.end());
  adj_.assign(n_, {});
  inc_.assign(n_, {});
  for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
    const Edge& e = edges_[id];
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
    inc_[e.u].push_back(id);
    inc_[e.v].push_back(id);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

UndirectedGraph UndirectedGraph::from_text(std::istream& in) {
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw IoError("graph header: expected \"n m\"");
  if (n < 1) throw IoError("graph header: n must be >= 1");
  if (m < 0) throw IoError("graph header: m must be >= 0");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(in >> u >> v)) throw IoError("graph: truncated edge list");
    if (u < 1 || u > n || v < 1 || v > n)
      throw IoError("graph: edge endpoint outside [1, n]");
    edges.emplace_back(u - 1, v - 1);
  }
  try {
    return UndirectedGraph(n, edges);
  } catch (const DomainError& e) {
    throw IoError(std::string("graph: ") + e.what());
  }
}

UndirectedGraph UndirectedGraph::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  return from_text(in);
}

void UndirectedGraph::to_text(std::ostream& out) const {
  out << n_ << ' ' << edges_.size() << '\n';
  for (const Edge& e : edges_) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

bool UndirectedGraph::has_edge(int u, int v) const {
  return edge_id(u, v) >= 0;
}

int UndirectedGraph::edge_id(int u, int v) const {
  if (u == v) return -1;
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(u, v),
                             [](const Edge& e, const std::pair<int, int>& p) {
                               return std::pair(e.u, e.v) < p;
                             });
  if (it == edges_.end() || it->u != u || it->v != v) return -1;
  return static_cast<int>(it - edges_.begin());
}

std::vector<std::vector<int>> UndirectedGraph::connected_components() const {
  std::vector<int> comp(n_, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n_; ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out[c].push_back(v);
      for (int w : adj_[v]) {
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

bool UndirectedGraph::is_connected() const {
  return n_ <= 1 || connected_components().size() == 1;
}

int PartialOrientation::num_oriented() const {
  int c = 0;
  for (int8_t d : dir_) c += (d != kUnset);
  return c;
}

int edge_head(const Edge& e, EdgeDir d) {
  return d == EdgeDir::kForward ? e.v : e.u;
}

int edge_tail(const Edge& e, EdgeDir d) {
  return d == EdgeDir::kForward ? e.u : e.v;
}

void orientation_to_text(const UndirectedGraph& g, const PartialOrientation& o,
                         std::ostream& out) {
  for (int id = 0; id < g.num_edges(); ++id) {
    if (!o.oriented(id)) continue;
    const Edge& e = g.edge(id);
    out << edge_tail(e, o.dir(id)) + 1 << ' ' << edge_head(e, o.dir(id)) + 1
        << '\n';
  }
}

Dag::Dag(int n, const std::vector<std::pair<int, int>>& arcs)
    : n_(n), arcs_(arcs) {
  if (n < 0) throw DomainError("vertex count must be non-negative");
  std::sort(arcs_.begin(), arcs_.end());
  if (std::adjacent_find(arcs_.begin(), arcs_.end()) != arcs_.end())
    throw DomainError("duplicate arc");
  parents_.assign(n_, {});
  children_.assign(n_, {});
  for (auto [p, c] : arcs_) {
    if (p < 0 || p >= n || c < 0 || c >= n)
      throw DomainError("arc endpoint out of range");
    if (p == c) throw DomainError("self-loops are not allowed");
    parents_[c].push_back(p);
    children_[p].push_back(c);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());
}

int Dag::max_indegree() const {
  int d = 0;
  for (const auto& p : parents_) d = std::max(d, static_cast<int>(p.size()));
  return d;
}

std::optional<std::vector<int>> Dag::topological_order() const {
  std::vector<int> indeg(n_);
  for (int v = 0; v < n_; ++v) indeg[v] = static_cast<int>(parents_[v].size());
  std::vector<int> order;
  order.reserve(n_);
  std::vector<int> ready;
  for (int v = n_ - 1; v >= 0; --v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int c : children_[v])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(order.size()) != n_) return std::nullopt;
  return order;
}

bool Dag::is_acyclic() const { return topological_order().has_value(); }

bool is_acyclic(int n, std::span<const std::pair<int, int>> arcs) {
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> children(n);
  for (auto [p, c] : arcs) {
    ++indeg[c];
    children[p].push_back(c);
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int c : children[v])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  return seen == n;
}

Dag orientation_to_dag(const UndirectedGraph& g, const PartialOrientation& o) {
  if (!o.is_total() || o.num_edges() != g.num_edges())
    throw DomainError("orientation does not cover every edge");
  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(g.num_edges());
  for (int id = 0; id < g.num_edges(); ++id) {
    const Edge& e = g.edge(id);
    arcs.emplace_back(edge_tail(e, o.dir(id)), edge_head(e, o.dir(id)));
  }
  return Dag(g.num_vertices(), arcs);
}

std::vector<PartialOrientation> enumerate_orientations(
    const UndirectedGraph& g, std::span<const int> edge_subset,
    const PartialOrientation& fixed, int d, uint64_t cap) {
  std::vector<int> subset(edge_subset.begin(), edge_subset.end());
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  const int f = static_cast<int>(subset.size());
  if (f >= 63 || (uint64_t{1} << f) > cap)
    throw TooLargeError("orientation enumeration: 2^" + std::to_string(f) +
                        " candidates exceed the cap");
  if (fixed.num_edges() != 0 && fixed.num_edges() != g.num_edges())
    throw DomainError("fixed orientation sized for a different graph");

  std::vector<int> free_pos;  // positions within subset not fixed
  PartialOrientation base(g.num_edges());
  for (int i = 0; i < f; ++i) {
    const int id = subset[i];
    if (fixed.num_edges() == g.num_edges() && fixed.oriented(id))
      base.set(id, fixed.dir(id));
    else
      free_pos.push_back(i);
  }

  const int nf = static_cast<int>(free_pos.size());
  std::vector<std::pair<int, int>> arcs(f);
  std::vector<int> indeg(g.num_vertices());
  std::vector<PartialOrientation> out;
  for (uint64_t c = 0; c < (uint64_t{1} << nf); ++c) {
    PartialOrientation cand = base;
    // bit 0 of c steers the last free edge so that output order is
    // lexicographic along the subset
    for (int j = 0; j < nf; ++j) {
      const int i = free_pos[j];
      const EdgeDir dir = ((c >> (nf - 1 - j)) & 1) ? EdgeDir::kBackward
                                                    : EdgeDir::kForward;
      cand.set(subset[i], dir);
    }
    bool ok = true;
    std::fill(indeg.begin(), indeg.end(), 0);
    for (int i = 0; i < f; ++i) {
      const Edge& e = g.edge(subset[i]);
      const EdgeDir dir = cand.dir(subset[i]);
      arcs[i] = {edge_tail(e, dir), edge_head(e, dir)};
      if (++indeg[arcs[i].second] > d) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!is_acyclic(g.num_vertices(), arcs)) continue;
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace bnol
