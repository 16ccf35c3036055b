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

#ifndef BNOL_GRAPH_HPP
#define BNOL_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bnol {

// Vertices are 0-based in memory. File formats are 1-based.
struct Edge {
  int u, v;  // u < v
};

class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  // Edges are normalized to u < v, deduplicated, and sorted; self-loops are
  // rejected.
  UndirectedGraph(int n, const std::vector<std::pair<int, int>>& edges);

  // Text format: "n m" on the first line, then m lines "u v", 1-indexed.
  static UndirectedGraph from_text(std::istream& in);
  static UndirectedGraph from_file(const std::string& path);
  void to_text(std::ostream& out) const;

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  const std::vector<int>& incident_edges(int v) const { return inc_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool has_edge(int u, int v) const;
  int edge_id(int u, int v) const;  // -1 when absent
  bool is_connected() const;
  std::vector<std::vector<int>> connected_components() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;            // sorted lexicographically
  std::vector<std::vector<int>> adj_;  // sorted neighbor lists
  std::vector<std::vector<int>> inc_;  // incident edge ids, ascending
};

// Direction of edge (u, v) with u < v: kForward = u→v.
enum class EdgeDir : int8_t { kForward = 0, kBackward = 1 };

// Direction assignment for a subset of a graph's edges.
class PartialOrientation {
 public:
  PartialOrientation() = default;
  explicit PartialOrientation(int num_edges)
      : dir_(static_cast<size_t>(num_edges), kUnset) {}

  void set(int edge_id, EdgeDir d) { dir_[edge_id] = static_cast<int8_t>(d); }
  void unset(int edge_id) { dir_[edge_id] = kUnset; }
  bool oriented(int edge_id) const { return dir_[edge_id] != kUnset; }
  EdgeDir dir(int edge_id) const {
    return static_cast<EdgeDir>(dir_[edge_id]);
  }
  int num_edges() const { return static_cast<int>(dir_.size()); }
  int num_oriented() const;
  bool is_total() const { return num_oriented() == num_edges(); }

  friend bool operator==(const PartialOrientation&,
                         const PartialOrientation&) = default;

 private:
  static constexpr int8_t kUnset = -1;
  std::vector<int8_t> dir_;
};

// Head/tail of an oriented edge.
int edge_head(const Edge& e, EdgeDir d);
int edge_tail(const Edge& e, EdgeDir d);

// Text form of an oriented edge set: one line "u v" per arc u→v, 1-indexed,
// in ascending edge-id order.
void orientation_to_text(const UndirectedGraph& g, const PartialOrientation& o,
                         std::ostream& out);

class Dag {
 public:
  Dag() = default;
  // arcs are (parent, child) pairs; duplicates are rejected.
  Dag(int n, const std::vector<std::pair<int, int>>& arcs);

  int num_vertices() const { return n_; }
  const std::vector<int>& parents(int v) const { return parents_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
  int max_indegree() const;
  bool is_acyclic() const;
  // Parents before children; empty when cyclic.
  std::optional<std::vector<int>> topological_order() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> arcs_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

bool is_acyclic(int n, std::span<const std::pair<int, int>> arcs);

// DAG induced by a total orientation.
Dag orientation_to_dag(const UndirectedGraph& g, const PartialOrientation& o);

// All orientations of `edge_subset` that extend `fixed` (entries of `fixed`
// outside the subset are ignored), are acyclic, and have indegree ≤ d
// counting subset edges only. Output order is lexicographic over the
// direction vector along the ascending subset, forward before backward.
// Throws TooLargeError when 2^|edge_subset| exceeds `cap`.
std::vector<PartialOrientation> enumerate_orientations(
    const UndirectedGraph& g, std::span<const int> edge_subset,
    const PartialOrientation& fixed, int d, uint64_t cap = uint64_t{1} << 20);

}  // namespace bnol

#endif  // BNOL_GRAPH_HPP
