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

#ifndef BNOL_CLIQUE_TREE_HPP
#define BNOL_CLIQUE_TREE_HPP

#include <string>
#include <vector>

#include "bnol/graph.hpp"

namespace bnol {

struct ChordalityCheck {
  bool chordal = false;
  // Perfect elimination order (eliminated-first); empty when not chordal.
  std::vector<int> peo;
};

// Maximum-cardinality search plus the elimination-order fill check.
ChordalityCheck is_chordal(const UndirectedGraph& g);

struct CliqueNode {
  std::vector<int> vertices;  // sorted
  int parent = -1;            // clique index; -1 at a root
  std::vector<int> children;  // ascending clique indices
  // vertices ∩ parent clique; empty at a root
  std::vector<int> separator;
  // all vertices appearing in this clique's subtree
  std::vector<int> subtree_vertices;
  // edge ids {u,v} with an endpoint in this clique and both endpoints in the
  // subtree; ascending. Includes the clique's own internal edges.
  std::vector<int> link_edges;
};

// Rooted clique forest over the maximal cliques of a chordal graph, one
// rooted tree per connected component (isolated vertices are singleton
// cliques). Cliques are indexed in lexicographic order of their sorted
// vertex lists.
class CliqueTree {
 public:
  int num_cliques() const { return static_cast<int>(nodes_.size()); }
  const CliqueNode& node(int i) const { return nodes_[i]; }
  const std::vector<int>& roots() const { return roots_; }
  // Parents before children, roots first.
  const std::vector<int>& topo_order() const { return topo_; }

 private:
  friend CliqueTree build_clique_tree(const UndirectedGraph&, int);
  std::vector<CliqueNode> nodes_;
  std::vector<int> roots_;
  std::vector<int> topo_;
};

// Tree edges come from a maximum-weight spanning tree of the clique
// intersection graph (weight |C ∩ C'|, ties by lowest clique pair). Each
// component is rooted at its lowest-index clique; `forced_root`, when ≥ 0,
// overrides the root of the component containing that clique.
// Throws NotChordalError when g is not chordal.
CliqueTree build_clique_tree(const UndirectedGraph& g, int forced_root = -1);

// Structural validity: cliques maximal and exhaustive, every edge covered,
// and per-vertex clique sets connected within the forest. On failure returns
// false and, when `why` is non-null, a short reason.
bool is_valid_clique_tree(const UndirectedGraph& g, const CliqueTree& ct,
                          std::string* why = nullptr);

}  // namespace bnol

#endif  // BNOL_CLIQUE_TREE_HPP
