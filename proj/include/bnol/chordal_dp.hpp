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

#ifndef BNOL_CHORDAL_DP_HPP
#define BNOL_CHORDAL_DP_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bnol/clique_tree.hpp"
#include "bnol/graph.hpp"

namespace bnol {

class Rng;

// Sums, maximizes, and samples over the acyclic orientations of a chordal
// graph with indegree at most d, where an orientation O scores
// Σ_v weight(v, in_O(v)). Work is decomposed along a clique tree: each
// clique enumerates the orientations of its link edges once, and messages
// between cliques are grouped by the direction pattern on the edges the
// two links share.
class ChordalDp {
 public:
  // Log weight of vertex v with in-neighborhood `in_parents` (sorted).
  using NodeWeightFn =
      std::function<double(int v, std::span<const int> in_parents)>;

  // Throws TooLargeError when some clique link exceeds `link_cap` edges.
  ChordalDp(const UndirectedGraph& g, const CliqueTree& ct, int d,
            int link_cap = 24);

  // log Σ_O Π_v exp(weight(v, in_O(v))), -inf when no orientation fits.
  double log_total(const NodeWeightFn& weight) const;

  // An orientation drawn with probability proportional to its score.
  // Throws NotOrientableError when no orientation fits.
  PartialOrientation sample(const NodeWeightFn& weight, Rng& rng) const;

  // The maximizing orientation and its log score. Scores within 1e-12 of
  // the maximum tie; ties resolve to the lexicographically smallest
  // direction vector, clique by clique from the roots down.
  std::pair<PartialOrientation, double> max_orientation(
      const NodeWeightFn& weight) const;

  const UndirectedGraph& graph() const { return *g_; }
  const CliqueTree& clique_tree() const { return *ct_; }
  int indegree_bound() const { return d_; }
  int num_candidates(int clique) const {
    return int(cliques_[clique].cands.size());
  }

 private:
  struct CliqueData {
    std::vector<int> link;  // edge ids, ascending
    std::vector<PartialOrientation> cands;
    // in_sets[cand][vi]: sorted in-neighbors of the clique's vi-th vertex.
    std::vector<std::vector<std::vector<int>>> in_sets;
    // Per child (parallel to CliqueNode::children):
    std::vector<std::vector<int>> shared_parent_pos;  // into this link
    std::vector<std::vector<int>> shared_child_pos;   // into child link
    std::vector<std::map<uint64_t, std::vector<int>>> groups;  // mask->cands
    // cand_child_mask[cand][j]: this candidate's pattern on the edges
    // shared with child j.
    std::vector<std::vector<uint64_t>> cand_child_mask;
    // sep_pos[child j]: positions of the separator vertices in the child's
    // vertex list.
    std::vector<std::vector<int>> sep_pos;
  };

  std::vector<std::vector<double>> compute_tables(const NodeWeightFn& weight,
                                                  bool use_max) const;
  double group_message(const std::vector<double>& child_table,
                       const std::vector<int>& group, bool use_max) const;
  double sep_correction(const NodeWeightFn& weight, int child,
                        const std::vector<int>& sep_pos,
                        int representative_cand) const;
  int argmax_in_group(const std::vector<double>& child_table,
                      const std::vector<int>& group) const;

  const UndirectedGraph* g_;
  const CliqueTree* ct_;
  int d_;
  std::vector<CliqueData> cliques_;
};

// log |AO_d(g)| for a chordal graph, via unit node weights.
double log_count_orientations(const UndirectedGraph& g, int d,
                              int forced_root = -1);

}  // namespace bnol

#endif  // BNOL_CHORDAL_DP_HPP
