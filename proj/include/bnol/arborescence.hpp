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

#ifndef BNOL_ARBORESCENCE_HPP
#define BNOL_ARBORESCENCE_HPP

#include <cstdint>
#include <vector>

namespace bnol {

class Rng;

// Weighted arc of a directed multigraph. Weights live in log space.
struct Arc {
  int tail;
  int head;
  double log_weight;
};

// Directed multigraph; parallel arcs are kept distinct, self-loops rejected.
class WeightedDigraph {
 public:
  explicit WeightedDigraph(int num_vertices);

  int add_arc(int tail, int head, double log_weight);
  int num_vertices() const { return n_; }
  int num_arcs() const { return int(arcs_.size()); }
  const Arc& arc(int id) const { return arcs_[id]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

 private:
  int n_;
  std::vector<Arc> arcs_;
};

// Log of the summed weight of all spanning arborescences rooted at `root`
// (arcs point away from the root). Computed as the determinant of the
// reduced in-weight Laplacian with per-column rescaling tracked in log
// space. Returns -inf when some vertex is unreachable from the root;
// throws NonPositiveTotalError when the determinant degenerates.
double log_arborescence_total(const WeightedDigraph& g, int root);

// Probability that arc `arc_id` appears in a random arborescence drawn
// proportionally to arc-weight products, via the deletion ratio
// 1 - total(without arc)/total(with arc). Clamped to [0, 1]; values beyond
// 1e-9 outside the interval raise NumericIntegrityError.
double arc_inclusion_prob(const WeightedDigraph& g, int root, int arc_id);

// Draws a spanning arborescence with probability proportional to its
// weight product and returns its arc ids. One arc is resolved per step:
// the lowest (head, id) arc leaving the grown root component is either
// excluded with the deletion ratio or contracted into the component.
// Throws NoArborescenceError when none exists.
std::vector<int> sample_arborescence(const WeightedDigraph& g, int root,
                                     Rng& rng);

// Arc ids of a maximum-log-weight spanning arborescence rooted at `root`.
// Ties keep the arc with the lower id. Throws NoArborescenceError when
// none exists.
std::vector<int> max_weight_arborescence(const WeightedDigraph& g, int root);

// Every spanning arborescence rooted at `root` with a finite weight
// product: parallel lists of arc ids and summed log weights. One incoming
// arc is chosen per non-root vertex and the reachable combinations are
// kept; throws TooLargeError when the combination count exceeds `cap`.
// Empty lists mean no arborescence has positive weight.
struct ArborescenceSet {
  std::vector<std::vector<int>> arc_ids;
  std::vector<double> log_weights;
};
ArborescenceSet enumerate_arborescences(const WeightedDigraph& g, int root,
                                        uint64_t cap = uint64_t{1} << 20);

// log_arborescence_total with an exact enumeration fallback for the
// determinant-degenerate regime. The fallback propagates TooLargeError
// when `cap` combinations do not cover the graph.
double log_arborescence_total_robust(const WeightedDigraph& g, int root,
                                     uint64_t cap = uint64_t{1} << 20);

}  // namespace bnol

#endif  // BNOL_ARBORESCENCE_HPP
