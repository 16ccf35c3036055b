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

#ifndef BNOL_INSTANCE_GEN_HPP
#define BNOL_INSTANCE_GEN_HPP

#include <cstdint>

#include "bnol/bayes_net.hpp"
#include "bnol/graph.hpp"
#include "bnol/mixture.hpp"

namespace bnol {

struct InstanceParams {
  Family family = Family::kTree;
  int n = 5;
  int k = 2;
  int d = 1;  // chordal only
  // Every CPT entry lands in [cpt_floor, 1 - cpt_floor].
  double cpt_floor = 0.1;
  // Chordal skeletons are resampled until they stay chordal and admit an
  // indegree-bounded acyclic orientation.
  int max_retries = 100;
  // Probability of dropping each edge of the grown d-tree.
  double edge_drop = 0.15;
};

struct GroundTruth {
  BayesNet net;
  UndirectedGraph skeleton;
  Family family = Family::kTree;
  int d = 1;
  double cpt_floor = 0.1;
  uint64_t seed = 0;
};

// Synthesizes a ground-truth network. Tree instances draw a uniform
// arborescence rooted at vertex 0; chordal instances grow a random d-tree,
// drop edges, validate, then draw a uniform admissible orientation. All
// randomness comes from substreams of `seed`, so equal seeds reproduce the
// instance exactly. Throws GenerationFailedError when no valid chordal
// skeleton appears within max_retries.
GroundTruth gen_instance(const InstanceParams& params, uint64_t seed);

// Ground truth on a caller-supplied skeleton: trees orient every edge away
// from vertex 0 (the skeleton must be a spanning tree), chordal skeletons
// get a uniform indegree-bounded acyclic orientation.
GroundTruth gen_on_skeleton(const InstanceParams& params,
                            const UndirectedGraph& skeleton, uint64_t seed);

}  // namespace bnol

#endif  // BNOL_INSTANCE_GEN_HPP
