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

#include "bnol/instance_gen.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bnol/arborescence.hpp"
#include "bnol/chordal_dp.hpp"
#include "bnol/clique_tree.hpp"
#include "bnol/cpt.hpp"
#include "bnol/errors.hpp"
#include "bnol/logspace.hpp"
#include "bnol/rng.hpp"

namespace bnol {

namespace {

void check_params(const InstanceParams& p) {
  if (p.n < 1) throw DomainError("instance needs at least one variable");
  if (p.k < 2) throw DomainError("alphabet size must be at least 2");
  if (!(p.cpt_floor >= 0.0) || p.cpt_floor * p.k > 1.0)
    throw DomainError("cpt floor must lie in [0, 1/k]");
  if (p.family == Family::kChordal) {
    if (p.d < 1) throw DomainError("indegree bound must be at least 1");
    if (p.max_retries < 1) throw DomainError("need at least one attempt");
    if (!(p.edge_drop >= 0.0) || p.edge_drop >= 1.0)
      throw DomainError("edge drop probability must lie in [0, 1)");
  }
}

// Rows are b + (1-k*b) * (normalized exponentials), so entries cover
// [b, 1-b] and each row sums to one exactly up to rounding.
std::vector<Cpt> draw_cpts(const Dag& dag, int k, double floor, Rng& rng) {
  const int n = dag.num_vertices();
  std::vector<Cpt> cpts;
  cpts.reserve(size_t(n));
  for (int v = 0; v < n; ++v) {
    Cpt c;
    c.node = v;
    c.parents = dag.parents(v);
    c.k = k;
    int configs = 1;
    for (size_t i = 0; i < c.parents.size(); ++i) configs *= k;
    c.table.reserve(size_t(configs) * size_t(k));
    std::vector<double> g(static_cast<size_t>(k));
    for (int r = 0; r < configs; ++r) {
      double sum = 0.0;
      for (double& x : g) {
        x = rng.exponential();
        sum += x;
      }
      for (double x : g) c.table.push_back(floor + (1.0 - k * floor) * x / sum);
    }
    cpts.push_back(std::move(c));
  }
  return cpts;
}

UndirectedGraph skeleton_of(const Dag& dag) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < dag.num_vertices(); ++v)
    for (int p : dag.parents(v)) edges.emplace_back(p, v);
  return UndirectedGraph(dag.num_vertices(), edges);
}

Dag random_arborescence(int n, Rng& rng) {
  if (n == 1) return Dag(1, {});
  WeightedDigraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j < n; ++j)
      if (i != j) g.add_arc(i, j, 0.0);
  const std::vector<int> picked = sample_arborescence(g, 0, rng);
  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(picked.size());
  for (int id : picked) arcs.emplace_back(g.arc(id).tail, g.arc(id).head);
  return Dag(n, arcs);
}

// Grows a d-tree: a base clique, then each vertex joins a uniformly chosen
// d-clique of the current graph.
std::vector<std::pair<int, int>> grow_d_tree(int n, int d, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  const int base = std::min(d + 1, n);
  for (int i = 0; i < base; ++i)
    for (int j = i + 1; j < base; ++j) edges.emplace_back(i, j);
  if (n <= d + 1) return edges;

  std::vector<std::vector<int>> cliques;
  for (int skip = 0; skip < base; ++skip) {
    std::vector<int> c;
    for (int i = 0; i < base; ++i)
      if (i != skip) c.push_back(i);
    cliques.push_back(std::move(c));
  }
  for (int v = base; v < n; ++v) {
    const std::vector<int> host =
        cliques[size_t(rng.uniform_int(int(cliques.size())))];
    for (int u : host) edges.emplace_back(u, v);
    for (int skip : host) {
      std::vector<int> c;
      for (int u : host)
        if (u != skip) c.push_back(u);
      c.push_back(v);
      cliques.push_back(std::move(c));
    }
  }
  return edges;
}

GroundTruth finish(const InstanceParams& p, UndirectedGraph skeleton, Dag dag,
                   uint64_t seed) {
  Rng cpt_rng = Rng::substream(seed, "cpts");
  std::vector<Cpt> cpts = draw_cpts(dag, p.k, p.cpt_floor, cpt_rng);
  GroundTruth out{BayesNet(std::move(dag), std::move(cpts)),
                  std::move(skeleton), p.family, p.d, p.cpt_floor, seed};
  return out;
}

Dag uniform_orientation(const UndirectedGraph& g, int d, uint64_t seed) {
  const CliqueTree ct = build_clique_tree(g);
  const ChordalDp dp(g, ct, d);
  const auto unit = [](int, std::span<const int>) { return 0.0; };
  Rng rng = Rng::substream(seed, "orientation");
  return orientation_to_dag(g, dp.sample(unit, rng));
}

}  // namespace

GroundTruth gen_instance(const InstanceParams& p, uint64_t seed) {
  check_params(p);
  if (p.family == Family::kTree) {
    Rng rng = Rng::substream(seed, "skeleton");
    Dag dag = random_arborescence(p.n, rng);
    UndirectedGraph skeleton = skeleton_of(dag);
    return finish(p, std::move(skeleton), std::move(dag), seed);
  }
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    Rng rng = Rng::substream(seed, "skeleton", uint64_t(attempt));
    const std::vector<std::pair<int, int>> grown = grow_d_tree(p.n, p.d, rng);
    std::vector<std::pair<int, int>> kept;
    for (const auto& e : grown)
      if (rng.uniform() >= p.edge_drop) kept.push_back(e);
    UndirectedGraph g(p.n, kept);
    if (!is_chordal(g).chordal) continue;
    {
      const CliqueTree ct = build_clique_tree(g);
      const ChordalDp dp(g, ct, p.d);
      const auto unit = [](int, std::span<const int>) { return 0.0; };
      if (dp.log_total(unit) == kNegInf) continue;
    }
    Dag dag = uniform_orientation(g, p.d, seed);
    return finish(p, std::move(g), std::move(dag), seed);
  }
  throw GenerationFailedError(
      "no chordal indegree-" + std::to_string(p.d) +
      " orientable skeleton in " + std::to_string(p.max_retries) +
      " attempts");
}

GroundTruth gen_on_skeleton(const InstanceParams& p,
                            const UndirectedGraph& skeleton, uint64_t seed) {
  check_params(p);
  if (skeleton.num_vertices() != p.n)
    throw DomainError("skeleton order does not match n");
  if (p.family == Family::kTree) {
    if (skeleton.num_edges() != p.n - 1)
      throw DomainError("tree skeleton needs exactly n-1 edges");
    std::vector<std::pair<int, int>> arcs;
    std::vector<int> depth(size_t(p.n), -1);
    std::vector<int> queue{0};
    depth[0] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      const int v = queue[qi];
      for (int u : skeleton.neighbors(v))
        if (depth[size_t(u)] < 0) {
          depth[size_t(u)] = depth[size_t(v)] + 1;
          arcs.emplace_back(v, u);
          queue.push_back(u);
        }
    }
    if (int(queue.size()) != p.n)
      throw DomainError("tree skeleton is not connected");
    return finish(p, skeleton, Dag(p.n, arcs), seed);
  }
  if (!is_chordal(skeleton).chordal)
    throw NotChordalError("supplied skeleton is not chordal");
  Dag dag = uniform_orientation(skeleton, p.d, seed);
  return finish(p, skeleton, std::move(dag), seed);
}

}  // namespace bnol
