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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "bnol/clique_tree.hpp"
#include "bnol/errors.hpp"
#include "bnol/graph.hpp"
#include "bnol/logspace.hpp"
#include "bnol/rng.hpp"
#include "doctest.h"

using namespace bnol;

namespace {

/* Chordality oracle: strip simplicial vertices until none remain. */
bool chordal_by_simplicial_elimination(const UndirectedGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const Edge& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = true;
  std::vector<bool> alive(n, true);
  for (int step = 0; step < n; ++step) {
    int found = -1;
    for (int v = 0; v < n && found < 0; ++v) {
      if (!alive[v]) continue;
      std::vector<int> nb;
      for (int w = 0; w < n; ++w)
        if (alive[w] && adj[v][w]) nb.push_back(w);
      bool simplicial = true;
      for (size_t a = 0; a < nb.size() && simplicial; ++a)
        for (size_t b = a + 1; b < nb.size(); ++b)
          if (!adj[nb[a]][nb[b]]) {
            simplicial = false;
            break;
          }
      if (simplicial) found = v;
    }
    if (found < 0) return false;
    alive[found] = false;
  }
  return true;
}

/* Orientation-count oracle: try all 2^m direction vectors. */
int count_orientations_brute(const UndirectedGraph& g,
                             const std::vector<int>& subset,
                             const PartialOrientation& fixed, int d) {
  const int f = static_cast<int>(subset.size());
  int count = 0;
  for (int mask = 0; mask < (1 << f); ++mask) {
    std::vector<std::pair<int, int>> arcs;
    bool ok = true;
    for (int i = 0; i < f && ok; ++i) {
      const Edge& e = g.edge(subset[i]);
      const EdgeDir dir =
          (mask >> i) & 1 ? EdgeDir::kBackward : EdgeDir::kForward;
      if (fixed.num_edges() > 0 && fixed.oriented(subset[i]) &&
          fixed.dir(subset[i]) != dir)
        ok = false;
      arcs.emplace_back(edge_tail(e, dir), edge_head(e, dir));
    }
    if (!ok) continue;
    std::vector<int> indeg(g.num_vertices(), 0);
    for (auto [t, h] : arcs)
      if (++indeg[h] > d) ok = false;
    if (ok && is_acyclic(g.num_vertices(), arcs)) ++count;
  }
  return count;
}

UndirectedGraph random_graph(std::mt19937& gen, int n, double p) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(gen) < p) edges.emplace_back(u, v);
  return UndirectedGraph(n, edges);
}

UndirectedGraph figure_graph() {
  // Two pendant edges hanging off a K4 that shares a triangle face.
  return UndirectedGraph(7, {{0, 1},
                             {0, 2},
                             {0, 3},
                             {0, 4},
                             {2, 3},
                             {2, 4},
                             {3, 4},
                             {3, 6},
                             {4, 6},
                             {5, 6}});
}

}  // namespace

TEST_CASE("log_add agrees with direct arithmetic and absorbs -inf") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK(log_add(kNegInf, std::log(3.0)) == doctest::Approx(std::log(3.0)));
  CHECK(log_add(std::log(3.0), kNegInf) == doctest::Approx(std::log(3.0)));
  CHECK(log_add(kNegInf, kNegInf) == kNegInf);
  CHECK(log_add(1000.0, 1000.0) ==
        doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("log_sum_exp handles extreme ranges without overflow") {
  std::vector<double> terms{-1000.0, -1000.5, -999.0};
  double direct = std::log(std::exp(-1.0) + std::exp(-1.5) + 1.0) - 999.0;
  CHECK(log_sum_exp(terms) == doctest::Approx(direct).epsilon(1e-14));

  std::vector<double> empty;
  CHECK(log_sum_exp(empty) == kNegInf);
  std::vector<double> all_zero{kNegInf, kNegInf};
  CHECK(log_sum_exp(all_zero) == kNegInf);

  LogSumAccumulator acc;
  for (double t : terms) acc.add(t);
  CHECK(acc.log_total() == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("rng streams are reproducible and substreams are tag-separated") {
  Rng a(42), b(42);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  CHECK(substream_seed(42, "cpt") != substream_seed(42, "online"));
  CHECK(substream_seed(42, "cpt", 0) != substream_seed(42, "cpt", 1));
  CHECK(substream_seed(42, "cpt", 3) == substream_seed(42, "cpt", 3));
}

TEST_CASE("uniform_int stays in range and is roughly uniform") {
  Rng rng(7);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) {
    int x = rng.uniform_int(6);
    REQUIRE(x >= 0);
    REQUIRE(x < 6);
    ++hist[x];
  }
  for (int c : hist) {
    CHECK(c > 9500);
    CHECK(c < 10500);
  }
}

TEST_CASE("categorical_from_log matches the target distribution") {
  Rng rng(11);
  std::vector<double> logs{std::log(0.2), std::log(0.3), std::log(0.5)};
  std::vector<int> hist(3, 0);
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) ++hist[rng.categorical_from_log(logs)];
  CHECK(std::abs(hist[0] / double(trials) - 0.2) < 0.01);
  CHECK(std::abs(hist[1] / double(trials) - 0.3) < 0.01);
  CHECK(std::abs(hist[2] / double(trials) - 0.5) < 0.01);

  std::vector<double> with_zero{kNegInf, 0.0, kNegInf};
  for (int i = 0; i < 100; ++i)
    CHECK(rng.categorical_from_log(with_zero) == 1);

  std::vector<double> degenerate{kNegInf, kNegInf};
  CHECK_THROWS_AS((void)rng.categorical_from_log(degenerate),
                  std::invalid_argument);
}

TEST_CASE("graph construction normalizes, deduplicates, and validates") {
  UndirectedGraph g(4, {{2, 0}, {0, 2}, {1, 3}, {0, 1}});
  CHECK(g.num_vertices() == 4);
  CHECK(g.num_edges() == 3);
  CHECK(g.edge(0).u == 0);
  CHECK(g.edge(0).v == 1);
  CHECK(g.has_edge(2, 0));
  CHECK(g.edge_id(0, 2) == 1);
  CHECK(g.edge_id(2, 3) == -1);
  CHECK(g.degree(0) == 2);
  CHECK(g.neighbors(3) == std::vector<int>{1});
  CHECK(g.incident_edges(0) == std::vector<int>{0, 1});

  CHECK_THROWS_AS(UndirectedGraph(3, {{1, 1}}), DomainError);
  CHECK_THROWS_AS(UndirectedGraph(3, {{0, 3}}), DomainError);
}

TEST_CASE("graph text round-trips and rejects malformed input") {
  std::istringstream in("3 2\n1 2\n2 3\n");
  UndirectedGraph g = UndirectedGraph::from_text(in);
  CHECK(g.num_vertices() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));

  std::ostringstream out;
  g.to_text(out);
  std::istringstream back(out.str());
  UndirectedGraph g2 = UndirectedGraph::from_text(back);
  CHECK(g2.edges().size() == g.edges().size());
  for (int i = 0; i < g.num_edges(); ++i) {
    CHECK(g2.edge(i).u == g.edge(i).u);
    CHECK(g2.edge(i).v == g.edge(i).v);
  }

  std::istringstream bad_count("3 2\n1 2\n");
  CHECK_THROWS_AS(UndirectedGraph::from_text(bad_count), IoError);
  std::istringstream bad_vertex("2 1\n1 3\n");
  CHECK_THROWS_AS(UndirectedGraph::from_text(bad_vertex), IoError);
  std::istringstream bad_header("0 0\n");
  CHECK_THROWS_AS(UndirectedGraph::from_text(bad_header), IoError);
}

TEST_CASE("connected components are reported sorted") {
  UndirectedGraph g(5, {{0, 1}, {3, 4}});
  CHECK_FALSE(g.is_connected());
  auto comps = g.connected_components();
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<int>{0, 1});
  CHECK(comps[1] == std::vector<int>{2});
  CHECK(comps[2] == std::vector<int>{3, 4});
}

TEST_CASE("dag exposes parents, children, and topological order") {
  Dag d(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  CHECK(d.is_acyclic());
  CHECK(d.parents(3) == std::vector<int>{1, 2});
  CHECK(d.children(0) == std::vector<int>{1, 2});
  CHECK(d.max_indegree() == 2);
  auto topo = d.topological_order();
  REQUIRE(topo.has_value());
  std::vector<int> pos(4);
  for (int i = 0; i < 4; ++i) pos[(*topo)[i]] = i;
  for (auto [p, c] : d.arcs()) CHECK(pos[p] < pos[c]);

  Dag cyc(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK_FALSE(cyc.is_acyclic());
  CHECK_FALSE(cyc.topological_order().has_value());
  CHECK_THROWS_AS(Dag(3, {{0, 1}, {0, 1}}), DomainError);
}

TEST_CASE("orientation text lists arcs tail first in edge order") {
  UndirectedGraph g(3, {{0, 1}, {1, 2}});
  PartialOrientation o(2);
  o.set(0, EdgeDir::kForward);
  o.set(1, EdgeDir::kBackward);
  std::ostringstream out;
  orientation_to_text(g, o, out);
  CHECK(out.str() == "1 2\n3 2\n");

  Dag d = orientation_to_dag(g, o);
  CHECK(d.parents(1) == std::vector<int>{0, 2});
  PartialOrientation partial(2);
  partial.set(0, EdgeDir::kForward);
  CHECK_THROWS_AS(orientation_to_dag(g, partial), DomainError);
}

TEST_CASE("bounded-indegree acyclic orientation counts match brute force") {
  UndirectedGraph path3(3, {{0, 1}, {1, 2}});
  UndirectedGraph k3(3, {{0, 1}, {0, 2}, {1, 2}});
  std::vector<int> all_path{0, 1};
  std::vector<int> all_k3{0, 1, 2};
  PartialOrientation none;
  CHECK(enumerate_orientations(path3, all_path, none, 1).size() == 3);
  CHECK(enumerate_orientations(k3, all_k3, none, 1).size() == 0);
  CHECK(enumerate_orientations(k3, all_k3, none, 2).size() == 6);

  std::mt19937 gen(123);
  for (int trial = 0; trial < 40; ++trial) {
    UndirectedGraph g = random_graph(gen, 5, 0.6);
    std::vector<int> subset;
    for (int id = 0; id < g.num_edges(); ++id)
      if (gen() % 4 != 0) subset.push_back(id);
    PartialOrientation fixed(g.num_edges());
    for (int id : subset)
      if (gen() % 3 == 0)
        fixed.set(id, gen() % 2 ? EdgeDir::kBackward : EdgeDir::kForward);
    const int d = 1 + int(gen() % 3);
    auto got = enumerate_orientations(g, subset, fixed, d);
    CHECK(int(got.size()) == count_orientations_brute(g, subset, fixed, d));
    for (const auto& o : got) {
      CHECK(o.num_oriented() == int(subset.size()));
      for (int id : subset) CHECK(o.oriented(id));
    }
  }
}

TEST_CASE("orientation enumeration is lexicographic and honors the cap") {
  UndirectedGraph g(3, {{0, 1}, {1, 2}});
  PartialOrientation none;
  auto all = enumerate_orientations(g, std::vector<int>{0, 1}, none, 2);
  REQUIRE(all.size() == 4);
  CHECK(all[0].dir(0) == EdgeDir::kForward);
  CHECK(all[0].dir(1) == EdgeDir::kForward);
  CHECK(all[1].dir(0) == EdgeDir::kForward);
  CHECK(all[1].dir(1) == EdgeDir::kBackward);
  CHECK(all[3].dir(0) == EdgeDir::kBackward);
  CHECK(all[3].dir(1) == EdgeDir::kBackward);

  CHECK_THROWS_AS(
      enumerate_orientations(g, std::vector<int>{0, 1}, none, 2, 2),
      TooLargeError);
  PartialOrientation wrong_size(5);
  CHECK_THROWS_AS(
      enumerate_orientations(g, std::vector<int>{0, 1}, wrong_size, 2),
      DomainError);
}

TEST_CASE("chordality verdicts match simplicial elimination on small graphs") {
  CHECK(is_chordal(UndirectedGraph(3, {{0, 1}, {1, 2}})).chordal);
  CHECK(is_chordal(UndirectedGraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3},
                                       {2, 3}}))
            .chordal);
  CHECK_FALSE(
      is_chordal(UndirectedGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})).chordal);
  CHECK_FALSE(
      is_chordal(UndirectedGraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}))
          .chordal);

  std::mt19937 gen(99);
  for (int trial = 0; trial < 300; ++trial) {
    UndirectedGraph g = random_graph(gen, 3 + int(gen() % 5), 0.5);
    CHECK(is_chordal(g).chordal == chordal_by_simplicial_elimination(g));
  }
}

TEST_CASE("a returned elimination order is perfect") {
  std::mt19937 gen(17);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    UndirectedGraph g = random_graph(gen, 6, 0.5);
    auto res = is_chordal(g);
    if (!res.chordal) continue;
    ++checked;
    REQUIRE(int(res.peo.size()) == g.num_vertices());
    std::vector<int> pos(g.num_vertices());
    for (int i = 0; i < g.num_vertices(); ++i) pos[res.peo[i]] = i;
    for (int i = 0; i < g.num_vertices(); ++i) {
      const int v = res.peo[i];
      std::vector<int> later;
      for (int w : g.neighbors(v))
        if (pos[w] > i) later.push_back(w);
      for (size_t a = 0; a < later.size(); ++a)
        for (size_t b = a + 1; b < later.size(); ++b)
          CHECK(g.has_edge(later[a], later[b]));
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("clique tree of a path chains the edge cliques") {
  UndirectedGraph g(3, {{0, 1}, {1, 2}});
  CliqueTree ct = build_clique_tree(g);
  REQUIRE(ct.num_cliques() == 2);
  CHECK(ct.node(0).vertices == std::vector<int>{0, 1});
  CHECK(ct.node(1).vertices == std::vector<int>{1, 2});
  CHECK(ct.roots() == std::vector<int>{0});
  CHECK(ct.node(1).parent == 0);
  CHECK(ct.node(1).separator == std::vector<int>{1});
  CHECK(ct.node(0).subtree_vertices == std::vector<int>{0, 1, 2});
  CHECK(ct.node(0).link_edges == std::vector<int>{0, 1});
  CHECK(ct.node(1).link_edges == std::vector<int>{1});
  std::string why;
  CHECK(is_valid_clique_tree(g, ct, &why));
}

TEST_CASE("clique tree of a complete graph is a single node") {
  UndirectedGraph g(4,
                    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CliqueTree ct = build_clique_tree(g);
  REQUIRE(ct.num_cliques() == 1);
  CHECK(ct.node(0).vertices == std::vector<int>{0, 1, 2, 3});
  CHECK(ct.node(0).link_edges.size() == 6);
  CHECK(is_valid_clique_tree(g, ct));
}

TEST_CASE("clique tree of the two-pendant figure graph") {
  UndirectedGraph g = figure_graph();
  CliqueTree ct = build_clique_tree(g);
  REQUIRE(ct.num_cliques() == 4);
  CHECK(ct.node(0).vertices == std::vector<int>{0, 1});
  CHECK(ct.node(1).vertices == std::vector<int>{0, 2, 3, 4});
  CHECK(ct.node(2).vertices == std::vector<int>{3, 4, 6});
  CHECK(ct.node(3).vertices == std::vector<int>{5, 6});
  CHECK(ct.roots() == std::vector<int>{0});
  CHECK(ct.node(1).parent == 0);
  CHECK(ct.node(1).separator == std::vector<int>{0});
  CHECK(ct.node(2).parent == 1);
  CHECK(ct.node(2).separator == std::vector<int>{3, 4});
  CHECK(ct.node(3).parent == 2);
  CHECK(ct.node(3).separator == std::vector<int>{6});
  CHECK(is_valid_clique_tree(g, ct));

  CliqueTree re = build_clique_tree(g, 2);
  CHECK(re.roots() == std::vector<int>{2});
  CHECK(re.node(2).parent == -1);
  CHECK(is_valid_clique_tree(g, re));
}

TEST_CASE("clique forest handles disconnected graphs") {
  UndirectedGraph g(5, {{0, 1}, {3, 4}});
  CliqueTree ct = build_clique_tree(g);
  REQUIRE(ct.num_cliques() == 3);
  CHECK(ct.roots().size() == 3);
  CHECK(is_valid_clique_tree(g, ct));
  CHECK(ct.topo_order().size() == 3);
}

TEST_CASE("clique trees of random chordal graphs pass the validity oracle") {
  std::mt19937 gen(2024);
  int built = 0;
  for (int trial = 0; trial < 400 && built < 60; ++trial) {
    UndirectedGraph g = random_graph(gen, 3 + int(gen() % 5), 0.45);
    if (!chordal_by_simplicial_elimination(g)) {
      CHECK_THROWS_AS(build_clique_tree(g), NotChordalError);
      continue;
    }
    ++built;
    CliqueTree ct = build_clique_tree(g);
    std::string why;
    const bool valid = is_valid_clique_tree(g, ct, &why);
    CHECK_MESSAGE(valid, why);

    // Parents precede children in topo order and subtree sets nest.
    std::vector<int> seen_at(ct.num_cliques(), -1);
    const auto& topo = ct.topo_order();
    for (size_t i = 0; i < topo.size(); ++i) seen_at[topo[i]] = int(i);
    for (int c = 0; c < ct.num_cliques(); ++c) {
      REQUIRE(seen_at[c] >= 0);
      if (ct.node(c).parent >= 0)
        CHECK(seen_at[ct.node(c).parent] < seen_at[c]);
      for (int child : ct.node(c).children) {
        const auto& sub = ct.node(child).subtree_vertices;
        const auto& sup = ct.node(c).subtree_vertices;
        CHECK(std::includes(sup.begin(), sup.end(), sub.begin(), sub.end()));
      }
    }
  }
  CHECK(built >= 60);
}
