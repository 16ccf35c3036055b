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

#include "bnol/chordal_dp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnol/errors.hpp"
#include "bnol/logspace.hpp"
#include "bnol/rng.hpp"

namespace bnol {

namespace {

constexpr double kTieWindow = 1e-12;

uint64_t restrict_mask(const PartialOrientation& o,
                       const std::vector<int>& link,
                       const std::vector<int>& positions) {
  uint64_t mask = 0;
  for (size_t i = 0; i < positions.size(); ++i)
    if (o.dir(link[positions[i]]) == EdgeDir::kBackward)
      mask |= uint64_t{1} << i;
  return mask;
}

}  // namespace

ChordalDp::ChordalDp(const UndirectedGraph& g, const CliqueTree& ct, int d,
                     int link_cap)
    : g_(&g), ct_(&ct), d_(d) {
  if (d < 0) throw DomainError("negative indegree bound");
  const int m = ct.num_cliques();
  cliques_.resize(m);
  const PartialOrientation no_fixed;

  for (int c = 0; c < m; ++c) {
    const CliqueNode& node = ct.node(c);
    CliqueData& data = cliques_[c];
    data.link = node.link_edges;
    if (int(data.link.size()) > link_cap)
      throw TooLargeError("clique link has " +
                          std::to_string(data.link.size()) +
                          " edges, cap " + std::to_string(link_cap));
    data.cands =
        enumerate_orientations(g, data.link, no_fixed, d, uint64_t{1} << 24);

    // In-neighbor lists for the clique's own vertices; the link holds every
    // edge of the subtree graph that touches them.
    std::vector<int> pos_in_clique(g.num_vertices(), -1);
    for (size_t vi = 0; vi < node.vertices.size(); ++vi)
      pos_in_clique[node.vertices[vi]] = int(vi);
    data.in_sets.resize(data.cands.size());
    for (size_t ci = 0; ci < data.cands.size(); ++ci) {
      auto& per_vertex = data.in_sets[ci];
      per_vertex.assign(node.vertices.size(), {});
      for (int id : data.link) {
        const Edge& e = g_->edge(id);
        const EdgeDir dir = data.cands[ci].dir(id);
        const int head = edge_head(e, dir);
        if (pos_in_clique[head] >= 0)
          per_vertex[pos_in_clique[head]].push_back(edge_tail(e, dir));
      }
      for (auto& s : per_vertex) std::sort(s.begin(), s.end());
    }
  }

  // Child message structure: shared edges are those present in both links,
  // always ordered by ascending edge id on both sides.
  for (int c = 0; c < m; ++c) {
    const CliqueNode& node = ct.node(c);
    CliqueData& data = cliques_[c];
    const int nc = int(node.children.size());
    data.shared_parent_pos.resize(nc);
    data.shared_child_pos.resize(nc);
    data.groups.resize(nc);
    data.sep_pos.resize(nc);
    for (int j = 0; j < nc; ++j) {
      const int ch = node.children[j];
      const CliqueData& cdata = cliques_[ch];
      size_t a = 0, b = 0;
      while (a < data.link.size() && b < cdata.link.size()) {
        if (data.link[a] < cdata.link[b]) {
          ++a;
        } else if (data.link[a] > cdata.link[b]) {
          ++b;
        } else {
          data.shared_parent_pos[j].push_back(int(a));
          data.shared_child_pos[j].push_back(int(b));
          ++a;
          ++b;
        }
      }
      for (size_t ci = 0; ci < cdata.cands.size(); ++ci)
        data.groups[j][restrict_mask(cdata.cands[ci], cdata.link,
                                     data.shared_child_pos[j])]
            .push_back(int(ci));

      const CliqueNode& cnode = ct.node(ch);
      for (int v : cnode.separator) {
        const auto it = std::lower_bound(cnode.vertices.begin(),
                                         cnode.vertices.end(), v);
        data.sep_pos[j].push_back(int(it - cnode.vertices.begin()));
      }
    }
    data.cand_child_mask.resize(data.cands.size());
    for (size_t ci = 0; ci < data.cands.size(); ++ci) {
      data.cand_child_mask[ci].resize(nc);
      for (int j = 0; j < nc; ++j)
        data.cand_child_mask[ci][j] = restrict_mask(
            data.cands[ci], data.link, data.shared_parent_pos[j]);
    }
  }
}

double ChordalDp::group_message(const std::vector<double>& child_table,
                                const std::vector<int>& group,
                                bool use_max) const {
  if (use_max) {
    double best = kNegInf;
    for (int ci : group) best = std::max(best, child_table[ci]);
    return best;
  }
  LogSumAccumulator acc;
  for (int ci : group) acc.add(child_table[ci]);
  return acc.log_total();
}

double ChordalDp::sep_correction(const NodeWeightFn& weight, int child,
                                 const std::vector<int>& sep_pos,
                                 int representative_cand) const {
  const CliqueNode& cnode = ct_->node(child);
  const auto& in_sets = cliques_[child].in_sets[representative_cand];
  double total = 0.0;
  for (int p : sep_pos) total += weight(cnode.vertices[p], in_sets[p]);
  return total;
}

std::vector<std::vector<double>> ChordalDp::compute_tables(
    const NodeWeightFn& weight, bool use_max) const {
  const int m = ct_->num_cliques();
  std::vector<std::vector<double>> tables(m);
  const auto& topo = ct_->topo_order();

  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int c = *it;
    const CliqueNode& node = ct_->node(c);
    const CliqueData& data = cliques_[c];
    const int nc = int(node.children.size());

    // Messages from each child, keyed by the shared-edge pattern. The
    // separator vertices' weights are functions of that pattern alone, so
    // one representative candidate prices the correction.
    std::vector<std::map<uint64_t, double>> msgs(nc);
    for (int j = 0; j < nc; ++j) {
      const int ch = node.children[j];
      for (const auto& [mask, group] : data.groups[j]) {
        const double raw = group_message(tables[ch], group, use_max);
        msgs[j][mask] =
            raw == kNegInf
                ? kNegInf
                : raw - sep_correction(weight, ch, data.sep_pos[j],
                                       group.front());
      }
    }

    tables[c].assign(data.cands.size(), kNegInf);
    for (size_t ci = 0; ci < data.cands.size(); ++ci) {
      double val = 0.0;
      for (size_t vi = 0; vi < node.vertices.size(); ++vi)
        val += weight(node.vertices[vi], data.in_sets[ci][vi]);
      for (int j = 0; j < nc && val != kNegInf; ++j) {
        const auto found = msgs[j].find(data.cand_child_mask[ci][j]);
        val = found == msgs[j].end() || found->second == kNegInf
                  ? kNegInf
                  : val + found->second;
      }
      tables[c][ci] = val;
    }
  }
  return tables;
}

double ChordalDp::log_total(const NodeWeightFn& weight) const {
  const auto tables = compute_tables(weight, false);
  double total = 0.0;
  for (int r : ct_->roots()) {
    const double comp = log_sum_exp(tables[r]);
    if (comp == kNegInf) return kNegInf;
    total += comp;
  }
  return total;
}

PartialOrientation ChordalDp::sample(const NodeWeightFn& weight,
                                     Rng& rng) const {
  const auto tables = compute_tables(weight, false);
  PartialOrientation out(g_->num_edges());

  std::vector<std::pair<int, int>> stack;  // clique, chosen candidate
  for (int r : ct_->roots()) {
    if (log_sum_exp(tables[r]) == kNegInf)
      throw NotOrientableError("no orientation satisfies the bound");
    stack.emplace_back(r, rng.categorical_from_log(tables[r]));
  }
  while (!stack.empty()) {
    const auto [c, ci] = stack.back();
    stack.pop_back();
    const CliqueData& data = cliques_[c];
    for (int id : data.link) out.set(id, data.cands[ci].dir(id));
    const CliqueNode& node = ct_->node(c);
    for (size_t j = 0; j < node.children.size(); ++j) {
      const auto& group = data.groups[j].at(data.cand_child_mask[ci][j]);
      std::vector<double> option_logs(group.size());
      for (size_t gi = 0; gi < group.size(); ++gi)
        option_logs[gi] = tables[node.children[j]][group[gi]];
      const int pick = rng.categorical_from_log(option_logs);
      stack.emplace_back(node.children[j], group[pick]);
    }
  }
  return out;
}

int ChordalDp::argmax_in_group(const std::vector<double>& child_table,
                               const std::vector<int>& group) const {
  double best = kNegInf;
  for (int ci : group) best = std::max(best, child_table[ci]);
  if (best == kNegInf) return -1;
  // Candidates are enumerated in lexicographic direction order, so the
  // first one inside the tie window is the smallest vector.
  for (int ci : group)
    if (child_table[ci] >= best - kTieWindow) return ci;
  return -1;
}

std::pair<PartialOrientation, double> ChordalDp::max_orientation(
    const NodeWeightFn& weight) const {
  const auto tables = compute_tables(weight, true);
  PartialOrientation out(g_->num_edges());
  double total = 0.0;

  std::vector<std::pair<int, int>> stack;
  for (int r : ct_->roots()) {
    std::vector<int> everyone(tables[r].size());
    for (size_t i = 0; i < everyone.size(); ++i) everyone[i] = int(i);
    const int pick = argmax_in_group(tables[r], everyone);
    if (pick < 0)
      throw NotOrientableError("no orientation satisfies the bound");
    total += tables[r][pick];
    stack.emplace_back(r, pick);
  }
  while (!stack.empty()) {
    const auto [c, ci] = stack.back();
    stack.pop_back();
    const CliqueData& data = cliques_[c];
    for (int id : data.link) out.set(id, data.cands[ci].dir(id));
    const CliqueNode& node = ct_->node(c);
    for (size_t j = 0; j < node.children.size(); ++j) {
      const auto& group = data.groups[j].at(data.cand_child_mask[ci][j]);
      const int pick = argmax_in_group(tables[node.children[j]], group);
      if (pick < 0)
        throw NumericIntegrityError("maximization tables are inconsistent");
      stack.emplace_back(node.children[j], pick);
    }
  }
  return {out, total};
}

double log_count_orientations(const UndirectedGraph& g, int d,
                              int forced_root) {
  if (g.num_vertices() == 0) return 0.0;
  const CliqueTree ct = build_clique_tree(g, forced_root);
  const ChordalDp dp(g, ct, d);
  return dp.log_total([](int, std::span<const int>) { return 0.0; });
}

}  // namespace bnol
