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

#include "bnol/arborescence.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bnol/errors.hpp"
#include "bnol/logspace.hpp"
#include "bnol/rng.hpp"

namespace bnol {

WeightedDigraph::WeightedDigraph(int num_vertices) : n_(num_vertices) {
  if (num_vertices < 1) throw DomainError("digraph needs a vertex");
}

int WeightedDigraph::add_arc(int tail, int head, double log_weight) {
  if (tail < 0 || tail >= n_ || head < 0 || head >= n_)
    throw DomainError("arc endpoint out of range");
  if (tail == head) throw DomainError("self-loop");
  if (!std::isfinite(log_weight)) throw DomainError("arc weight must be finite");
  arcs_.push_back(Arc{tail, head, log_weight});
  return int(arcs_.size()) - 1;
}

namespace {

struct IdArc {
  int tail, head, id;
  double log_weight;
};

// Reduced in-weight Laplacian determinant over an explicit arc list, with
// per-column log rescaling. -inf marks a structural zero.
double log_total_of(int n, const std::vector<IdArc>& arcs, int root,
                    int skip_index) {
  if (n == 1) return 0.0;

  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < int(arcs.size()); ++i) {
    if (i == skip_index) continue;
    out[arcs[i].tail].push_back(i);
  }
  std::vector<bool> reach(n, false);
  std::vector<int> queue{root};
  reach[root] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi)
    for (int ai : out[queue[qi]]) {
      const int h = arcs[ai].head;
      if (!reach[h]) {
        reach[h] = true;
        queue.push_back(h);
      }
    }
  for (int v = 0; v < n; ++v)
    if (!reach[v]) return kNegInf;

  // Column j collects the in-arcs of vertex j; scale each column by its
  // largest in-weight so entries stay near unit magnitude.
  std::vector<double> col_max(n, kNegInf);
  for (int i = 0; i < int(arcs.size()); ++i) {
    if (i == skip_index) continue;
    col_max[arcs[i].head] = std::max(col_max[arcs[i].head], arcs[i].log_weight);
  }

  std::vector<int> col_of(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (v != root) col_of[v] = m++;

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  double log_correction = 0.0;
  for (int v = 0; v < n; ++v)
    if (v != root) log_correction += col_max[v];
  for (int i = 0; i < int(arcs.size()); ++i) {
    if (i == skip_index) continue;
    const IdArc& a = arcs[i];
    if (a.head == root) continue;
    const double w = std::exp(a.log_weight - col_max[a.head]);
    const int col = col_of[a.head];
    L(col, col) += w;
    if (a.tail != root) L(col_of[a.tail], col) -= w;
  }

  // LU roundoff is absolute in the scaled matrix, so a scaled total below
  // 1e-9 is indistinguishable from cancellation noise.
  const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(L).determinant();
  if (!std::isfinite(det) || det <= 1e-9)
    throw NonPositiveTotalError(
        "arborescence total degenerated (scaled determinant " +
        std::to_string(det) + ")");
  return log_correction + std::log(det);
}

std::vector<IdArc> id_arcs(const WeightedDigraph& g) {
  std::vector<IdArc> arcs;
  arcs.reserve(g.num_arcs());
  for (int i = 0; i < g.num_arcs(); ++i) {
    const Arc& a = g.arc(i);
    arcs.push_back(IdArc{a.tail, a.head, i, a.log_weight});
  }
  return arcs;
}

void check_root(const WeightedDigraph& g, int root) {
  if (root < 0 || root >= g.num_vertices())
    throw DomainError("root out of range");
}

// Probability that the arc at `index` is absent from a weighted random
// arborescence of the arc list.
double exclusion_prob(int n, const std::vector<IdArc>& arcs, int root,
                      int index) {
  const double with_all = log_total_of(n, arcs, root, -1);
  if (with_all == kNegInf)
    throw NoArborescenceError("no arborescence from the root");
  const double without = log_total_of(n, arcs, root, index);
  double p = without == kNegInf ? 0.0 : std::exp(without - with_all);
  if (p < -1e-9 || p > 1.0 + 1e-9)
    throw NumericIntegrityError("arc exclusion probability " +
                                std::to_string(p) + " outside [0,1]");
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double log_arborescence_total(const WeightedDigraph& g, int root) {
  check_root(g, root);
  return log_total_of(g.num_vertices(), id_arcs(g), root, -1);
}

double arc_inclusion_prob(const WeightedDigraph& g, int root, int arc_id) {
  check_root(g, root);
  if (arc_id < 0 || arc_id >= g.num_arcs())
    throw DomainError("arc id out of range");
  return 1.0 - exclusion_prob(g.num_vertices(), id_arcs(g), root, arc_id);
}

std::vector<int> sample_arborescence(const WeightedDigraph& g, int root,
                                     Rng& rng) {
  check_root(g, root);
  const int n = g.num_vertices();
  if (log_arborescence_total(g, root) == kNegInf)
    throw NoArborescenceError("no arborescence from the root");

  std::vector<bool> absorbed(n, false);
  absorbed[root] = true;
  int num_absorbed = 1;
  std::vector<IdArc> arcs = id_arcs(g);
  std::vector<int> chosen;
  chosen.reserve(n - 1);

  while (num_absorbed < n) {
    // Compact view: absorbed component becomes vertex 0.
    std::vector<int> label(n, -1);
    int next = 1;
    for (int v = 0; v < n; ++v) label[v] = absorbed[v] ? 0 : next++;
    std::vector<IdArc> compact;
    compact.reserve(arcs.size());
    for (const IdArc& a : arcs)
      compact.push_back(
          IdArc{label[a.tail], label[a.head], a.id, a.log_weight});

    // Resolve the lowest (head, id) arc leaving the component.
    int pick = -1;
    for (int i = 0; i < int(compact.size()); ++i) {
      if (compact[i].tail != 0 || compact[i].head == 0) continue;
      if (pick < 0 ||
          std::pair(arcs[i].head, arcs[i].id) <
              std::pair(arcs[pick].head, arcs[pick].id))
        pick = i;
    }
    if (pick < 0) throw NoArborescenceError("root component has no exit");

    const double p_out = exclusion_prob(next, compact, 0, pick);
    if (rng.uniform() < p_out) {
      arcs.erase(arcs.begin() + pick);
    } else {
      chosen.push_back(arcs[pick].id);
      absorbed[arcs[pick].head] = true;
      ++num_absorbed;
      std::vector<IdArc> kept;
      kept.reserve(arcs.size());
      for (const IdArc& a : arcs)
        if (!absorbed[a.head]) kept.push_back(a);
      arcs = std::move(kept);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

// Cycle-contraction step; returns indices into `arcs` forming the optimum.
std::vector<int> solve_max(int n, int root, const std::vector<IdArc>& arcs) {
  std::vector<int> best_in(n, -1);
  for (int i = 0; i < int(arcs.size()); ++i) {
    const IdArc& a = arcs[i];
    if (a.head == root) continue;
    if (best_in[a.head] < 0 ||
        a.log_weight > arcs[best_in[a.head]].log_weight)
      best_in[a.head] = i;
  }
  for (int v = 0; v < n; ++v)
    if (v != root && best_in[v] < 0)
      throw NoArborescenceError("vertex has no incoming arc");

  // Walk tail pointers to find a cycle among the chosen in-arcs.
  std::vector<int> state(n, 0);
  std::vector<int> cycle;
  for (int v = 0; v < n && cycle.empty(); ++v) {
    int x = v;
    std::vector<int> path;
    while (x != root && state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = arcs[best_in[x]].tail;
    }
    if (x != root && state[x] == 1) {
      auto it = std::find(path.begin(), path.end(), x);
      cycle.assign(it, path.end());
    }
    for (int y : path) state[y] = 2;
  }

  if (cycle.empty()) {
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
      if (v != root) out.push_back(best_in[v]);
    return out;
  }

  std::vector<bool> in_cycle(n, false);
  for (int v : cycle) in_cycle[v] = true;
  std::vector<int> label(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (!in_cycle[v]) label[v] = next++;
  const int cyc = next++;
  for (int v : cycle) label[v] = cyc;

  std::vector<IdArc> sub;
  std::vector<int> src;       // index into arcs
  std::vector<int> entered;   // original head when the arc enters the cycle
  for (int i = 0; i < int(arcs.size()); ++i) {
    const IdArc& a = arcs[i];
    const int t = label[a.tail], h = label[a.head];
    if (t == h) continue;
    double w = a.log_weight;
    if (h == cyc) w -= arcs[best_in[a.head]].log_weight;
    sub.push_back(IdArc{t, h, a.id, w});
    src.push_back(i);
    entered.push_back(h == cyc ? a.head : -1);
  }

  std::vector<int> rec = solve_max(next, label[root], sub);
  std::vector<int> out;
  int cycle_entry = -1;
  for (int i : rec) {
    out.push_back(src[i]);
    if (entered[i] >= 0) cycle_entry = entered[i];
  }
  for (int v : cycle)
    if (v != cycle_entry) out.push_back(best_in[v]);
  return out;
}

}  // namespace

std::vector<int> max_weight_arborescence(const WeightedDigraph& g, int root) {
  check_root(g, root);
  if (g.num_vertices() == 1) return {};
  std::vector<int> ids = solve_max(g.num_vertices(), root, id_arcs(g));
  std::sort(ids.begin(), ids.end());
  return ids;
}

ArborescenceSet enumerate_arborescences(const WeightedDigraph& g, int root,
                                        uint64_t cap) {
  check_root(g, root);
  const int n = g.num_vertices();
  ArborescenceSet out;
  std::vector<std::vector<int>> incoming(static_cast<size_t>(n));
  for (int id = 0; id < g.num_arcs(); ++id) {
    const Arc& a = g.arc(id);
    if (a.head != root && a.log_weight != kNegInf)
      incoming[size_t(a.head)].push_back(id);
  }
  std::vector<int> heads;
  uint64_t combos = 1;
  for (int v = 0; v < n; ++v) {
    if (v == root) continue;
    if (incoming[size_t(v)].empty()) return out;
    heads.push_back(v);
    if (combos > cap / incoming[size_t(v)].size())
      throw TooLargeError("arborescence enumeration needs more than " +
                          std::to_string(cap) + " combinations");
    combos *= incoming[size_t(v)].size();
  }
  if (heads.empty()) {
    out.arc_ids.push_back({});
    out.log_weights.push_back(0.0);
    return out;
  }
  std::vector<int> choice(heads.size(), 0);
  std::vector<char> seen(static_cast<size_t>(n));
  std::vector<int> stack;
  while (true) {
    double lw = 0.0;
    std::vector<std::vector<int>> children(static_cast<size_t>(n));
    std::vector<int> ids;
    ids.reserve(heads.size());
    for (size_t h = 0; h < heads.size(); ++h) {
      const int id = incoming[size_t(heads[h])][size_t(choice[h])];
      ids.push_back(id);
      lw += g.arc(id).log_weight;
      children[size_t(g.arc(id).tail)].push_back(g.arc(id).head);
    }
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, root);
    seen[size_t(root)] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int c : children[size_t(v)])
        if (!seen[size_t(c)]) {
          seen[size_t(c)] = 1;
          ++reached;
          stack.push_back(c);
        }
    }
    if (reached == n) {
      out.arc_ids.push_back(std::move(ids));
      out.log_weights.push_back(lw);
    }
    size_t pos = heads.size();
    while (pos > 0 && ++choice[pos - 1] ==
                          int(incoming[size_t(heads[pos - 1])].size())) {
      choice[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return out;
}

double log_arborescence_total_robust(const WeightedDigraph& g, int root,
                                     uint64_t cap) {
  try {
    return log_arborescence_total(g, root);
  } catch (const NonPositiveTotalError&) {
    const ArborescenceSet all = enumerate_arborescences(g, root, cap);
    LogSumAccumulator acc;
    for (double lw : all.log_weights) acc.add(lw);
    return acc.log_total();
  }
}

}  // namespace bnol
