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

#include "bnol/mixture.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "bnol/errors.hpp"
#include "bnol/logspace.hpp"
#include "bnol/rng.hpp"
#include "json.hpp"

namespace bnol {

namespace {

// Every structure is rooted here; the root's marginal table is shared by
// all experts, so it cancels in the weights and reappears only in the pmf.
constexpr int kRoot = 0;

std::string digest_hex(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace

std::string family_name(Family f) {
  return f == Family::kTree ? "tree" : "chordal";
}

Family family_from_name(const std::string& name) {
  if (name == "tree") return Family::kTree;
  if (name == "chordal") return Family::kChordal;
  throw DomainError("unknown family: " + name);
}

MixtureModel MixtureModel::tree(SampleSet estimation, SampleSet online,
                                double eta, uint64_t seed) {
  if (estimation.num_vars() != online.num_vars() ||
      estimation.arity() != online.arity())
    throw DomainError("estimation and online rows have different shapes");
  if (!(eta > 0) || !std::isfinite(eta))
    throw DomainError("eta must be positive and finite");
  MixtureModel m;
  m.family_ = Family::kTree;
  m.eta_ = eta;
  m.d_ = 1;
  m.seed_ = seed;
  m.estimation_ = std::make_unique<SampleSet>(std::move(estimation));
  m.online_ = std::make_unique<SampleSet>(std::move(online));
  m.bank_ = std::make_unique<CptBank>(build_cpt_bank(*m.estimation_,
                                                     nullptr, 1));
  m.cache_ = std::make_unique<PrefixScoreCache>(*m.bank_, *m.online_);
  m.state_totals_.assign(size_t(m.online_->num_rows()) + 1,
                         std::numeric_limits<double>::quiet_NaN());
  return m;
}

MixtureModel MixtureModel::chordal(SampleSet estimation,
                                   const UndirectedGraph& skeleton, int d,
                                   SampleSet online, double eta,
                                   uint64_t seed) {
  if (estimation.num_vars() != online.num_vars() ||
      estimation.arity() != online.arity())
    throw DomainError("estimation and online rows have different shapes");
  if (skeleton.num_vertices() != online.num_vars())
    throw DomainError("skeleton order does not match the sample width");
  if (!(eta > 0) || !std::isfinite(eta))
    throw DomainError("eta must be positive and finite");
  MixtureModel m;
  m.family_ = Family::kChordal;
  m.eta_ = eta;
  m.d_ = d;
  m.seed_ = seed;
  m.estimation_ = std::make_unique<SampleSet>(std::move(estimation));
  m.online_ = std::make_unique<SampleSet>(std::move(online));
  m.skeleton_ = std::make_unique<UndirectedGraph>(skeleton);
  m.clique_tree_ =
      std::make_unique<CliqueTree>(build_clique_tree(*m.skeleton_));
  m.dp_ = std::make_unique<ChordalDp>(*m.skeleton_, *m.clique_tree_, d);
  const auto unit = [](int, std::span<const int>) { return 0.0; };
  if (m.dp_->log_total(unit) == kNegInf)
    throw NotOrientableError("no orientation meets the indegree bound");
  m.bank_ = std::make_unique<CptBank>(
      build_cpt_bank(*m.estimation_, m.skeleton_.get(), d));
  m.cache_ = std::make_unique<PrefixScoreCache>(*m.bank_, *m.online_);
  m.state_totals_.assign(size_t(m.online_->num_rows()) + 1,
                         std::numeric_limits<double>::quiet_NaN());
  return m;
}

ChordalDp::NodeWeightFn MixtureModel::state_weight(int state) const {
  return [this, state](int v, std::span<const int> in_parents) {
    return eta_ * cache_->score(v, in_parents, state);
  };
}

WeightedDigraph MixtureModel::structure_weights(int state) const {
  if (family_ != Family::kTree)
    throw DomainError("parent-arc weights exist only for the tree family");
  const int n = num_vars();
  WeightedDigraph g(n);
  std::vector<int> parent(1);
  for (int j = 0; j < n; ++j) {
    if (j == kRoot) continue;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      parent[0] = i;
      g.add_arc(i, j, eta_ * cache_->score(j, parent, state));
    }
  }
  return g;
}

double MixtureModel::log_state_total(int state) const {
  if (state < 0 || state > num_rounds())
    throw DomainError("weight state outside the online stream");
  double& slot = state_totals_[size_t(state)];
  if (std::isnan(slot)) {
    slot = family_ == Family::kTree
               ? log_arborescence_total_robust(structure_weights(state), kRoot)
               : dp_->log_total(state_weight(state));
  }
  return slot;
}

double MixtureModel::round_log_prob(int t,
                                    std::span<const int> assignment) const {
  if (t < 1 || t > num_rounds() + 1)
    throw DomainError("round outside 1..T+1");
  const int state = t - 1;
  const double denom = log_state_total(state);
  if (family_ == Family::kTree) {
    const int n = num_vars();
    WeightedDigraph g(n);
    std::vector<int> parent(1);
    for (int j = 0; j < n; ++j) {
      if (j == kRoot) continue;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        parent[0] = i;
        g.add_arc(i, j,
                  eta_ * cache_->score(j, parent, state) +
                      bank_->get(j, parent).log_prob(assignment));
      }
    }
    const double numer = log_arborescence_total_robust(g, kRoot);
    const Cpt& root = bank_->get(kRoot, std::span<const int>());
    return root.log_prob(assignment) + numer - denom;
  }
  const auto weight = [this, state,
                       assignment](int v, std::span<const int> in_parents) {
    return eta_ * cache_->score(v, in_parents, state) +
           bank_->get(v, in_parents).log_prob(assignment);
  };
  return dp_->log_total(weight) - denom;
}

double MixtureModel::log_prob(std::span<const int> assignment) const {
  const int rounds = num_rounds();
  if (rounds == 0) return round_log_prob(1, assignment);
  LogSumAccumulator acc;
  for (int t = 1; t <= rounds; ++t) acc.add(round_log_prob(t, assignment));
  return acc.log_total() - std::log(double(rounds));
}

Dag MixtureModel::sample_structure(int state, Rng& rng) const {
  if (family_ == Family::kTree) {
    const WeightedDigraph g = structure_weights(state);
    std::vector<int> picked;
    try {
      picked = sample_arborescence(g, kRoot, rng);
    } catch (const NonPositiveTotalError&) {
      // Concentrated weights break the determinant ratios; draw from the
      // explicit list instead.
      const ArborescenceSet all = enumerate_arborescences(g, kRoot);
      LogSumAccumulator acc;
      for (double lw : all.log_weights) acc.add(lw);
      const double z = acc.log_total();
      const double u = rng.uniform();
      size_t pick = all.log_weights.size() - 1;
      double cum = 0.0;
      for (size_t i = 0; i < all.log_weights.size(); ++i) {
        cum += std::exp(all.log_weights[i] - z);
        if (u < cum) {
          pick = i;
          break;
        }
      }
      picked = all.arc_ids[pick];
    }
    std::vector<std::pair<int, int>> arcs;
    arcs.reserve(picked.size());
    for (int id : picked) arcs.emplace_back(g.arc(id).tail, g.arc(id).head);
    return Dag(num_vars(), arcs);
  }
  if (state < 0 || state > num_rounds())
    throw DomainError("weight state outside the online stream");
  const PartialOrientation o = dp_->sample(state_weight(state), rng);
  return orientation_to_dag(*skeleton_, o);
}

BayesNet MixtureModel::expert_net(const Dag& dag) const {
  return net_from_bank(dag, *bank_);
}

std::vector<int> MixtureModel::sample(Rng& rng) const {
  const int rounds = num_rounds();
  const int state = rounds == 0 ? 0 : rng.uniform_int(rounds);
  const Dag dag = sample_structure(state, rng);
  return expert_net(dag).sample(rng);
}

SampleSet MixtureModel::sample_many(Rng& rng, int count) const {
  SampleSet out(num_vars(), arity());
  for (int i = 0; i < count; ++i) {
    const std::vector<int> row = sample(rng);
    out.append(row);
  }
  return out;
}

double MixtureModel::max_expert_log_likelihood(int t) const {
  if (t < 0 || t > num_rounds())
    throw DomainError("prefix length outside the online stream");
  if (family_ == Family::kTree) {
    const int n = num_vars();
    WeightedDigraph g(n);
    std::vector<int> parent(1);
    for (int j = 0; j < n; ++j) {
      if (j == kRoot) continue;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        parent[0] = i;
        g.add_arc(i, j, cache_->score(j, parent, t));
      }
    }
    double best = cache_->score(kRoot, std::span<const int>(), t);
    for (int id : max_weight_arborescence(g, kRoot))
      best += g.arc(id).log_weight;
    return best;
  }
  const auto raw = [this, t](int v, std::span<const int> in_parents) {
    return cache_->score(v, in_parents, t);
  };
  return dp_->max_orientation(raw).second;
}

std::string MixtureModel::to_json(const std::string& estimation_ref) const {
  nlohmann::ordered_json j;
  j["format"] = "mixture-1";
  j["family"] = family_name(family_);
  j["n"] = num_vars();
  j["k"] = arity();
  j["eta"] = eta_;
  j["rounds"] = num_rounds();
  j["seed"] = seed_;
  if (family_ == Family::kChordal) {
    j["d"] = d_;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const Edge& e : skeleton_->edges())
      edges.push_back({e.u + 1, e.v + 1});
    j["skeleton"] = std::move(edges);
  }
  j["estimation"] = estimation_ref;
  j["estimation_digest"] = digest_hex(estimation_->digest());
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int t = 0; t < online_->num_rows(); ++t) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int v = 0; v < num_vars(); ++v)
      row.push_back(online_->value(t, v) + 1);
    rows.push_back(std::move(row));
  }
  j["online"] = std::move(rows);
  return j.dump(2) + "\n";
}

void MixtureModel::to_file(const std::string& path,
                           const std::string& estimation_ref) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << to_json(estimation_ref);
  if (!out) throw IoError("failed writing " + path);
}

MixtureModel MixtureModel::from_json(const std::string& text,
                                     SampleSet estimation) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "mixture-1")
      throw IoError("not a mixture file");
    const Family family = family_from_name(j.at("family").get<std::string>());
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    if (estimation.num_vars() != n || estimation.arity() != k)
      throw IoError("estimation rows have the wrong shape");
    if (j.at("estimation_digest").get<std::string>() !=
        digest_hex(estimation.digest()))
      throw IoError("estimation rows do not match the stored digest");
    const double eta = j.at("eta").get<double>();
    const uint64_t seed = j.at("seed").get<uint64_t>();
    SampleSet online(n, k);
    std::vector<int> row(n);
    for (const auto& jrow : j.at("online")) {
      if (int(jrow.size()) != n) throw IoError("ragged online row");
      for (int v = 0; v < n; ++v) {
        const int cell = jrow[size_t(v)].get<int>();
        if (cell < 1 || cell > k) throw IoError("online cell out of range");
        row[size_t(v)] = cell - 1;
      }
      online.append(row);
    }
    if (family == Family::kTree)
      return tree(std::move(estimation), std::move(online), eta, seed);
    const int d = j.at("d").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& je : j.at("skeleton")) {
      if (je.size() != 2) throw IoError("malformed skeleton edge");
      edges.emplace_back(je[0].get<int>() - 1, je[1].get<int>() - 1);
    }
    const UndirectedGraph skeleton(n, edges);
    return chordal(std::move(estimation), skeleton, d, std::move(online),
                   eta, seed);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed mixture file: ") + e.what());
  } catch (const DomainError& e) {
    throw IoError(std::string("malformed mixture file: ") + e.what());
  }
}

MixtureModel MixtureModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::string ref;
  int k = 0;
  try {
    const auto j = nlohmann::json::parse(text);
    ref = j.at("estimation").get<std::string>();
    k = j.at("k").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed mixture file: ") + e.what());
  }
  std::filesystem::path est(ref);
  if (est.is_relative())
    est = std::filesystem::path(path).parent_path() / est;
  SampleSet estimation = SampleSet::from_file(est.string(), k);
  return from_json(text, std::move(estimation));
}

}  // namespace bnol
