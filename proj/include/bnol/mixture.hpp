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

#ifndef BNOL_MIXTURE_HPP
#define BNOL_MIXTURE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bnol/arborescence.hpp"
#include "bnol/bayes_net.hpp"
#include "bnol/chordal_dp.hpp"
#include "bnol/clique_tree.hpp"
#include "bnol/cpt.hpp"
#include "bnol/graph.hpp"
#include "bnol/samples.hpp"

namespace bnol {

class Rng;

enum class Family { kTree, kChordal };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Exponentially weighted mixture over structure experts. Each expert is a
// directed model built from the shared add-one tables: the tree family
// ranges over spanning arborescences of the complete graph rooted at vertex
// 0, the chordal family over acyclic orientations of a fixed skeleton with
// indegree at most d. After t online rows the weight of expert E is
// exp(eta * sum of log E(x) over those rows).
//
// As a Distribution this is the round average (1/T) sum_t of the round-t
// predictives, each of which mixes the experts by their weights at state
// t-1. All pmf values are exact: a weighted-arborescence total or a clique
// tree pass for the numerator and one more for the normalizer.
class MixtureModel : public Distribution {
 public:
  static MixtureModel tree(SampleSet estimation, SampleSet online, double eta,
                           uint64_t seed);
  // Throws NotChordalError for a non-chordal skeleton and NotOrientableError
  // when no orientation meets the indegree bound.
  static MixtureModel chordal(SampleSet estimation,
                              const UndirectedGraph& skeleton, int d,
                              SampleSet online, double eta, uint64_t seed);

  int num_vars() const override { return online_->num_vars(); }
  int arity() const override { return online_->arity(); }
  double log_prob(std::span<const int> assignment) const override;

  // Predictive pmf of round t, weighted by the first t-1 online rows.
  // t ranges over 1..T+1; T+1 is the posterior over the whole stream.
  double round_log_prob(int t, std::span<const int> assignment) const;

  // One draw from the round average: t uniform on 1..T, a structure from
  // the weight state at t-1, then one ancestral pass through that
  // structure's tables.
  std::vector<int> sample(Rng& rng) const;
  SampleSet sample_many(Rng& rng, int count) const;

  // A structure drawn with probability proportional to its weight after
  // `state` online rows (state in 0..T).
  Dag sample_structure(int state, Rng& rng) const;

  // log of the summed expert weights after `state` online rows.
  double log_state_total(int state) const;

  // max over experts of the raw (eta-free) log likelihood of the first t
  // online rows. Feeds the regret report's best-expert column.
  double max_expert_log_likelihood(int t) const;

  // Candidate parent arcs i->j weighted by eta * prefix score at `state`.
  // Tree family only.
  WeightedDigraph structure_weights(int state) const;

  Family family() const { return family_; }
  double eta() const { return eta_; }
  uint64_t seed() const { return seed_; }
  int num_rounds() const { return online_->num_rows(); }
  int indegree_bound() const { return d_; }
  const CptBank& bank() const { return *bank_; }
  const PrefixScoreCache& scores() const { return *cache_; }
  const SampleSet& estimation() const { return *estimation_; }
  const SampleSet& online() const { return *online_; }
  // Null for the tree family.
  const UndirectedGraph* skeleton() const { return skeleton_.get(); }

  // The add-one Bayes net for one structure; tables are the bank's own.
  BayesNet expert_net(const Dag& dag) const;

  // JSON form records eta, family, skeleton, the online rows, the seed, and
  // a digest of the estimation rows; `estimation_ref` names the estimation
  // CSV for loaders. The estimation rows themselves live in that CSV.
  std::string to_json(const std::string& estimation_ref) const;
  void to_file(const std::string& path,
               const std::string& estimation_ref) const;
  // Throws IoError when `estimation` does not match the stored digest.
  static MixtureModel from_json(const std::string& text, SampleSet estimation);
  // Reads the estimation CSV named in the file, relative to `path`.
  static MixtureModel from_file(const std::string& path);

 private:
  MixtureModel() = default;
  ChordalDp::NodeWeightFn state_weight(int state) const;

  Family family_ = Family::kTree;
  double eta_ = 1.0;
  int d_ = 1;
  uint64_t seed_ = 0;
  std::unique_ptr<SampleSet> estimation_;
  std::unique_ptr<SampleSet> online_;
  std::unique_ptr<CptBank> bank_;
  std::unique_ptr<PrefixScoreCache> cache_;
  std::unique_ptr<UndirectedGraph> skeleton_;
  std::unique_ptr<CliqueTree> clique_tree_;
  std::unique_ptr<ChordalDp> dp_;
  mutable std::vector<double> state_totals_;
};

}  // namespace bnol

#endif  // BNOL_MIXTURE_HPP
