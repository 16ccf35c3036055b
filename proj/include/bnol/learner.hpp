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

#ifndef BNOL_LEARNER_HPP
#define BNOL_LEARNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bnol/bayes_net.hpp"
#include "bnol/graph.hpp"
#include "bnol/mixture.hpp"
#include "bnol/samples.hpp"

namespace bnol {

// How the step size is chosen. kRealizable fixes eta = 1 (log loss is
// 1-exp-concave). kRwm uses sqrt(8 log N / T) with N the structure-count
// bound. kAgnostic uses eps / (2 sqrt(T) log(1/tau) sqrt(log(1/delta)))
// where tau lower-bounds every expert pmf. kManual takes the value as is.
enum class EtaPolicy { kRealizable, kRwm, kAgnostic, kManual };

// Source of the pmf floor tau for the agnostic step size: the add-one
// closed form (1/(rows+k))^n, or the smallest entries actually present in
// the bank.
enum class TauMode { kAnalytic, kRealized };

std::string eta_policy_name(EtaPolicy p);
EtaPolicy eta_policy_from_name(const std::string& name);
std::string tau_mode_name(TauMode m);
TauMode tau_mode_from_name(const std::string& name);

struct LearnerConfig {
  Family family = Family::kTree;
  std::optional<UndirectedGraph> skeleton;  // chordal family only
  int d = 1;                                // chordal indegree bound
  int estimation_size = 0;
  int rounds = 1;  // T
  EtaPolicy eta_policy = EtaPolicy::kRealizable;
  double eta = 1.0;    // kManual value
  double eps = 0.1;    // kAgnostic
  double delta = 0.05;  // kAgnostic
  TauMode tau_mode = TauMode::kAnalytic;
  uint64_t seed = 0;
};

// log of the structure-count bound behind the kRwm policy: (n-1) log n for
// trees, |E| log 2 for a chordal skeleton.
double log_structure_count_bound(Family family, int n,
                                 const UndirectedGraph* skeleton);

// Step size under the configured policy. `bank` is only read for
// TauMode::kRealized and may be null otherwise. Degenerate single-structure
// classes fall back to 1 under kRwm.
double resolve_eta(const LearnerConfig& config, int n, int k,
                   int estimation_rows, const CptBank* bank);

// First estimation_size rows feed the table bank; the next `rounds` rows
// are the online stream, in order. Throws InsufficientSamplesError when s
// is shorter than the two blocks combined.
std::pair<SampleSet, SampleSet> split_samples(const SampleSet& s,
                                              const LearnerConfig& config);

// The improper learner: runs the weight updates over the online block and
// returns the round-averaged mixture.
MixtureModel ewa_learn(const SampleSet& s, const LearnerConfig& config);

// The proper learner: draws a round t uniformly, runs t-1 weight updates,
// draws one structure from that state, and returns its add-one net.
struct RwmResult {
  BayesNet net;
  int sampled_round;   // t in 1..T; the structure came from state t-1
  MixtureModel trace;  // the weight state the draw came from
};
RwmResult rwm_learn(const SampleSet& s, const LearnerConfig& config);

// Maximum-likelihood structure over the online block (step size 1),
// carrying the bank's tables. Trees up to 8 vertices are scanned
// exhaustively with ties within 1e-12 resolving to the lexicographically
// smallest parent vector; larger trees fall back to a maximum-weight
// arborescence search and clear `exhaustive` so reports can flag the run
// as diagnostic. Chordal structures go through the clique-tree maximizer.
struct MleResult {
  BayesNet net;
  double log_likelihood;  // of the online block under the chosen structure
  bool exhaustive;
};
MleResult mle_learn(const SampleSet& s, const LearnerConfig& config);

// Exact per-round mixture losses against the running best expert:
// cumulative_regret[t-1] = sum of the first t losses minus the best
// expert's cumulative loss on those rounds.
struct RegretReport {
  bool available = true;
  std::string reason;  // set when unavailable
  std::vector<double> round_loss;
  std::vector<double> best_expert_loss;
  std::vector<double> cumulative_regret;

  double final_regret() const {
    return cumulative_regret.empty() ? 0.0 : cumulative_regret.back();
  }
  // Columns: round,loss,best_expert_loss,cumulative_regret.
  std::string to_csv() const;
};
RegretReport compute_regret(const MixtureModel& trace);

}  // namespace bnol

#endif  // BNOL_LEARNER_HPP
