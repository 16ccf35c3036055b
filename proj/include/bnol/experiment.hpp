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

#ifndef BNOL_EXPERIMENT_HPP
#define BNOL_EXPERIMENT_HPP

#include <cstdint>
#include <string>

#include "bnol/learner.hpp"

namespace bnol {

// One end-to-end run: instance generation, sample splitting, learning, and
// evaluation. Serializes to a flat key-value document, one `key = value`
// per line with `#` comments.
struct ExperimentConfig {
  // Instance.
  Family family = Family::kTree;
  int n = 5;
  int k = 2;
  int d = 1;
  double cpt_floor = 0.1;
  double edge_drop = 0.15;
  int max_retries = 100;
  std::string skeleton_file;  // empty: generate the skeleton

  // Learner.
  std::string algo = "ewa";  // ewa | rwm | mle
  int estimation_size = 1000;
  int rounds = 400;
  EtaPolicy eta_policy = EtaPolicy::kRealizable;
  double eta = 1.0;
  double eps = 0.1;
  double delta = 0.05;
  TauMode tau_mode = TauMode::kAnalytic;

  // Evaluation. Exact divergences are computed only when k^n fits under
  // exact_cap; a zero holdout skips the empirical estimate.
  int holdout_size = 2000;
  uint64_t exact_cap = uint64_t{1} << 20;

  uint64_t seed = 0;
  std::string out_dir = "run";

  // Applies `key = value` lines onto the defaults. Unknown keys and
  // malformed lines are DomainError.
  static ExperimentConfig from_kv_text(const std::string& text);
  std::string to_kv_text() const;

  LearnerConfig learner_config(const UndirectedGraph* skeleton) const;
};

struct ExperimentResult {
  std::string metrics_json;  // contents of <out_dir>/metrics.json
  std::string out_dir;
};

// Runs the full pipeline and writes into config.out_dir: the resolved
// config, the ground truth and its skeleton, all sample files, the learned
// model, the regret report for the online learners, metrics.json, and
// timing.txt. Every artifact except timing.txt is a pure function of the
// config, so reruns are byte-identical.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace bnol

#endif  // BNOL_EXPERIMENT_HPP
