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

#include "bnol/learner.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "bnol/arborescence.hpp"
#include "bnol/chordal_dp.hpp"
#include "bnol/clique_tree.hpp"
#include "bnol/cpt.hpp"
#include "bnol/errors.hpp"
#include "bnol/logspace.hpp"
#include "bnol/rng.hpp"

namespace bnol {

namespace {

constexpr int kRoot = 0;
constexpr double kTieWindow = 1e-12;

void check_family(const LearnerConfig& c, int n) {
  if (c.family == Family::kTree) return;
  if (!c.skeleton.has_value())
    throw DomainError("chordal family needs a skeleton");
  if (c.skeleton->num_vertices() != n)
    throw DomainError("skeleton order does not match the sample width");
  if (c.d < 0) throw DomainError("negative indegree bound");
}

double realized_log_inv_tau(const CptBank& bank, int n) {
  std::vector<double> node_min(size_t(n),
                               std::numeric_limits<double>::infinity());
  for (int i = 0; i < bank.size(); ++i) {
    const Cpt& cpt = bank.at(i);
    double m = std::numeric_limits<double>::infinity();
    for (double p : cpt.table) m = std::min(m, p);
    node_min[size_t(cpt.node)] = std::min(node_min[size_t(cpt.node)], m);
  }
  double log_inv = 0.0;
  for (double m : node_min) {
    if (!std::isfinite(m)) throw DomainError("bank covers no table for some node");
    log_inv -= std::log(m);
  }
  return log_inv;
}

}  // namespace

std::string eta_policy_name(EtaPolicy p) {
  switch (p) {
    case EtaPolicy::kRealizable: return "realizable";
    case EtaPolicy::kRwm: return "rwm";
    case EtaPolicy::kAgnostic: return "agnostic";
    case EtaPolicy::kManual: return "manual";
  }
  throw DomainError("unknown eta policy");
}

EtaPolicy eta_policy_from_name(const std::string& name) {
  if (name == "realizable") return EtaPolicy::kRealizable;
  if (name == "rwm") return EtaPolicy::kRwm;
  if (name == "agnostic") return EtaPolicy::kAgnostic;
  if (name == "manual") return EtaPolicy::kManual;
  throw DomainError("unknown eta policy: " + name);
}

std::string tau_mode_name(TauMode m) {
  return m == TauMode::kAnalytic ? "analytic" : "realized";
}

TauMode tau_mode_from_name(const std::string& name) {
  if (name == "analytic") return TauMode::kAnalytic;
  if (name == "realized") return TauMode::kRealized;
  throw DomainError("unknown tau mode: " + name);
}

double log_structure_count_bound(Family family, int n,
                                 const UndirectedGraph* skeleton) {
  if (family == Family::kTree) return (n - 1) * std::log(double(n));
  if (skeleton == nullptr)
    throw DomainError("chordal structure bound needs a skeleton");
  return skeleton->num_edges() * std::log(2.0);
}

double resolve_eta(const LearnerConfig& config, int n, int k,
                   int estimation_rows, const CptBank* bank) {
  switch (config.eta_policy) {
    case EtaPolicy::kRealizable:
      return 1.0;
    case EtaPolicy::kManual:
      if (!(config.eta > 0) || !std::isfinite(config.eta))
        throw DomainError("eta must be positive and finite");
      return config.eta;
    case EtaPolicy::kRwm: {
      if (config.rounds < 1) throw DomainError("rounds must be at least 1");
      const double log_n =
          log_structure_count_bound(config.family, n,
                                    config.skeleton ? &*config.skeleton
                                                    : nullptr);
      if (log_n <= 0.0) return 1.0;
      return std::sqrt(8.0 * log_n / config.rounds);
    }
    case EtaPolicy::kAgnostic: {
      if (config.rounds < 1) throw DomainError("rounds must be at least 1");
      if (!(config.eps > 0) || !std::isfinite(config.eps))
        throw DomainError("eps must be positive and finite");
      if (!(config.delta > 0 && config.delta < 1))
        throw DomainError("delta must lie in (0,1)");
      double log_inv_tau;
      if (config.tau_mode == TauMode::kAnalytic) {
        log_inv_tau = n * std::log(double(estimation_rows) + k);
      } else {
        if (bank == nullptr)
          throw DomainError("realized tau needs the table bank");
        log_inv_tau = realized_log_inv_tau(*bank, n);
      }
      return config.eps / (2.0 * std::sqrt(double(config.rounds)) *
                           log_inv_tau * std::sqrt(std::log(1.0 / config.delta)));
    }
  }
  throw DomainError("unknown eta policy");
}

std::pair<SampleSet, SampleSet> split_samples(const SampleSet& s,
                                              const LearnerConfig& config) {
  if (config.estimation_size < 0)
    throw DomainError("negative estimation size");
  if (config.rounds < 0) throw DomainError("negative round count");
  const long need = long(config.estimation_size) + config.rounds;
  if (need > s.num_rows())
    throw InsufficientSamplesError(
        "need " + std::to_string(need) + " rows, have " +
        std::to_string(s.num_rows()));
  return {s.slice(0, config.estimation_size),
          s.slice(config.estimation_size,
                  config.estimation_size + config.rounds)};
}

MixtureModel ewa_learn(const SampleSet& s, const LearnerConfig& config) {
  if (config.rounds < 1)
    throw DomainError("online learning needs at least one round");
  check_family(config, s.num_vars());
  auto [estimation, online] = split_samples(s, config);
  double eta;
  if (config.eta_policy == EtaPolicy::kAgnostic &&
      config.tau_mode == TauMode::kRealized) {
    const UndirectedGraph* skeleton =
        config.family == Family::kChordal ? &*config.skeleton : nullptr;
    const int d = config.family == Family::kChordal ? config.d : 1;
    const CptBank bank = build_cpt_bank(estimation, skeleton, d);
    eta = resolve_eta(config, s.num_vars(), s.arity(),
                      estimation.num_rows(), &bank);
  } else {
    eta = resolve_eta(config, s.num_vars(), s.arity(),
                      estimation.num_rows(), nullptr);
  }
  if (config.family == Family::kTree)
    return MixtureModel::tree(std::move(estimation), std::move(online), eta,
                              config.seed);
  return MixtureModel::chordal(std::move(estimation), *config.skeleton,
                               config.d, std::move(online), eta, config.seed);
}

RwmResult rwm_learn(const SampleSet& s, const LearnerConfig& config) {
  MixtureModel trace = ewa_learn(s, config);
  Rng rng = Rng::substream(config.seed, "rwm-structure");
  const int t = 1 + rng.uniform_int(trace.num_rounds());
  const Dag dag = trace.sample_structure(t - 1, rng);
  BayesNet net = trace.expert_net(dag);
  return RwmResult{std::move(net), t, std::move(trace)};
}

namespace {

// True when following parent pointers from every vertex reaches the root.
bool reaches_root(const std::vector<int>& parent, int n) {
  for (int j = 0; j < n; ++j) {
    int cur = j;
    int steps = 0;
    while (cur != kRoot) {
      cur = parent[size_t(cur)];
      if (++steps > n) return false;
    }
  }
  return true;
}

MleResult mle_tree(const SampleSet& estimation, const SampleSet& online) {
  const int n = online.num_vars();
  CptBank bank = build_cpt_bank(estimation, nullptr, 1);
  const PrefixScoreCache scores(bank, online);
  const int t = online.num_rows();

  std::vector<std::vector<double>> sc(size_t(n),
                                      std::vector<double>(size_t(n), 0.0));
  std::vector<int> parent_of(1);
  for (int j = 0; j < n; ++j) {
    if (j == kRoot) continue;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      parent_of[0] = i;
      sc[size_t(j)][size_t(i)] = scores.score(j, parent_of, t);
    }
  }

  std::vector<int> best_parent;
  bool exhaustive = n <= 8;
  if (exhaustive) {
    // Odometer over parent choices, vertex 1 most significant, so
    // candidates arrive in lexicographic parent-vector order.
    std::vector<int> choice(size_t(n), 0);
    std::vector<int> parent(size_t(n), -1);
    double best = kNegInf;
    while (true) {
      for (int j = 1; j < n; ++j) {
        const int c = choice[size_t(j)];
        parent[size_t(j)] = c < j ? c : c + 1;  // skip the self-loop slot
      }
      if (reaches_root(parent, n)) {
        double total = 0.0;
        for (int j = 1; j < n; ++j)
          total += sc[size_t(j)][size_t(parent[size_t(j)])];
        if (total > best + kTieWindow) {
          best = total;
          best_parent = parent;
        }
      }
      int j = n - 1;
      while (j >= 1 && ++choice[size_t(j)] == n - 1) {
        choice[size_t(j)] = 0;
        --j;
      }
      if (j < 1) break;
    }
  } else {
    WeightedDigraph g(n);
    for (int j = 0; j < n; ++j) {
      if (j == kRoot) continue;
      for (int i = 0; i < n; ++i)
        if (i != j) g.add_arc(i, j, sc[size_t(j)][size_t(i)]);
    }
    best_parent.assign(size_t(n), -1);
    for (int id : max_weight_arborescence(g, kRoot))
      best_parent[size_t(g.arc(id).head)] = g.arc(id).tail;
  }

  std::vector<std::pair<int, int>> arcs;
  double total = scores.score(kRoot, std::span<const int>(), t);
  for (int j = 0; j < n; ++j) {
    if (j == kRoot) continue;
    arcs.emplace_back(best_parent[size_t(j)], j);
    total += sc[size_t(j)][size_t(best_parent[size_t(j)])];
  }
  const Dag dag(n, arcs);
  return MleResult{net_from_bank(dag, bank), total, exhaustive};
}

MleResult mle_chordal(const SampleSet& estimation, const SampleSet& online,
                      const UndirectedGraph& skeleton, int d) {
  CptBank bank = build_cpt_bank(estimation, &skeleton, d);
  const PrefixScoreCache scores(bank, online);
  const int t = online.num_rows();
  const CliqueTree ct = build_clique_tree(skeleton);
  const ChordalDp dp(skeleton, ct, d);
  const auto weight = [&scores, t](int v, std::span<const int> in_parents) {
    return scores.score(v, in_parents, t);
  };
  const auto [orientation, total] = dp.max_orientation(weight);
  const Dag dag = orientation_to_dag(skeleton, orientation);
  return MleResult{net_from_bank(dag, bank), total, true};
}

}  // namespace

MleResult mle_learn(const SampleSet& s, const LearnerConfig& config) {
  check_family(config, s.num_vars());
  auto [estimation, online] = split_samples(s, config);
  if (config.family == Family::kTree) return mle_tree(estimation, online);
  return mle_chordal(estimation, online, *config.skeleton, config.d);
}

RegretReport compute_regret(const MixtureModel& trace) {
  RegretReport report;
  const int rounds = trace.num_rounds();
  report.round_loss.reserve(size_t(rounds));
  report.best_expert_loss.reserve(size_t(rounds));
  report.cumulative_regret.reserve(size_t(rounds));
  try {
    double cum = 0.0;
    for (int t = 1; t <= rounds; ++t) {
      const double loss = -trace.round_log_prob(t, trace.online().row(t - 1));
      cum += loss;
      const double best = -trace.max_expert_log_likelihood(t);
      report.round_loss.push_back(loss);
      report.best_expert_loss.push_back(best);
      report.cumulative_regret.push_back(cum - best);
    }
  } catch (const Error& e) {
    report = RegretReport{};
    report.available = false;
    report.reason = e.what();
  }
  return report;
}

std::string RegretReport::to_csv() const {
  std::string out = "round,loss,best_expert_loss,cumulative_regret\n";
  char buf[128];
  for (size_t i = 0; i < round_loss.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", int(i) + 1,
                  round_loss[i], best_expert_loss[i], cumulative_regret[i]);
    out += buf;
  }
  return out;
}

}  // namespace bnol
