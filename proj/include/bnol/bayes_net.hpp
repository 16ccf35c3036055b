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

#ifndef BNOL_BAYES_NET_HPP
#define BNOL_BAYES_NET_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bnol/cpt.hpp"
#include "bnol/graph.hpp"

namespace bnol {

class Rng;
class SampleSet;

// A distribution over joint assignments of n variables with common arity k.
class Distribution {
 public:
  virtual ~Distribution() = default;
  virtual int num_vars() const = 0;
  virtual int arity() const = 0;
  virtual double log_prob(std::span<const int> assignment) const = 0;
};

// Directed model with one conditional table per node.
class BayesNet : public Distribution {
 public:
  BayesNet() = default;
  // cpts[v].parents must equal dag.parents(v) for every node.
  BayesNet(Dag dag, std::vector<Cpt> cpts);

  int num_vars() const override { return dag_.num_vertices(); }
  int arity() const override { return k_; }
  double log_prob(std::span<const int> assignment) const override;

  const Dag& dag() const { return dag_; }
  const Cpt& cpt(int v) const { return cpts_[v]; }

  std::vector<int> sample(Rng& rng) const;
  SampleSet sample_many(Rng& rng, int count) const;

  // JSON form: {"n","k","edges":[[parent,child],...],"cpts":{"v":{"parents",
  // "table"},...}} with 1-based vertex labels and deterministic key order.
  std::string to_json() const;
  static BayesNet from_json(const std::string& text);
  static BayesNet from_file(const std::string& path);
  void to_file(const std::string& path) const;

 private:
  Dag dag_;
  std::vector<Cpt> cpts_;
  std::vector<int> topo_;
  int k_ = 2;
};

// The Bayes net with `dag` structure and the bank's table for every node's
// parent set. Throws MissingCptError when the bank lacks one.
BayesNet net_from_bank(const Dag& dag, const CptBank& bank);

// Exact divergences by full enumeration of the k^n joint states.
// Throws TooLargeError when k^n exceeds `cap`.
double exact_kl(const Distribution& p, const Distribution& q,
                uint64_t cap = uint64_t{1} << 20);
double exact_tv(const Distribution& p, const Distribution& q,
                uint64_t cap = uint64_t{1} << 20);

// Monte Carlo divergence: mean of log p - log q over rows drawn from p.
double empirical_kl(const Distribution& p, const Distribution& q,
                    const SampleSet& rows_from_p);

}  // namespace bnol

#endif  // BNOL_BAYES_NET_HPP
