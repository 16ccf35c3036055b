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

#ifndef BNOL_CPT_HPP
#define BNOL_CPT_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace bnol {

class SampleSet;
class UndirectedGraph;

// Conditional probability table for one node given an ascending parent set.
// Rows are parent configurations in mixed-radix order with the lowest parent
// index most significant; each row lists k probabilities.
struct Cpt {
  int node = 0;
  std::vector<int> parents;
  int k = 2;
  std::vector<double> table;

  int num_configs() const { return int(table.size()) / k; }
  int config_index(std::span<const int> assignment) const;
  double prob(std::span<const int> assignment) const;
  double log_prob(std::span<const int> assignment) const;
};

// Add-one estimate of node given parents from rows [0, t_limit) of s
// (all rows when t_limit is negative). Every entry is at least 1/(t+k).
Cpt add_one_cpt(const SampleSet& s, int node, std::vector<int> parents,
                int t_limit = -1);

// CPTs for every admissible (node, parent set) pair, shared across experts.
class CptBank {
 public:
  void add(Cpt cpt);
  bool contains(int node, std::span<const int> parents) const;
  const Cpt& get(int node, std::span<const int> parents) const;
  int size() const { return int(order_.size()); }
  // Insertion-ordered view.
  const Cpt& at(int i) const;

 private:
  std::map<std::pair<int, std::vector<int>>, Cpt> cpts_;
  std::vector<const Cpt*> order_;
};

// Add-one CPTs for every parent set of size at most d, drawn from the
// neighborhoods of `skeleton` when given and from all other variables
// otherwise. Throws TooLargeError when the summed table size would exceed
// `max_entries`.
CptBank build_cpt_bank(const SampleSet& s, const UndirectedGraph* skeleton,
                       int d, uint64_t max_entries = 10'000'000);

// Cumulative conditional scores over a fixed row stream:
// score(v, parents, t) = sum over the first t rows of
// log q_{v|parents}(x_v | x_parents). Prefix sums are built once per
// (node, parents) key on first use.
class PrefixScoreCache {
 public:
  PrefixScoreCache(const CptBank& bank, const SampleSet& rows);
  double score(int node, std::span<const int> parents, int t) const;
  int num_rows() const;

 private:
  const CptBank* bank_;
  const SampleSet* rows_;
  mutable std::map<std::pair<int, std::vector<int>>, std::vector<double>>
      cum_;
};

}  // namespace bnol

#endif  // BNOL_CPT_HPP
