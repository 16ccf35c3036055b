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

#include "bnol/cpt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bnol/errors.hpp"
#include "bnol/graph.hpp"
#include "bnol/samples.hpp"

namespace bnol {

int Cpt::config_index(std::span<const int> assignment) const {
  int idx = 0;
  for (int p : parents) idx = idx * k + assignment[p];
  return idx;
}

double Cpt::prob(std::span<const int> assignment) const {
  return table[size_t(config_index(assignment)) * k + assignment[node]];
}

double Cpt::log_prob(std::span<const int> assignment) const {
  return std::log(prob(assignment));
}

Cpt add_one_cpt(const SampleSet& s, int node, std::vector<int> parents,
                int t_limit) {
  std::sort(parents.begin(), parents.end());
  if (std::adjacent_find(parents.begin(), parents.end()) != parents.end())
    throw DomainError("duplicate parent");
  for (int p : parents)
    if (p == node || p < 0 || p >= s.num_vars())
      throw DomainError("bad parent index");
  const int k = s.arity();

  Cpt cpt;
  cpt.node = node;
  cpt.parents = std::move(parents);
  cpt.k = k;
  size_t num_configs = 1;
  for (size_t i = 0; i < cpt.parents.size(); ++i) num_configs *= size_t(k);
  std::vector<double> counts(num_configs * k, 1.0);
  const int rows = t_limit < 0 ? s.num_rows() : t_limit;
  for (int t = 0; t < rows; ++t) {
    const auto row = s.row(t);
    counts[size_t(cpt.config_index(row)) * k + row[cpt.node]] += 1.0;
  }
  cpt.table.resize(counts.size());
  for (size_t c = 0; c < num_configs; ++c) {
    double total = 0.0;
    for (int z = 0; z < k; ++z) total += counts[c * k + z];
    for (int z = 0; z < k; ++z) cpt.table[c * k + z] = counts[c * k + z] / total;
  }
  return cpt;
}

void CptBank::add(Cpt cpt) {
  auto key = std::make_pair(cpt.node, cpt.parents);
  auto [it, inserted] = cpts_.emplace(std::move(key), std::move(cpt));
  if (!inserted) throw DomainError("duplicate bank entry");
  order_.push_back(&it->second);
}

bool CptBank::contains(int node, std::span<const int> parents) const {
  std::vector<int> key(parents.begin(), parents.end());
  std::sort(key.begin(), key.end());
  return cpts_.count(std::make_pair(node, std::move(key))) > 0;
}

const Cpt& CptBank::get(int node, std::span<const int> parents) const {
  std::vector<int> key(parents.begin(), parents.end());
  std::sort(key.begin(), key.end());
  auto it = cpts_.find(std::make_pair(node, std::move(key)));
  if (it == cpts_.end()) {
    std::string msg = "no table for node " + std::to_string(node + 1) +
                      " given {";
    for (size_t i = 0; i < parents.size(); ++i)
      msg += (i ? "," : "") + std::to_string(parents[i] + 1);
    throw MissingCptError(msg + "}");
  }
  return it->second;
}

const Cpt& CptBank::at(int i) const { return *order_[i]; }

namespace {

void visit_subsets(const std::vector<int>& pool, int d, size_t start,
                   std::vector<int>& cur,
                   const std::function<void(const std::vector<int>&)>& fn) {
  fn(cur);
  if (int(cur.size()) == d) return;
  for (size_t i = start; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    visit_subsets(pool, d, i + 1, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

PrefixScoreCache::PrefixScoreCache(const CptBank& bank, const SampleSet& rows)
    : bank_(&bank), rows_(&rows) {}

int PrefixScoreCache::num_rows() const { return rows_->num_rows(); }

double PrefixScoreCache::score(int node, std::span<const int> parents,
                               int t) const {
  std::vector<int> key(parents.begin(), parents.end());
  std::sort(key.begin(), key.end());
  auto it = cum_.find(std::make_pair(node, key));
  if (it == cum_.end()) {
    const Cpt& cpt = bank_->get(node, key);
    std::vector<double> cum(size_t(rows_->num_rows()) + 1, 0.0);
    for (int s = 0; s < rows_->num_rows(); ++s)
      cum[s + 1] = cum[s] + cpt.log_prob(rows_->row(s));
    it = cum_.emplace(std::make_pair(node, std::move(key)), std::move(cum))
             .first;
  }
  return it->second[t];
}

CptBank build_cpt_bank(const SampleSet& s, const UndirectedGraph* skeleton,
                       int d, uint64_t max_entries) {
  const int n = s.num_vars();
  const int k = s.arity();
  if (skeleton && skeleton->num_vertices() != n)
    throw DomainError("skeleton size does not match samples");
  if (d < 0) throw DomainError("negative parent bound");

  uint64_t entries = 0;
  std::vector<std::pair<int, std::vector<int>>> jobs;
  for (int v = 0; v < n; ++v) {
    std::vector<int> pool;
    if (skeleton) {
      pool = skeleton->neighbors(v);
    } else {
      for (int u = 0; u < n; ++u)
        if (u != v) pool.push_back(u);
    }
    std::vector<int> cur;
    visit_subsets(pool, d, 0, cur, [&](const std::vector<int>& parents) {
      uint64_t rows = 1;
      for (size_t i = 0; i < parents.size(); ++i) rows *= uint64_t(k);
      entries += rows * uint64_t(k);
      jobs.emplace_back(v, parents);
    });
  }
  if (entries > max_entries)
    throw TooLargeError("conditional table bank needs " +
                        std::to_string(entries) + " entries, cap " +
                        std::to_string(max_entries));

  CptBank bank;
  for (auto& [v, parents] : jobs) bank.add(add_one_cpt(s, v, parents));
  return bank;
}

}  // namespace bnol
