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

#include "bnol/bayes_net.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bnol/errors.hpp"
#include "bnol/rng.hpp"
#include "bnol/samples.hpp"
#include "json.hpp"

namespace bnol {

using ordered_json = nlohmann::ordered_json;

BayesNet::BayesNet(Dag dag, std::vector<Cpt> cpts)
    : dag_(std::move(dag)), cpts_(std::move(cpts)) {
  const int n = dag_.num_vertices();
  if (int(cpts_.size()) != n)
    throw DomainError("need exactly one table per node");
  auto topo = dag_.topological_order();
  if (!topo) throw DomainError("model graph has a cycle");
  topo_ = std::move(*topo);
  k_ = n > 0 ? cpts_[0].k : 2;
  for (int v = 0; v < n; ++v) {
    if (cpts_[v].node != v) throw DomainError("table bound to wrong node");
    if (cpts_[v].k != k_) throw DomainError("mixed arities");
    if (cpts_[v].parents != dag_.parents(v))
      throw DomainError("table parents disagree with graph");
    if (int(cpts_[v].table.size()) !=
        k_ * cpts_[v].num_configs())
      throw DomainError("table size mismatch");
  }
}

double BayesNet::log_prob(std::span<const int> assignment) const {
  double total = 0.0;
  for (const Cpt& c : cpts_) total += c.log_prob(assignment);
  return total;
}

std::vector<int> BayesNet::sample(Rng& rng) const {
  std::vector<int> x(num_vars(), -1);
  std::vector<double> logs(k_);
  for (int v : topo_) {
    const Cpt& c = cpts_[v];
    const int base = c.config_index(x) * k_;
    for (int z = 0; z < k_; ++z) logs[z] = std::log(c.table[base + z]);
    x[v] = rng.categorical_from_log(logs);
  }
  return x;
}

SampleSet BayesNet::sample_many(Rng& rng, int count) const {
  SampleSet s(num_vars(), k_);
  for (int t = 0; t < count; ++t) {
    auto x = sample(rng);
    s.append(x);
  }
  return s;
}

std::string BayesNet::to_json() const {
  ordered_json j;
  j["n"] = num_vars();
  j["k"] = k_;
  ordered_json edges = ordered_json::array();
  for (auto [p, c] : dag_.arcs()) edges.push_back({p + 1, c + 1});
  j["edges"] = std::move(edges);
  ordered_json cpts = ordered_json::object();
  for (int v = 0; v < num_vars(); ++v) {
    ordered_json entry;
    ordered_json parents = ordered_json::array();
    for (int p : cpts_[v].parents) parents.push_back(p + 1);
    entry["parents"] = std::move(parents);
    entry["table"] = cpts_[v].table;
    cpts[std::to_string(v + 1)] = std::move(entry);
  }
  j["cpts"] = std::move(cpts);
  return j.dump(2) + "\n";
}

BayesNet BayesNet::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("model: bad json: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    if (n < 1 || k < 2) throw IoError("model: bad dimensions");
    std::vector<std::pair<int, int>> arcs;
    for (const auto& e : j.at("edges"))
      arcs.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    std::vector<Cpt> cpts(n);
    for (int v = 0; v < n; ++v) {
      const auto& entry = j.at("cpts").at(std::to_string(v + 1));
      Cpt c;
      c.node = v;
      c.k = k;
      for (const auto& p : entry.at("parents"))
        c.parents.push_back(p.get<int>() - 1);
      c.table = entry.at("table").get<std::vector<double>>();
      for (double t : c.table)
        if (!(t >= 0.0) || !(t <= 1.0)) throw IoError("model: bad probability");
      cpts[v] = std::move(c);
    }
    return BayesNet(Dag(n, arcs), std::move(cpts));
  } catch (const ordered_json::exception& e) {
    throw IoError(std::string("model: missing or mistyped field: ") +
                  e.what());
  } catch (const DomainError& e) {
    throw IoError(std::string("model: ") + e.what());
  }
}

BayesNet BayesNet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void BayesNet::to_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << to_json();
  if (!out) throw IoError("failed writing " + path);
}

BayesNet net_from_bank(const Dag& dag, const CptBank& bank) {
  std::vector<Cpt> cpts;
  cpts.reserve(dag.num_vertices());
  for (int v = 0; v < dag.num_vertices(); ++v)
    cpts.push_back(bank.get(v, dag.parents(v)));
  return BayesNet(dag, std::move(cpts));
}

namespace {

// Calls fn with every joint assignment of n k-ary variables.
template <typename Fn>
void for_each_state(int n, int k, uint64_t cap, Fn&& fn) {
  double states = std::pow(double(k), double(n));
  if (states > double(cap))
    throw TooLargeError("joint enumeration over " + std::to_string(n) +
                        " variables exceeds the cap");
  std::vector<int> x(n, 0);
  while (true) {
    fn(std::span<const int>(x));
    int i = n - 1;
    while (i >= 0 && ++x[i] == k) x[i--] = 0;
    if (i < 0) break;
  }
}

void check_same_shape(const Distribution& p, const Distribution& q) {
  if (p.num_vars() != q.num_vars() || p.arity() != q.arity())
    throw DomainError("distributions have different shapes");
}

}  // namespace

double exact_kl(const Distribution& p, const Distribution& q, uint64_t cap) {
  check_same_shape(p, q);
  double kl = 0.0;
  for_each_state(p.num_vars(), p.arity(), cap, [&](std::span<const int> x) {
    const double lp = p.log_prob(x);
    if (lp == -std::numeric_limits<double>::infinity()) return;
    kl += std::exp(lp) * (lp - q.log_prob(x));
  });
  return kl;
}

double exact_tv(const Distribution& p, const Distribution& q, uint64_t cap) {
  check_same_shape(p, q);
  double tv = 0.0;
  for_each_state(p.num_vars(), p.arity(), cap, [&](std::span<const int> x) {
    tv += std::abs(std::exp(p.log_prob(x)) - std::exp(q.log_prob(x)));
  });
  return 0.5 * tv;
}

double empirical_kl(const Distribution& p, const Distribution& q,
                    const SampleSet& rows_from_p) {
  check_same_shape(p, q);
  if (rows_from_p.num_rows() == 0)
    throw DomainError("no rows to average over");
  double total = 0.0;
  for (int t = 0; t < rows_from_p.num_rows(); ++t) {
    const auto x = rows_from_p.row(t);
    total += p.log_prob(x) - q.log_prob(x);
  }
  return total / rows_from_p.num_rows();
}

}  // namespace bnol
