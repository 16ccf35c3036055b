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

#include <cmath>
#include <sstream>

#include "bnol/bayes_net.hpp"
#include "bnol/cpt.hpp"
#include "bnol/errors.hpp"
#include "bnol/rng.hpp"
#include "bnol/samples.hpp"
#include "doctest.h"

using namespace bnol;

namespace {

SampleSet make_samples(int n, int k, const std::vector<std::vector<int>>& rows) {
  SampleSet s(n, k);
  for (const auto& r : rows) s.append(r);
  return s;
}

BayesNet coin_pair(double root_one, double flip_stay) {
  // x0 ~ Bernoulli-style root, x1 copies x0 with probability flip_stay.
  Cpt c0{0, {}, 2, {1 - root_one, root_one}};
  Cpt c1{1, {0}, 2, {flip_stay, 1 - flip_stay, 1 - flip_stay, flip_stay}};
  return BayesNet(Dag(2, {{0, 1}}), {c0, c1});
}

}  // namespace

TEST_CASE("csv parsing round-trips and validates") {
  std::istringstream in("x1,x2\n1,2\n2,1\n1,1\n");
  SampleSet s = SampleSet::from_csv(in);
  CHECK(s.num_vars() == 2);
  CHECK(s.arity() == 2);
  CHECK(s.num_rows() == 3);
  CHECK(s.value(0, 1) == 1);
  CHECK(s.value(2, 0) == 0);

  std::ostringstream out;
  s.to_csv(out);
  CHECK(out.str() == "x1,x2\n1,2\n2,1\n1,1\n");

  std::istringstream forced("x1,x2\n1,2\n");
  CHECK(SampleSet::from_csv(forced, 4).arity() == 4);
  std::istringstream too_big("x1\n3\n");
  CHECK_THROWS_AS(SampleSet::from_csv(too_big, 2), IoError);
  std::istringstream bad_header("a,b\n1,1\n");
  CHECK_THROWS_AS(SampleSet::from_csv(bad_header), IoError);
  std::istringstream ragged("x1,x2\n1\n");
  CHECK_THROWS_AS(SampleSet::from_csv(ragged), IoError);
  std::istringstream zero_cell("x1\n0\n");
  CHECK_THROWS_AS(SampleSet::from_csv(zero_cell), IoError);
}

TEST_CASE("sample digests track content and slices copy rows") {
  SampleSet s = make_samples(2, 2, {{0, 1}, {1, 0}, {0, 0}});
  SampleSet same = make_samples(2, 2, {{0, 1}, {1, 0}, {0, 0}});
  SampleSet other = make_samples(2, 2, {{0, 1}, {1, 0}, {0, 1}});
  CHECK(s.digest() == same.digest());
  CHECK(s.digest() != other.digest());

  SampleSet head = s.slice(0, 2);
  CHECK(head.num_rows() == 2);
  CHECK(head.value(1, 0) == 1);
  CHECK_THROWS_AS(s.slice(1, 4), DomainError);
}

TEST_CASE("add-one estimate matches hand counts") {
  // Single ternary variable, rows 1,1,2: counts (2,1,0) smooth to
  // (3,2,1)/6.
  SampleSet s1 = make_samples(1, 3, {{0}, {0}, {1}});
  Cpt c = add_one_cpt(s1, 0, {});
  REQUIRE(c.table.size() == 3);
  CHECK(c.table[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.table[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(c.table[2] == doctest::Approx(1.0 / 6).epsilon(1e-15));

  // Child given parent, rows (1,1),(1,1),(2,2): parent=1 smooths to
  // (3,1)/4, parent=2 to (1,2)/3.
  SampleSet s2 = make_samples(2, 2, {{0, 0}, {0, 0}, {1, 1}});
  Cpt cc = add_one_cpt(s2, 1, {0});
  REQUIRE(cc.table.size() == 4);
  CHECK(cc.table[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(cc.table[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cc.table[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(cc.table[3] == doctest::Approx(2.0 / 3).epsilon(1e-15));

  // Zero rows: uniform.
  Cpt u = add_one_cpt(s2, 0, {1}, 0);
  for (double t : u.table) CHECK(t == doctest::Approx(0.5));

  // Every entry obeys the smoothing floor.
  Cpt floor_cpt = add_one_cpt(s1, 0, {}, 3);
  for (double t : floor_cpt.table) CHECK(t >= 1.0 / (3 + 3) - 1e-15);
}

TEST_CASE("config_index is mixed-radix with lowest parent most significant") {
  Cpt c;
  c.node = 1;
  c.parents = {0, 2};
  c.k = 3;
  c.table.assign(27, 1.0 / 3);
  std::vector<int> x{2, 0, 1};
  CHECK(c.config_index(x) == 2 * 3 + 1);
  x = {0, 0, 2};
  CHECK(c.config_index(x) == 2);
}

TEST_CASE("cpt bank enumerates parent sets under the skeleton") {
  SampleSet s = make_samples(3, 2, {{0, 0, 0}, {1, 1, 1}});
  UndirectedGraph path3(3, {{0, 1}, {1, 2}});

  // Parent sets per node along the path: {}, {nbr}, so 2+4+2... node 1 has
  // neighbors {0,2}: {}, {0}, {2} with d=1. Total 2+3+2 = 7.
  CptBank bank = build_cpt_bank(s, &path3, 1);
  CHECK(bank.size() == 7);
  CHECK(bank.contains(1, std::vector<int>{0}));
  CHECK(bank.contains(1, std::vector<int>{2}));
  CHECK_FALSE(bank.contains(0, std::vector<int>{2}));
  CHECK_THROWS_AS(bank.get(0, std::vector<int>{2}), MissingCptError);

  // Without a skeleton every other variable is a candidate parent: 3 nodes
  // with {} plus two singles each.
  CptBank full = build_cpt_bank(s, nullptr, 1);
  CHECK(full.size() == 9);

  // d=2 at node 1 adds the pair {0,2}.
  CptBank wide = build_cpt_bank(s, &path3, 2);
  CHECK(wide.size() == 8);
  CHECK(wide.contains(1, std::vector<int>{0, 2}));

  CHECK_THROWS_AS(build_cpt_bank(s, &path3, 1, 10), TooLargeError);
}

TEST_CASE("bayes net scores factorize over node tables") {
  BayesNet net = coin_pair(0.3, 0.9);
  std::vector<int> x{1, 1};
  CHECK(net.log_prob(x) ==
        doctest::Approx(std::log(0.3) + std::log(0.9)).epsilon(1e-14));
  x = {0, 1};
  CHECK(net.log_prob(x) ==
        doctest::Approx(std::log(0.7) + std::log(0.1)).epsilon(1e-14));

  CHECK_THROWS_AS(
      BayesNet(Dag(2, {{0, 1}}),
               {Cpt{0, {}, 2, {0.5, 0.5}}, Cpt{1, {}, 2, {0.5, 0.5}}}),
      DomainError);
}

TEST_CASE("ancestral sampling follows the model law") {
  BayesNet net = coin_pair(0.3, 0.9);
  Rng rng(5);
  int ones0 = 0, agree = 0;
  const int trials = 200000;
  for (int i = 0; i < trials; ++i) {
    auto x = net.sample(rng);
    ones0 += x[0];
    agree += x[0] == x[1];
  }
  CHECK(std::abs(ones0 / double(trials) - 0.3) < 0.005);
  CHECK(std::abs(agree / double(trials) - 0.9) < 0.005);
}

TEST_CASE("model json round-trips bit for bit") {
  BayesNet net = coin_pair(0.25, 0.625);
  const std::string text = net.to_json();
  BayesNet back = BayesNet::from_json(text);
  CHECK(back.to_json() == text);
  CHECK(back.num_vars() == 2);
  CHECK(back.arity() == 2);
  std::vector<int> x{1, 0};
  CHECK(back.log_prob(x) == doctest::Approx(net.log_prob(x)));

  CHECK_THROWS_AS(BayesNet::from_json("{"), IoError);
  CHECK_THROWS_AS(BayesNet::from_json("{\"n\":1,\"k\":2}"), IoError);
  CHECK_THROWS_AS(
      BayesNet::from_json(
          "{\"n\":1,\"k\":2,\"edges\":[],\"cpts\":{\"1\":{\"parents\":[],"
          "\"table\":[0.5,1.5]}}}"),
      IoError);
}

TEST_CASE("exact divergences match hand-computed values") {
  BayesNet p = coin_pair(0.5, 0.5);   // uniform over both bits
  BayesNet q = coin_pair(0.75, 0.5);  // first bit biased
  // KL reduces to the first coin: 0.5 log(0.5/0.25) + 0.5 log(0.5/0.75).
  const double expected = 0.5 * std::log(4.0 / 3.0);
  CHECK(exact_kl(p, q) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.14384).epsilon(1e-4));
  CHECK(exact_kl(p, p) == doctest::Approx(0.0));

  // TV also reduces to the first coin: |0.5-0.75| = 0.25.
  CHECK(exact_tv(p, q) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(exact_tv(p, q) <= std::sqrt(exact_kl(p, q) / 2) + 1e-12);

  CHECK_THROWS_AS(exact_kl(p, q, 2), TooLargeError);
}

TEST_CASE("empirical divergence approaches the exact value") {
  BayesNet p = coin_pair(0.5, 0.5);
  BayesNet q = coin_pair(0.75, 0.5);
  Rng rng(9);
  SampleSet holdout = p.sample_many(rng, 50000);
  CHECK(std::abs(empirical_kl(p, q, holdout) - exact_kl(p, q)) < 0.01);
  CHECK_THROWS_AS(empirical_kl(p, q, SampleSet(2, 2)), DomainError);
}
