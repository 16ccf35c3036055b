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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bnol/chordal_dp.hpp"
#include "bnol/clique_tree.hpp"
#include "bnol/errors.hpp"
#include "bnol/experiment.hpp"
#include "bnol/instance_gen.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace bnol;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("bnol_harness_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

// Artifacts are a pure function of the config, so any two runs of the same
// config must agree on everything except timing.txt.
void check_same_artifacts(const fs::path& a, const fs::path& b) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(a))
    names.insert(e.path().filename().string());
  std::set<std::string> other;
  for (const auto& e : fs::directory_iterator(b))
    other.insert(e.path().filename().string());
  CHECK(names == other);
  for (const auto& name : names) {
    if (name == "timing.txt") continue;
    INFO("artifact ", name);
    CHECK(read_file(a / name) == read_file(b / name));
  }
}

struct CliResult {
  int code = -1;
  std::string out;
};

std::string cli_path() {
  if (const char* env = std::getenv("BNOL_CLI")) return env;
  return BNOL_CLI_PATH;
}

// Runs the tool with `args`, cwd set to `dir`, and captures stdout.
CliResult run_cli(const fs::path& dir, const std::string& args) {
  const fs::path out_file = dir / ".stdout";
  const std::string cmd = "cd \"" + dir.string() + "\" && \"" + cli_path() +
                          "\" " + args + " > .stdout 2> .stderr";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_file);
  return r;
}

std::string chomp(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

constexpr const char* kPath3 = "3 2\n1 2\n2 3\n";
constexpr const char* kTriangle = "3 3\n1 2\n1 3\n2 3\n";

}  // namespace

TEST_CASE("generated instances respect family, floor, and seed") {
  InstanceParams p;
  p.family = Family::kTree;
  p.n = 5;
  p.k = 3;
  p.cpt_floor = 0.05;
  const GroundTruth gt = gen_instance(p, 42);
  CHECK(gt.skeleton.num_edges() == 4);
  CHECK(gt.net.dag().num_vertices() == 5);
  for (int v = 0; v < 5; ++v) {
    CHECK(gt.net.dag().parents(v).size() <= 1);
    for (const double entry : gt.net.cpt(v).table) {
      CHECK(entry >= 0.05);
      CHECK(entry <= 1.0 - 2 * 0.05 + 1e-12);
    }
  }

  const GroundTruth again = gen_instance(p, 42);
  CHECK(gt.net.to_json() == again.net.to_json());
  std::ostringstream skel_a, skel_b;
  gt.skeleton.to_text(skel_a);
  again.skeleton.to_text(skel_b);
  CHECK(skel_a.str() == skel_b.str());
  const GroundTruth other = gen_instance(p, 43);
  CHECK(gt.net.to_json() != other.net.to_json());

  p.n = 1;
  const GroundTruth solo = gen_instance(p, 7);
  CHECK(solo.skeleton.num_edges() == 0);
  CHECK(solo.net.dag().parents(0).empty());
}

TEST_CASE("generated chordal instances admit at least one orientation") {
  InstanceParams p;
  p.family = Family::kChordal;
  p.n = 6;
  p.d = 2;
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const GroundTruth gt = gen_instance(p, seed);
    CHECK(is_chordal(gt.skeleton).chordal);
    for (int v = 0; v < p.n; ++v) CHECK(gt.net.dag().parents(v).size() <= 2);
    const CliqueTree ct = build_clique_tree(gt.skeleton);
    ChordalDp dp(gt.skeleton, ct, p.d);
    const double log_total = dp.log_total([](int, std::span<const int>) {
      return 0.0;
    });
    CHECK(std::isfinite(log_total));
    CHECK(log_total >= 0.0);
  }
}

TEST_CASE("generation on a fixed skeleton validates its shape") {
  InstanceParams p;
  p.family = Family::kTree;
  p.n = 3;
  const UndirectedGraph path(3, {{0, 1}, {1, 2}});
  const GroundTruth gt = gen_on_skeleton(p, path, 9);
  CHECK(gt.net.dag().parents(0).empty());
  CHECK(gt.net.dag().parents(1) == std::vector<int>{0});
  CHECK(gt.net.dag().parents(2) == std::vector<int>{1});

  const UndirectedGraph split(3, {{0, 1}});
  CHECK_THROWS_AS(gen_on_skeleton(p, split, 9), DomainError);

  p.family = Family::kChordal;
  p.d = 2;
  const UndirectedGraph cycle4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  p.n = 4;
  CHECK_THROWS_AS(gen_on_skeleton(p, cycle4, 9), NotChordalError);
}

TEST_CASE("experiment config text round trips") {
  ExperimentConfig c;
  c.family = Family::kChordal;
  c.n = 7;
  c.d = 3;
  c.algo = "rwm";
  c.estimation_size = 123;
  c.rounds = 456;
  c.eta = 0.25;
  c.eta_policy = EtaPolicy::kManual;
  c.seed = 99;
  const std::string text = c.to_kv_text();
  const ExperimentConfig back = ExperimentConfig::from_kv_text(text);
  CHECK(back.to_kv_text() == text);
  CHECK(back.n == 7);
  CHECK(back.eta == 0.25);
  CHECK(text.find("out_dir") == std::string::npos);

  const ExperimentConfig defaults = ExperimentConfig::from_kv_text("");
  CHECK(defaults.to_kv_text() == ExperimentConfig{}.to_kv_text());

  const ExperimentConfig relaxed = ExperimentConfig::from_kv_text(
      "# comment\n\n  n = 4 \nout_dir = elsewhere\n");
  CHECK(relaxed.n == 4);
  CHECK(relaxed.out_dir == "elsewhere");

  CHECK_THROWS_AS(ExperimentConfig::from_kv_text("mystery = 1\n"),
                  DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_kv_text("n = four\n"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_kv_text("just-a-token\n"),
                  DomainError);
}

TEST_CASE("experiment pipeline writes the full artifact set") {
  const fs::path dir = fresh_dir("pipeline");
  ExperimentConfig c;
  c.n = 4;
  c.estimation_size = 150;
  c.rounds = 40;
  c.holdout_size = 200;
  c.seed = 5;
  c.out_dir = (dir / "ewa").string();
  const ExperimentResult res = run_experiment(c);
  for (const char* name :
       {"config.txt", "pstar.json", "skeleton.txt", "estimation.csv",
        "online.csv", "holdout.csv", "mixture.json", "regret.csv",
        "metrics.json", "timing.txt"})
    CHECK(fs::exists(fs::path(res.out_dir) / name));

  const auto m = nlohmann::json::parse(res.metrics_json);
  CHECK(m.at("algo") == "ewa");
  CHECK(m.at("rounds") == 40);
  CHECK(m.at("estimation_rows") == 150);
  CHECK(m.at("model_file") == "mixture.json");
  CHECK(m.at("regret_final").get<double>() <=
        m.at("regret_bound").get<double>());
  CHECK(m.at("exact_kl").get<double>() >= 0.0);
  CHECK(m.at("empirical_kl").is_number());
  CHECK(m.at("holdout_rows") == 200);

  c.algo = "rwm";
  c.out_dir = (dir / "rwm").string();
  const auto rwm = nlohmann::json::parse(run_experiment(c).metrics_json);
  CHECK(rwm.at("model_file") == "model.json");
  CHECK(rwm.at("sampled_round").get<int>() >= 1);
  CHECK(rwm.at("sampled_round").get<int>() <= 40);
  CHECK(fs::exists(dir / "rwm" / "trace.json"));

  c.algo = "mle";
  c.out_dir = (dir / "mle").string();
  const auto mle = nlohmann::json::parse(run_experiment(c).metrics_json);
  CHECK(mle.at("exhaustive") == true);
  CHECK(mle.at("log_likelihood").is_number());

  c.algo = "ewa";
  c.holdout_size = 0;
  c.exact_cap = 1;
  c.out_dir = (dir / "nulls").string();
  const auto nulls = nlohmann::json::parse(run_experiment(c).metrics_json);
  CHECK(nulls.at("empirical_kl").is_null());
  CHECK(nulls.at("exact_kl").is_null());
}

TEST_CASE("experiment reruns are byte identical") {
  const fs::path dir = fresh_dir("rerun");
  ExperimentConfig c;
  c.family = Family::kChordal;
  c.n = 5;
  c.d = 2;
  c.algo = "rwm";
  c.estimation_size = 120;
  c.rounds = 30;
  c.holdout_size = 100;
  c.seed = 17;
  c.out_dir = (dir / "a").string();
  run_experiment(c);
  c.out_dir = (dir / "b").string();
  run_experiment(c);
  check_same_artifacts(dir / "a", dir / "b");
}

TEST_CASE("cli counts match the closed-form spot values") {
  const fs::path dir = fresh_dir("cli_counts");
  write_file(dir / "path3.txt", kPath3);
  write_file(dir / "tri.txt", kTriangle);

  CHECK(chomp(run_cli(dir, "count --family tree -n 4").out) == "16");
  CHECK(chomp(run_cli(dir, "count --family chordal --graph path3.txt -d 1")
                  .out) == "3");
  CHECK(chomp(run_cli(dir, "count --family chordal --graph tri.txt -d 1")
                  .out) == "0");
  CHECK(chomp(run_cli(dir, "count --family chordal --graph tri.txt -d 2")
                  .out) == "6");
}

TEST_CASE("cli exit codes separate usage, numeric, and io failures") {
  const fs::path dir = fresh_dir("cli_codes");
  write_file(dir / "tri.txt", kTriangle);
  CHECK(run_cli(dir, "count --family tree -n 0").code == 2);
  CHECK(run_cli(dir, "count --no-such-flag").code == 2);
  CHECK(run_cli(dir,
                "sample-structure --family chordal --graph tri.txt -d 1")
            .code == 3);
  CHECK(run_cli(dir, "eval --exact missing.json missing.json").code == 4);
}

TEST_CASE("cli generation is deterministic and self-consistent") {
  const fs::path dir = fresh_dir("cli_gen");
  const std::string args =
      "gen --family chordal -n 5 -d 2 --rows 200 --seed 21 -o ";
  CHECK(run_cli(dir, args + "a").code == 0);
  CHECK(run_cli(dir, args + "b").code == 0);
  for (const char* name : {"pstar.json", "skeleton.txt", "samples.csv"})
    CHECK(read_file(dir / "a" / name) == read_file(dir / "b" / name));

  const CliResult self =
      run_cli(dir, "eval --exact a/pstar.json a/pstar.json");
  CHECK(self.code == 0);
  CHECK(chomp(self.out) == "0");
}

TEST_CASE("cli learn artifacts reload and rescore cleanly") {
  const fs::path dir = fresh_dir("cli_learn");
  REQUIRE(run_cli(dir, "gen --family tree -n 4 --rows 260 --seed 3 -o g")
              .code == 0);

  const CliResult ewa = run_cli(
      dir,
      "learn --algo ewa --samples g/samples.csv --estimation 200 "
      "--rounds 60 --seed 8 -o ewa");
  REQUIRE(ewa.code == 0);
  CHECK(chomp(ewa.out) == "ewa/mixture.json");
  const CliResult kl = run_cli(dir, "eval g/pstar.json ewa/mixture.json");
  CHECK(kl.code == 0);
  CHECK(std::stod(kl.out) >= 0.0);

  // Recomputing regret from the stored mixture reproduces the learn-time CSV.
  const CliResult rr =
      run_cli(dir, "regret --trace ewa/mixture.json -o regret2.csv");
  REQUIRE(rr.code == 0);
  CHECK(rr.out.find("final_regret ") == 0);
  CHECK(rr.out.find("\nbound ") != std::string::npos);
  CHECK(read_file(dir / "regret2.csv") ==
        read_file(dir / "ewa" / "regret.csv"));

  const CliResult rwm = run_cli(
      dir,
      "learn --algo rwm --samples g/samples.csv --estimation 200 "
      "--rounds 60 --seed 8 -o rwm");
  REQUIRE(rwm.code == 0);
  CHECK(chomp(rwm.out) == "rwm/model.json");
  CHECK(run_cli(dir, "eval g/pstar.json rwm/model.json").code == 0);
  CHECK(run_cli(dir, "regret --trace rwm/trace.json").code == 0);

  const CliResult mle = run_cli(
      dir,
      "learn --algo mle --samples g/samples.csv --estimation 200 "
      "--rounds 60 -o mle");
  REQUIRE(mle.code == 0);
  const CliResult both =
      run_cli(dir, "eval --exact --empirical g/samples.csv g/pstar.json "
                   "mle/model.json");
  CHECK(both.code == 0);
  CHECK(both.out.find("exact ") == 0);
  CHECK(both.out.find("\nempirical ") != std::string::npos);
}

TEST_CASE("cli structure draws stay inside the counted support") {
  const fs::path dir = fresh_dir("cli_draws");
  write_file(dir / "path3.txt", kPath3);
  const CliResult draws = run_cli(
      dir,
      "sample-structure --family chordal --graph path3.txt -d 1 "
      "--count 50 --seed 2");
  REQUIRE(draws.code == 0);
  std::set<std::string> seen;
  std::stringstream lines(draws.out);
  std::string line;
  while (std::getline(lines, line)) seen.insert(line);
  // path3 at d=1 has exactly three orientations and 50 draws hit them all.
  const std::set<std::string> support = {"1->2 2->3", "2->1 2->3",
                                         "2->1 3->2"};
  CHECK(seen == support);

  const CliResult trees =
      run_cli(dir, "sample-structure --family tree -n 3 --count 5 --seed 4");
  REQUIRE(trees.code == 0);
  std::stringstream tree_lines(trees.out);
  int count = 0;
  while (std::getline(tree_lines, line)) {
    ++count;
    CHECK(std::count(line.begin(), line.end(), '>') == 2);
  }
  CHECK(count == 5);
}

TEST_CASE("cli run matches the library pipeline and honors the out root") {
  const fs::path dir = fresh_dir("cli_run");
  write_file(dir / "run.cfg",
             "algo = ewa\nfamily = tree\nn = 4\nestimation_size = 150\n"
             "rounds = 40\nholdout_size = 200\nseed = 5\n");
  const CliResult run = run_cli(dir, "run --config run.cfg -o out");
  REQUIRE(run.code == 0);
  const auto cli_metrics = nlohmann::json::parse(run.out);
  CHECK(cli_metrics ==
        nlohmann::json::parse(read_file(dir / "out" / "metrics.json")));

  ExperimentConfig c = ExperimentConfig::from_kv_text(
      read_file(dir / "out" / "config.txt"));
  c.out_dir = (dir / "lib").string();
  const ExperimentResult lib = run_experiment(c);
  CHECK(cli_metrics == nlohmann::json::parse(lib.metrics_json));
  check_same_artifacts(dir / "out", dir / "lib");

  const CliResult shown =
      run_cli(dir, "run --config run.cfg --seed 6 --show-config");
  REQUIRE(shown.code == 0);
  CHECK(shown.out.find("seed = 6\n") != std::string::npos);
  CHECK(!fs::exists(dir / "run"));

  const fs::path root = dir / "root";
  const std::string env_cmd =
      "cd \"" + dir.string() + "\" && BNOL_OUT_ROOT=\"" + root.string() +
      "\" \"" + cli_path() +
      "\" gen --family tree -n 3 --rows 20 --seed 1 -o sub > /dev/null 2>&1";
  REQUIRE(std::system(env_cmd.c_str()) == 0);
  CHECK(fs::exists(root / "sub" / "pstar.json"));
  CHECK(!fs::exists(dir / "sub"));
}
