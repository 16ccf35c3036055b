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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bnol/arborescence.hpp"
#include "bnol/bayes_net.hpp"
#include "bnol/chordal_dp.hpp"
#include "bnol/clique_tree.hpp"
#include "bnol/cpt.hpp"
#include "bnol/errors.hpp"
#include "bnol/experiment.hpp"
#include "bnol/instance_gen.hpp"
#include "bnol/learner.hpp"
#include "bnol/logspace.hpp"
#include "bnol/mixture.hpp"
#include "bnol/rng.hpp"
#include "bnol/samples.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bnol;

// Relative output paths land under $BNOL_OUT_ROOT when it is set.
std::string resolve_out(const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  const char* root = std::getenv("BNOL_OUT_ROOT");
  if (root == nullptr || *root == '\0') return path;
  return (fs::path(root) / p).string();
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.good()) throw IoError("cannot write " + path.string());
}

fs::path make_out_dir(const std::string& raw) {
  const fs::path dir(resolve_out(raw));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::unique_ptr<Distribution> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("format") &&
      doc["format"] == "mixture-1")
    return std::make_unique<MixtureModel>(MixtureModel::from_file(path));
  return std::make_unique<BayesNet>(BayesNet::from_json(buf.str()));
}

struct InstanceFlags {
  std::string family = "tree";
  int n = 5;
  int k = 2;
  int d = 1;
  std::string graph_file;

  void add_to(CLI::App* cmd, bool with_k) {
    cmd->add_option("--family", family, "Structure family: tree or chordal")
        ->check(CLI::IsMember({"tree", "chordal"}))
        ->capture_default_str();
    cmd->add_option("-n,--num-vars", n, "Number of variables")
        ->capture_default_str();
    if (with_k)
      cmd->add_option("-k,--arity", k, "Alphabet size per variable")
          ->capture_default_str();
    cmd->add_option("-d,--indegree", d, "Indegree bound (chordal)")
        ->capture_default_str();
    cmd->add_option("--graph", graph_file,
                    "Skeleton file (chordal; header \"n m\" then 1-based "
                    "edges)");
  }

  Family parsed_family() const { return family_from_name(family); }

  UndirectedGraph load_graph() {
    if (graph_file.empty())
      throw DomainError("chordal commands need --graph");
    UndirectedGraph g = UndirectedGraph::from_file(graph_file);
    n = g.num_vertices();
    return g;
  }
};

// Score-derived structure weights shared by `count` and `sample-structure`:
// the bank comes from the first `estimation` rows, the prefix scores from
// the rest, evaluated after `t` updates.
struct WeightFlags {
  std::string samples_file;
  int estimation = 0;
  int t = 0;
  double eta = 1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--samples", samples_file,
                    "Sample CSV; enables score-derived weights");
    cmd->add_option("--estimation", estimation,
                    "Rows reserved for the estimator bank")
        ->capture_default_str();
    cmd->add_option("-t,--updates", t, "Weight updates applied before use")
        ->capture_default_str();
    cmd->add_option("--eta", eta, "Step size for the weights")
        ->capture_default_str();
  }

  bool weighted() const { return !samples_file.empty(); }
};

struct ScoreState {
  SampleSet estimation;
  SampleSet online;
  CptBank bank;
  std::optional<PrefixScoreCache> scores;

  double score(int v, std::span<const int> parents, int t) const {
    return scores->score(v, parents, t);
  }
};

std::unique_ptr<ScoreState> build_score_state(const WeightFlags& w,
                                              const UndirectedGraph* skeleton,
                                              int d) {
  const SampleSet s = SampleSet::from_file(w.samples_file);
  if (w.estimation < 0 || w.estimation > s.num_rows())
    throw DomainError("estimation rows outside the sample file");
  if (!(w.eta > 0.0) || !std::isfinite(w.eta))
    throw DomainError("eta must be positive and finite");
  auto state = std::make_unique<ScoreState>();
  state->estimation = s.slice(0, w.estimation);
  state->online = s.slice(w.estimation, s.num_rows());
  if (w.t < 0 || w.t > state->online.num_rows())
    throw DomainError("updates outside 0.." +
                      std::to_string(state->online.num_rows()));
  state->bank = build_cpt_bank(state->estimation, skeleton,
                               skeleton == nullptr ? 1 : d);
  state->scores.emplace(state->bank, state->online);
  return state;
}

std::string arcs_line(const Dag& dag) {
  std::vector<std::pair<int, int>> arcs;
  for (int v = 0; v < dag.num_vertices(); ++v)
    for (int p : dag.parents(v)) arcs.emplace_back(v, p);
  std::sort(arcs.begin(), arcs.end());
  std::string line;
  for (const auto& [v, p] : arcs) {
    if (!line.empty()) line += ' ';
    line += std::to_string(p + 1) + "->" + std::to_string(v + 1);
  }
  return line;
}

WeightedDigraph tree_weights(int n, const ScoreState* state, int t,
                             double eta) {
  WeightedDigraph g(n);
  std::vector<int> parent(1);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      double lw = 0.0;
      if (state != nullptr) {
        parent[0] = i;
        lw = eta * state->score(j, parent, t);
      }
      g.add_arc(i, j, lw);
    }
  return g;
}

int cmd_gen(InstanceFlags& inst, double cpt_floor, double edge_drop,
            int max_retries, int rows, uint64_t seed, const std::string& out) {
  InstanceParams params;
  params.family = inst.parsed_family();
  params.k = inst.k;
  params.d = inst.d;
  params.cpt_floor = cpt_floor;
  params.edge_drop = edge_drop;
  params.max_retries = max_retries;
  std::optional<UndirectedGraph> skeleton;
  if (!inst.graph_file.empty()) {
    skeleton = UndirectedGraph::from_file(inst.graph_file);
    inst.n = skeleton->num_vertices();
  }
  params.n = inst.n;
  const GroundTruth gt = skeleton.has_value()
                             ? gen_on_skeleton(params, *skeleton, seed)
                             : gen_instance(params, seed);
  const fs::path dir = make_out_dir(out);
  gt.net.to_file((dir / "pstar.json").string());
  {
    std::ostringstream text;
    gt.skeleton.to_text(text);
    write_text_file(dir / "skeleton.txt", text.str());
  }
  if (rows > 0) {
    Rng rng = Rng::substream(seed, "samples");
    gt.net.sample_many(rng, rows).to_file((dir / "samples.csv").string());
  }
  std::cout << dir.string() << "\n";
  return 0;
}

int cmd_learn(const std::string& algo, InstanceFlags& inst,
              const std::string& samples_file, int estimation, int rounds,
              const std::string& eta_policy, double eta, double eps,
              double delta, const std::string& tau, uint64_t seed,
              const std::string& out) {
  LearnerConfig lc;
  lc.family = inst.parsed_family();
  std::optional<UndirectedGraph> skeleton;
  if (lc.family == Family::kChordal) {
    skeleton = inst.load_graph();
    lc.skeleton = *skeleton;
    lc.d = inst.d;
  } else if (!inst.graph_file.empty()) {
    throw DomainError("tree learning spans the complete graph; drop --graph");
  }
  lc.estimation_size = estimation;
  lc.rounds = rounds;
  lc.eta_policy = eta_policy_from_name(eta_policy);
  lc.eta = eta;
  lc.eps = eps;
  lc.delta = delta;
  lc.tau_mode = tau_mode_from_name(tau);
  lc.seed = seed;

  const SampleSet all = SampleSet::from_file(samples_file);
  const fs::path dir = make_out_dir(out);
  const auto [est, online] = split_samples(all, lc);
  est.to_file((dir / "estimation.csv").string());
  online.to_file((dir / "online.csv").string());

  std::string model_path;
  if (algo == "ewa") {
    const MixtureModel m = ewa_learn(all, lc);
    model_path = (dir / "mixture.json").string();
    m.to_file(model_path, "estimation.csv");
    write_text_file(dir / "regret.csv", compute_regret(m).to_csv());
  } else if (algo == "rwm") {
    const RwmResult r = rwm_learn(all, lc);
    model_path = (dir / "model.json").string();
    r.net.to_file(model_path);
    r.trace.to_file((dir / "trace.json").string(), "estimation.csv");
    write_text_file(dir / "regret.csv", compute_regret(r.trace).to_csv());
  } else {
    const MleResult r = mle_learn(all, lc);
    model_path = (dir / "model.json").string();
    r.net.to_file(model_path);
    if (!r.exhaustive)
      std::cerr << "note: structure search used the arborescence fallback; "
                   "treat the result as diagnostic\n";
  }
  std::cout << model_path << "\n";
  return 0;
}

int cmd_eval(const std::string& p_file, const std::string& q_file, bool exact,
             const std::string& empirical_file, uint64_t cap) {
  const std::unique_ptr<Distribution> p = load_model(p_file);
  const std::unique_ptr<Distribution> q = load_model(q_file);
  const bool both = exact && !empirical_file.empty();
  if (exact || empirical_file.empty()) {
    const double v = exact_kl(*p, *q, cap);
    if (both)
      std::cout << "exact " << format_g(v) << "\n";
    else
      std::cout << format_g(v) << "\n";
  }
  if (!empirical_file.empty()) {
    const SampleSet rows =
        SampleSet::from_file(empirical_file, std::optional<int>(p->arity()));
    const double v = empirical_kl(*p, *q, rows);
    if (both)
      std::cout << "empirical " << format_g(v) << "\n";
    else
      std::cout << format_g(v) << "\n";
  }
  return 0;
}

int cmd_count(InstanceFlags& inst, WeightFlags& weights) {
  const Family family = inst.parsed_family();
  double log_total = 0.0;
  if (family == Family::kTree) {
    if (!inst.graph_file.empty())
      throw DomainError("tree counting runs on the complete graph; drop "
                        "--graph");
    std::unique_ptr<ScoreState> state;
    if (weights.weighted()) {
      state = build_score_state(weights, nullptr, 1);
      inst.n = state->estimation.num_vars();
    }
    if (inst.n < 1) throw DomainError("need at least one vertex");
    log_total = log_arborescence_total_robust(
        tree_weights(inst.n, state.get(), weights.t, weights.eta), 0);
  } else {
    const UndirectedGraph g = inst.load_graph();
    const CliqueTree ct = build_clique_tree(g);
    const ChordalDp dp(g, ct, inst.d);
    if (weights.weighted()) {
      const std::unique_ptr<ScoreState> state =
          build_score_state(weights, &g, inst.d);
      if (state->estimation.num_vars() != g.num_vertices())
        throw DomainError("sample columns do not match the graph order");
      const int t = weights.t;
      const double eta = weights.eta;
      log_total = dp.log_total(
          [&state, t, eta](int v, std::span<const int> parents) {
            return eta * state->score(v, parents, t);
          });
    } else {
      log_total =
          dp.log_total([](int, std::span<const int>) { return 0.0; });
    }
  }
  if (weights.weighted()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", log_total);
    std::cout << "log_total " << buf << "\n";
    return 0;
  }
  const double count = log_total == kNegInf ? 0.0 : std::exp(log_total);
  if (count <= 9.007199254740992e15) {
    std::cout << std::llround(count) << "\n";
  } else {
    std::cout << format_g(count) << "\n";
  }
  return 0;
}

int cmd_sample_structure(InstanceFlags& inst, WeightFlags& weights, int draws,
                         uint64_t seed) {
  if (draws < 1) throw DomainError("need at least one draw");
  const Family family = inst.parsed_family();
  Rng rng = Rng::substream(seed, "structures");
  if (family == Family::kTree) {
    if (!inst.graph_file.empty())
      throw DomainError("tree structures span the complete graph; drop "
                        "--graph");
    std::unique_ptr<ScoreState> state;
    if (weights.weighted()) {
      state = build_score_state(weights, nullptr, 1);
      inst.n = state->estimation.num_vars();
    }
    if (inst.n < 1) throw DomainError("need at least one vertex");
    const WeightedDigraph g =
        tree_weights(inst.n, state.get(), weights.t, weights.eta);
    for (int i = 0; i < draws; ++i) {
      const std::vector<int> picked = sample_arborescence(g, 0, rng);
      std::vector<std::pair<int, int>> arcs;
      for (int id : picked) arcs.emplace_back(g.arc(id).tail, g.arc(id).head);
      std::cout << arcs_line(Dag(inst.n, arcs)) << "\n";
    }
    return 0;
  }
  const UndirectedGraph g = inst.load_graph();
  const CliqueTree ct = build_clique_tree(g);
  const ChordalDp dp(g, ct, inst.d);
  std::unique_ptr<ScoreState> state;
  if (weights.weighted()) {
    state = build_score_state(weights, &g, inst.d);
    if (state->estimation.num_vars() != g.num_vertices())
      throw DomainError("sample columns do not match the graph order");
  }
  const int t = weights.t;
  const double eta = weights.eta;
  const auto weight = [&state, t, eta](int v, std::span<const int> parents) {
    return state == nullptr ? 0.0 : eta * state->score(v, parents, t);
  };
  for (int i = 0; i < draws; ++i)
    std::cout << arcs_line(orientation_to_dag(g, dp.sample(weight, rng)))
              << "\n";
  return 0;
}

int cmd_regret(const std::string& trace_file, const std::string& out_csv) {
  const MixtureModel trace = MixtureModel::from_file(trace_file);
  const RegretReport report = compute_regret(trace);
  if (!out_csv.empty()) write_text_file(resolve_out(out_csv), report.to_csv());
  if (!report.available) {
    std::cout << "unavailable: " << report.reason << "\n";
    return 0;
  }
  const UndirectedGraph* skel = trace.skeleton();
  const double bound =
      log_structure_count_bound(trace.family(), trace.num_vars(), skel) /
      trace.eta();
  std::cout << "final_regret " << format_g(report.final_regret()) << "\n";
  std::cout << "bound " << format_g(bound) << "\n";
  return 0;
}

int cmd_run(const std::string& config_file,
            const std::vector<std::string>& overrides,
            std::optional<uint64_t> seed, const std::string& out,
            bool show_config) {
  std::string text;
  if (!config_file.empty()) {
    std::ifstream in(config_file, std::ios::binary);
    if (!in) throw IoError("cannot open " + config_file);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  for (const std::string& kv : overrides) text += kv + "\n";
  ExperimentConfig config = ExperimentConfig::from_kv_text(text);
  if (seed.has_value()) config.seed = *seed;
  if (!out.empty()) config.out_dir = out;
  config.out_dir = resolve_out(config.out_dir);
  if (show_config) {
    std::cout << config.to_kv_text();
    return 0;
  }
  const ExperimentResult result = run_experiment(config);
  std::cout << result.metrics_json;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-aware online learners for discrete Bayes nets"};
  app.require_subcommand(1);
  int rc = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a ground-truth instance");
  InstanceFlags gen_inst;
  gen_inst.add_to(gen, true);
  double gen_floor = 0.1, gen_drop = 0.15;
  int gen_retries = 100, gen_rows = 1000;
  uint64_t gen_seed = 0;
  std::string gen_out = "gen";
  gen->add_option("--cpt-floor", gen_floor, "Smallest CPT entry")
      ->capture_default_str();
  gen->add_option("--edge-drop", gen_drop, "Edge drop probability (chordal)")
      ->capture_default_str();
  gen->add_option("--max-retries", gen_retries,
                  "Skeleton attempts before giving up (chordal)")
      ->capture_default_str();
  gen->add_option("--rows", gen_rows, "Sample rows to emit")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Root seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output directory")
      ->capture_default_str();
  gen->callback([&]() {
    rc = cmd_gen(gen_inst, gen_floor, gen_drop, gen_retries, gen_rows,
                 gen_seed, gen_out);
  });

  // learn
  auto* learn = app.add_subcommand("learn", "Fit a model to a sample file");
  InstanceFlags learn_inst;
  learn_inst.add_to(learn, false);
  std::string learn_algo = "ewa";
  std::string learn_samples;
  int learn_est = 0, learn_rounds = 1;
  std::string learn_policy = "realizable", learn_tau = "analytic";
  double learn_eta = 1.0, learn_eps = 0.1, learn_delta = 0.05;
  uint64_t learn_seed = 0;
  std::string learn_out = "learn";
  learn->add_option("--algo", learn_algo, "Learner: ewa, rwm, or mle")
      ->check(CLI::IsMember({"ewa", "rwm", "mle"}))
      ->capture_default_str();
  learn->add_option("--samples", learn_samples, "Sample CSV")->required();
  learn->add_option("--estimation", learn_est,
                    "Rows reserved for the estimator bank")
      ->capture_default_str();
  learn->add_option("--rounds", learn_rounds, "Online rounds")
      ->capture_default_str();
  learn->add_option("--eta-policy", learn_policy,
                    "realizable, rwm, agnostic, or manual")
      ->capture_default_str();
  learn->add_option("--eta", learn_eta, "Step size (manual policy)")
      ->capture_default_str();
  learn->add_option("--eps", learn_eps, "Accuracy target (agnostic policy)")
      ->capture_default_str();
  learn->add_option("--delta", learn_delta,
                    "Failure probability (agnostic policy)")
      ->capture_default_str();
  learn->add_option("--tau", learn_tau,
                    "Mass floor mode: analytic or realized")
      ->capture_default_str();
  learn->add_option("--seed", learn_seed, "Root seed")->capture_default_str();
  learn->add_option("-o,--out", learn_out, "Output directory")
      ->capture_default_str();
  learn->callback([&]() {
    rc = cmd_learn(learn_algo, learn_inst, learn_samples, learn_est,
                   learn_rounds, learn_policy, learn_eta, learn_eps,
                   learn_delta, learn_tau, learn_seed, learn_out);
  });

  // eval
  auto* eval = app.add_subcommand("eval", "KL divergence between two models");
  bool eval_exact = false;
  std::string eval_empirical;
  uint64_t eval_cap = uint64_t{1} << 20;
  std::vector<std::string> eval_files;
  eval->add_flag("--exact", eval_exact, "Exact KL over the full state space");
  eval->add_option("--empirical", eval_empirical,
                   "Sample CSV drawn from the first model");
  eval->add_option("--cap", eval_cap, "State-space cap for exact sums")
      ->capture_default_str();
  eval->add_option("files", eval_files, "Reference model, then candidate")
      ->expected(2);
  eval->callback([&]() {
    rc = cmd_eval(eval_files[0], eval_files[1], eval_exact, eval_empirical,
                  eval_cap);
  });

  // count
  auto* count = app.add_subcommand(
      "count", "Count structures, optionally weighted by scores");
  InstanceFlags count_inst;
  count_inst.add_to(count, false);
  WeightFlags count_weights;
  count_weights.add_to(count);
  count->callback([&]() { rc = cmd_count(count_inst, count_weights); });

  // sample-structure
  auto* sample = app.add_subcommand("sample-structure",
                                    "Draw structures to stdout");
  InstanceFlags sample_inst;
  sample_inst.add_to(sample, false);
  WeightFlags sample_weights;
  sample_weights.add_to(sample);
  int sample_draws = 1;
  uint64_t sample_seed = 0;
  sample->add_option("--count", sample_draws, "Number of draws")
      ->capture_default_str();
  sample->add_option("--seed", sample_seed, "Root seed")
      ->capture_default_str();
  sample->callback([&]() {
    rc = cmd_sample_structure(sample_inst, sample_weights, sample_draws,
                              sample_seed);
  });

  // regret
  auto* regret = app.add_subcommand("regret",
                                    "Regret report from a mixture trace");
  std::string regret_trace, regret_out;
  regret->add_option("--trace", regret_trace, "Mixture or trace JSON file")
      ->required();
  regret->add_option("-o,--out", regret_out, "Write the per-round CSV here");
  regret->callback([&]() { rc = cmd_regret(regret_trace, regret_out); });

  // run
  auto* run = app.add_subcommand("run", "Full experiment pipeline");
  std::string run_config, run_out;
  std::vector<std::string> run_sets;
  std::optional<uint64_t> run_seed;
  bool run_show = false;
  run->add_option("--config", run_config, "Key-value config file");
  run->add_option("--set", run_sets, "Override, e.g. --set rounds=100");
  run->add_option("--seed", run_seed, "Root seed override");
  run->add_option("-o,--out", run_out, "Output directory override");
  run->add_flag("--show-config", run_show,
                "Print the resolved config and exit");
  run->callback([&]() {
    rc = cmd_run(run_config, run_sets, run_seed, run_out, run_show);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
