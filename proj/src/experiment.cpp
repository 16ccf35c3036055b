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

#include "bnol/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bnol/bayes_net.hpp"
#include "bnol/errors.hpp"
#include "bnol/instance_gen.hpp"
#include "bnol/mixture.hpp"
#include "bnol/rng.hpp"
#include "bnol/samples.hpp"
#include "json.hpp"

namespace bnol {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw DomainError("");
    return v;
  } catch (const std::exception&) {
    throw DomainError("config key '" + key + "' needs an integer, got '" +
                      value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw DomainError("");
    return v;
  } catch (const std::exception&) {
    throw DomainError("config key '" + key + "' needs a number, got '" +
                      value + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const uint64_t v = std::stoull(value, &used);
    if (used != value.size() || value.front() == '-') throw DomainError("");
    return v;
  } catch (const std::exception&) {
    throw DomainError("config key '" + key +
                      "' needs a nonnegative integer, got '" + value + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_key(ExperimentConfig& c, const std::string& key,
               const std::string& value) {
  if (key == "family") {
    c.family = family_from_name(value);
  } else if (key == "n") {
    c.n = parse_int(key, value);
  } else if (key == "k") {
    c.k = parse_int(key, value);
  } else if (key == "d") {
    c.d = parse_int(key, value);
  } else if (key == "cpt_floor") {
    c.cpt_floor = parse_double(key, value);
  } else if (key == "edge_drop") {
    c.edge_drop = parse_double(key, value);
  } else if (key == "max_retries") {
    c.max_retries = parse_int(key, value);
  } else if (key == "skeleton_file") {
    c.skeleton_file = value;
  } else if (key == "algo") {
    if (value != "ewa" && value != "rwm" && value != "mle")
      throw DomainError("algo must be ewa, rwm, or mle, got '" + value + "'");
    c.algo = value;
  } else if (key == "estimation_size") {
    c.estimation_size = parse_int(key, value);
  } else if (key == "rounds") {
    c.rounds = parse_int(key, value);
  } else if (key == "eta_policy") {
    c.eta_policy = eta_policy_from_name(value);
  } else if (key == "eta") {
    c.eta = parse_double(key, value);
  } else if (key == "eps") {
    c.eps = parse_double(key, value);
  } else if (key == "delta") {
    c.delta = parse_double(key, value);
  } else if (key == "tau_mode") {
    c.tau_mode = tau_mode_from_name(value);
  } else if (key == "holdout_size") {
    c.holdout_size = parse_int(key, value);
  } else if (key == "exact_cap") {
    c.exact_cap = parse_u64(key, value);
  } else if (key == "seed") {
    c.seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else {
    throw DomainError("unknown config key '" + key + "'");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.good()) throw IoError("cannot write " + path.string());
}

bool state_space_fits(int n, int k, uint64_t cap) {
  uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > cap / uint64_t(k)) return false;
    total *= uint64_t(k);
  }
  return total <= cap;
}

void put_regret(ordered_json& metrics, const RegretReport& report,
                double log_count_bound, double eta) {
  if (report.available) {
    metrics["regret_final"] = report.final_regret();
    metrics["regret_bound"] = log_count_bound / eta;
  } else {
    metrics["regret_final"] = nullptr;
    metrics["regret_reason"] = report.reason;
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_kv_text(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(line_no) +
                        " is not 'key = value': '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw DomainError("config line " +
                                       std::to_string(line_no) +
                                       " has an empty key");
    apply_key(c, key, value);
  }
  return c;
}

std::string ExperimentConfig::to_kv_text() const {
  std::string out;
  const auto put = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  put("family", family_name(family));
  put("n", std::to_string(n));
  put("k", std::to_string(k));
  put("d", std::to_string(d));
  put("cpt_floor", format_double(cpt_floor));
  put("edge_drop", format_double(edge_drop));
  put("max_retries", std::to_string(max_retries));
  put("skeleton_file", skeleton_file);
  put("algo", algo);
  put("estimation_size", std::to_string(estimation_size));
  put("rounds", std::to_string(rounds));
  put("eta_policy", eta_policy_name(eta_policy));
  put("eta", format_double(eta));
  put("eps", format_double(eps));
  put("delta", format_double(delta));
  put("tau_mode", tau_mode_name(tau_mode));
  put("holdout_size", std::to_string(holdout_size));
  put("exact_cap", std::to_string(exact_cap));
  put("seed", std::to_string(seed));
  return out;
}

LearnerConfig ExperimentConfig::learner_config(
    const UndirectedGraph* skeleton) const {
  LearnerConfig lc;
  lc.family = family;
  if (skeleton != nullptr) lc.skeleton = *skeleton;
  lc.d = d;
  lc.estimation_size = estimation_size;
  lc.rounds = rounds;
  lc.eta_policy = eta_policy;
  lc.eta = eta;
  lc.eps = eps;
  lc.delta = delta;
  lc.tau_mode = tau_mode;
  lc.seed = seed;
  return lc;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const auto started = std::chrono::steady_clock::now();
  if (config.algo != "ewa" && config.algo != "rwm" && config.algo != "mle")
    throw DomainError("algo must be ewa, rwm, or mle, got '" + config.algo +
                      "'");
  if (config.holdout_size < 0)
    throw DomainError("holdout size cannot be negative");
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "config.txt", config.to_kv_text());

  InstanceParams ip;
  ip.family = config.family;
  ip.n = config.n;
  ip.k = config.k;
  ip.d = config.d;
  ip.cpt_floor = config.cpt_floor;
  ip.max_retries = config.max_retries;
  ip.edge_drop = config.edge_drop;
  const GroundTruth gt =
      config.skeleton_file.empty()
          ? gen_instance(ip, config.seed)
          : gen_on_skeleton(ip, UndirectedGraph::from_file(config.skeleton_file),
                            config.seed);
  gt.net.to_file((dir / "pstar.json").string());
  {
    std::ostringstream text;
    gt.skeleton.to_text(text);
    write_text(dir / "skeleton.txt", text.str());
  }

  Rng sample_rng = Rng::substream(config.seed, "samples");
  const SampleSet all =
      gt.net.sample_many(sample_rng, config.estimation_size + config.rounds);
  const LearnerConfig lc = config.learner_config(
      config.family == Family::kChordal ? &gt.skeleton : nullptr);
  const auto [est, online] = split_samples(all, lc);
  est.to_file((dir / "estimation.csv").string());
  online.to_file((dir / "online.csv").string());

  SampleSet holdout(config.n, config.k);
  if (config.holdout_size > 0) {
    Rng holdout_rng = Rng::substream(config.seed, "holdout");
    holdout = gt.net.sample_many(holdout_rng, config.holdout_size);
    holdout.to_file((dir / "holdout.csv").string());
  }

  ordered_json metrics;
  metrics["algo"] = config.algo;
  metrics["family"] = family_name(config.family);
  metrics["n"] = config.n;
  metrics["k"] = config.k;
  if (config.family == Family::kChordal) metrics["d"] = config.d;
  metrics["seed"] = config.seed;
  metrics["estimation_rows"] = est.num_rows();
  metrics["rounds"] = config.rounds;

  const bool exact_ok = state_space_fits(config.n, config.k, config.exact_cap);
  const UndirectedGraph* skel =
      config.family == Family::kChordal ? &gt.skeleton : nullptr;
  const double log_count_bound =
      log_structure_count_bound(config.family, config.n, skel);

  const Distribution* learned = nullptr;
  std::string model_file;
  std::optional<MixtureModel> mixture;
  BayesNet net;
  if (config.algo == "ewa") {
    mixture = ewa_learn(all, lc);
    model_file = "mixture.json";
    mixture->to_file((dir / model_file).string(), "estimation.csv");
    const RegretReport report = compute_regret(*mixture);
    write_text(dir / "regret.csv", report.to_csv());
    metrics["eta"] = mixture->eta();
    put_regret(metrics, report, log_count_bound, mixture->eta());
    learned = &*mixture;
  } else if (config.algo == "rwm") {
    RwmResult result = rwm_learn(all, lc);
    model_file = "model.json";
    result.net.to_file((dir / model_file).string());
    result.trace.to_file((dir / "trace.json").string(), "estimation.csv");
    const RegretReport report = compute_regret(result.trace);
    write_text(dir / "regret.csv", report.to_csv());
    metrics["eta"] = result.trace.eta();
    metrics["sampled_round"] = result.sampled_round;
    put_regret(metrics, report, log_count_bound, result.trace.eta());
    net = std::move(result.net);
    learned = &net;
  } else {
    MleResult result = mle_learn(all, lc);
    model_file = "model.json";
    result.net.to_file((dir / model_file).string());
    metrics["log_likelihood"] = result.log_likelihood;
    metrics["exhaustive"] = result.exhaustive;
    net = std::move(result.net);
    learned = &net;
  }
  metrics["model_file"] = model_file;

  if (exact_ok)
    metrics["exact_kl"] = exact_kl(gt.net, *learned, config.exact_cap);
  else
    metrics["exact_kl"] = nullptr;
  if (config.holdout_size > 0)
    metrics["empirical_kl"] = empirical_kl(gt.net, *learned, holdout);
  else
    metrics["empirical_kl"] = nullptr;
  metrics["holdout_rows"] = config.holdout_size;

  const std::string metrics_text = metrics.dump(2) + "\n";
  write_text(dir / "metrics.json", metrics_text);

  const auto elapsed = std::chrono::steady_clock::now() - started;
  const double ms =
      std::chrono::duration<double, std::milli>(elapsed).count();
  write_text(dir / "timing.txt", "wall_ms " + format_double(ms) + "\n");
  return ExperimentResult{metrics_text, dir.string()};
}

}  // namespace bnol
