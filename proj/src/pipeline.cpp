// Copyright 2026 The qdeepclust Authors
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

#include "qdc/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "qdc/error.hpp"
#include "qdc/metrics.hpp"

namespace qdc {
namespace {

constexpr std::uint64_t kNetInitTag = 1;
constexpr std::uint64_t kShuffleTag = 2;
constexpr std::uint64_t kKMeansTag = 0x1000;
constexpr std::uint64_t kVoteTag = 0x2000;
constexpr int kMaxHalvings = 30;

std::string to_string(SeedRule r) { return r == SeedRule::kShuffle ? "shuffle" : "maximin"; }

SeedRule seed_rule_from_string(const std::string& s) {
  if (s == "maximin") return SeedRule::kMaximin;
  if (s == "shuffle") return SeedRule::kShuffle;
  throw Error(ErrorCode::kConfigError, "unknown seed rule '" + s + "'");
}

ShotPlan epoch_plan(const PipelineConfig& c, int epoch, std::uint64_t tag) {
  if (c.mode == MeasureMode::kExact) return ShotPlan::exact();
  return ShotPlan::sampled(c.shots, derive_seed(c.master_seed, tag + static_cast<std::uint64_t>(epoch)));
}

std::vector<Index> shuffled_order(Index m, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(derive_seed(seed, kShuffleTag));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::vector<Index> maximin_seeds(const RMatrix& f, int k, Index first) {
  std::vector<Index> seeds{first};
  RVector nearest(f.rows());
  for (Index j = 0; j < f.rows(); ++j) nearest[j] = (f.row(j) - f.row(first)).squaredNorm();
  while (static_cast<int>(seeds.size()) < k) {
    Index best = 0;
    for (Index j = 1; j < f.rows(); ++j) {
      if (nearest[j] > nearest[best]) best = j;
    }
    if (!(nearest[best] > 0.0)) throw Error(ErrorCode::kBadSeeds, "fewer distinct points than clusters");
    seeds.push_back(best);
    for (Index j = 0; j < f.rows(); ++j) nearest[j] = std::min(nearest[j], (f.row(j) - f.row(best)).squaredNorm());
  }
  return seeds;
}

FeatureNet build_net(const PipelineConfig& c, Index input_dim) {
  const std::uint64_t seed = derive_seed(c.master_seed, kNetInitTag);
  FeatureNet net;
  if (c.net.kind == "reference") {
    net = make_reference_net(input_dim, c.net.output_dim, seed, c.net.channels);
    for (Layer& l : net.layers) l.activation = c.net.activation;
  } else {
    std::vector<Index> sizes{input_dim};
    sizes.insert(sizes.end(), c.net.hidden.begin(), c.net.hidden.end());
    sizes.push_back(c.net.output_dim);
    net = make_dense_net(sizes, c.net.activation, seed);
  }
  net.validate();
  return net;
}

// Largest step that keeps gradient descent on the (convex) head loss
// stable: 1 / Lipschitz bound of its gradient.
double safe_head_rate(const HingeHead& head, const RMatrix& features) {
  const double bound = 1.0 + 2.0 * head.c * features.squaredNorm();
  return std::min(head.lr, 1.0 / bound);
}

}  // namespace

DeepSVMConfig default_pipeline_deep_svm() {
  DeepSVMConfig c;
  c.g = 3;
  SvmNodeSpec lin;
  SvmNodeSpec rbf;
  rbf.kernel = KernelSpec::rbf(0.5);
  c.hidden = {{lin, rbf}};
  return c;
}

void PipelineConfig::validate() const {
  if (epochs < 1) throw Error(ErrorCode::kConfigError, "epochs must be >= 1");
  if (k < 1) throw Error(ErrorCode::kConfigError, "K must be >= 1");
  if (train_deep_svm && k >= 2) {
    if (deep_svm.g != k) throw Error(ErrorCode::kConfigError, "deep_svm.g must equal K");
    deep_svm.validate();
  }
  if (net.kind != "reference" && net.kind != "dense") throw Error(ErrorCode::kConfigError, "unknown net kind '" + net.kind + "'");
  if (net.output_dim < 1 || net.channels < 1) throw Error(ErrorCode::kConfigError, "net sizes must be positive");
  if (!(head_c > 0.0) || !(head_lr > 0.0) || head_gr < 0) throw Error(ErrorCode::kConfigError, "invalid head settings");
  if (net_steps < 0 || !(net_lr >= 0.0)) throw Error(ErrorCode::kConfigError, "invalid training settings");
  if (kmeans_iters < 0 || copies < 1) throw Error(ErrorCode::kConfigError, "invalid kmeans settings");
  if (anneal.steps < 1 || !(anneal.t_anneal > 0.0)) throw Error(ErrorCode::kConfigError, "invalid anneal schedule");
  if (mode == MeasureMode::kSampled && shots < 1) throw Error(ErrorCode::kConfigError, "shots must be >= 1");
}

json to_json(const PipelineConfig& c) {
  return json{{"epochs", c.epochs},
              {"k", c.k},
              {"deep_svm", to_json(c.deep_svm)},
              {"train_deep_svm", c.train_deep_svm},
              {"net",
               {{"kind", c.net.kind},
                {"output_dim", c.net.output_dim},
                {"channels", c.net.channels},
                {"hidden", c.net.hidden},
                {"activation", to_string(c.net.activation)}}},
              {"head", {{"c", c.head_c}, {"lr", c.head_lr}, {"gr", c.head_gr}}},
              {"train", {{"steps", c.net_steps}, {"lr", c.net_lr}}},
              {"kmeans",
               {{"iters", c.kmeans_iters},
                {"seed_rule", to_string(c.seed_rule)},
                {"anneal", {{"t_anneal", c.anneal.t_anneal}, {"steps", c.anneal.steps}}},
                {"copies", c.copies}}},
              {"plan", {{"mode", c.mode == MeasureMode::kExact ? "exact" : "sampled"}, {"shots", c.shots}}},
              {"master_seed", c.master_seed}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
  reject_unknown_keys(j, {"epochs", "k", "deep_svm", "train_deep_svm", "net", "head", "train", "kmeans", "plan",
                          "master_seed"},
                      "pipeline");
  PipelineConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.k = j.value("k", c.k);
  c.train_deep_svm = j.value("train_deep_svm", c.train_deep_svm);
  c.master_seed = j.value("master_seed", c.master_seed);
  if (j.contains("deep_svm")) {
    c.deep_svm = deep_svm_config_from_json(j.at("deep_svm"));
    if (!j.at("deep_svm").contains("g")) c.deep_svm.g = c.k;
  } else {
    c.deep_svm.g = c.k;
  }
  if (j.contains("net")) {
    const json& n = j.at("net");
    reject_unknown_keys(n, {"kind", "output_dim", "channels", "hidden", "activation"}, "pipeline.net");
    c.net.kind = n.value("kind", c.net.kind);
    c.net.output_dim = n.value("output_dim", c.net.output_dim);
    c.net.channels = n.value("channels", c.net.channels);
    c.net.hidden = n.value("hidden", c.net.hidden);
    if (n.contains("activation")) c.net.activation = activation_from_string(n.at("activation").get<std::string>());
  }
  if (j.contains("head")) {
    const json& h = j.at("head");
    reject_unknown_keys(h, {"c", "lr", "gr"}, "pipeline.head");
    c.head_c = number_field(h, "c", c.head_c);
    c.head_lr = number_field(h, "lr", c.head_lr);
    c.head_gr = h.value("gr", c.head_gr);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    reject_unknown_keys(t, {"steps", "lr"}, "pipeline.train");
    c.net_steps = t.value("steps", c.net_steps);
    c.net_lr = number_field(t, "lr", c.net_lr);
  }
  if (j.contains("kmeans")) {
    const json& km = j.at("kmeans");
    reject_unknown_keys(km, {"iters", "seed_rule", "anneal", "copies"}, "pipeline.kmeans");
    c.kmeans_iters = km.value("iters", c.kmeans_iters);
    if (km.contains("seed_rule")) c.seed_rule = seed_rule_from_string(km.at("seed_rule").get<std::string>());
    c.copies = km.value("copies", c.copies);
    if (km.contains("anneal")) {
      const json& a = km.at("anneal");
      reject_unknown_keys(a, {"t_anneal", "steps"}, "pipeline.kmeans.anneal");
      c.anneal.t_anneal = number_field(a, "t_anneal", c.anneal.t_anneal);
      c.anneal.steps = a.value("steps", c.anneal.steps);
    }
  }
  if (j.contains("plan")) {
    const json& p = j.at("plan");
    reject_unknown_keys(p, {"mode", "shots"}, "pipeline.plan");
    const std::string mode = p.value("mode", std::string("exact"));
    if (mode == "exact") {
      c.mode = MeasureMode::kExact;
    } else if (mode == "sampled") {
      c.mode = MeasureMode::kSampled;
    } else {
      throw Error(ErrorCode::kConfigError, "unknown plan mode '" + mode + "'");
    }
    c.shots = p.value("shots", c.shots);
  }
  c.validate();
  return c;
}

json to_json(const EpochReport& r) {
  json j{{"schema", 1},
         {"epoch", r.epoch},
         {"hinge_loss", r.hinge_loss},
         {"kmeans_objective", r.kmeans_objective},
         {"churn", r.churn},
         {"kmeans_iterations", r.kmeans_iterations}};
  auto put = [&](const char* key, const std::optional<double>& v) { j[key] = v ? json(*v) : json(nullptr); };
  put("svm_agreement", r.svm_agreement);
  put("purity", r.purity);
  put("nmi", r.nmi);
  put("accuracy", r.accuracy);
  return j;
}

PipelineState init_pipeline(const PipelineConfig& config, const Dataset& data) {
  config.validate();
  if (data.x.rows() < 1 || data.x.cols() < 1) throw Error(ErrorCode::kConfigError, "dataset is empty");
  if (config.k > data.x.rows()) throw Error(ErrorCode::kBadSeeds, "K exceeds the number of points");
  if (data.labels && static_cast<Index>(data.labels->size()) != data.x.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "label count does not match the dataset");
  }
  PipelineState s;
  s.config = config;
  s.inputs = data.x;
  s.truth = data.labels;
  s.net = build_net(config, data.x.cols());
  s.head.w = RMatrix::Zero(config.k, s.net.output_dim());
  s.head.c = config.head_c;
  s.head.lr = config.head_lr;
  s.head.gr = config.head_gr;
  return s;
}

std::vector<Index> choose_seeds(const PipelineState& state) {
  const RMatrix& f = state.features;
  const int k = state.config.k;
  if (state.previous.empty()) {
    const std::vector<Index> order = shuffled_order(f.rows(), state.config.master_seed);
    if (state.config.seed_rule == SeedRule::kMaximin) return maximin_seeds(f, k, order.front());
    std::vector<Index> seeds;
    for (Index j : order) {
      const bool fresh = std::none_of(seeds.begin(), seeds.end(), [&](Index s) { return f.row(s) == f.row(j); });
      if (fresh) seeds.push_back(j);
      if (static_cast<int>(seeds.size()) == k) return seeds;
    }
    throw Error(ErrorCode::kBadSeeds, "fewer distinct points than clusters");
  }
  // Warm start: the point nearest to each previous cluster's mean in the
  // current feature space.
  std::vector<int> prev = state.previous;
  const RMatrix means = update_centroids(f, prev, k);
  std::vector<Index> seeds;
  for (int c = 0; c < k; ++c) {
    Index best = -1;
    double best_d = 0.0;
    for (Index j = 0; j < f.rows(); ++j) {
      if (std::find(seeds.begin(), seeds.end(), j) != seeds.end()) continue;
      const double d = (f.row(j) - means.row(c)).squaredNorm();
      if (best < 0 || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    seeds.push_back(best);
  }
  return seeds;
}

void extract_stage(PipelineState& state) {
  state.features = forward_batch(state.net, state.inputs);
  if (!state.features.allFinite()) throw Error(ErrorCode::kNonFinite, "non-finite features");
}

void cluster_stage(PipelineState& state) {
  QKMeansOptions opt;
  opt.iters = state.config.kmeans_iters;
  opt.anneal = state.config.anneal;
  opt.copies = state.config.copies;
  opt.plan = epoch_plan(state.config, state.epoch, kKMeansTag);
  state.clusters = qkmeans_run(state.features, state.config.k, choose_seeds(state), opt).first;
}

void svm_stage(PipelineState& state) {
  if (!state.config.train_deep_svm || state.config.k < 2) {
    state.stack.reset();
    return;
  }
  DeepSVMConfig cfg = state.config.deep_svm;
  cfg.g = state.config.k;
  state.stack = train_stack(cfg, state.features, state.clusters.assignments);
}

double network_stage(PipelineState& state) {
  const RMatrix& pseudo = state.clusters.pseudo_labels;
  HingeHead head = state.head;
  head.lr = safe_head_rate(state.head, state.features);
  head = refit_head(head, state.features, pseudo);
  FeatureNet net = state.net;
  double loss = hinge_loss(head, state.features, pseudo);
  for (int s = 0; s < state.config.net_steps; ++s) {
    // Backtracking: halve the rate until the step lowers the loss; a
    // step that never does is skipped.
    double lr = state.config.net_lr;
    for (int tries = 0; tries < kMaxHalvings && lr > 0.0; ++tries, lr *= 0.5) {
      TrainStepResult r = train_step(net, head, state.inputs, pseudo, lr);
      const RMatrix f = forward_batch(r.net, state.inputs);
      if (!f.allFinite()) continue;
      const double next = hinge_loss(r.head, f, pseudo);
      if (next < loss) {
        net = std::move(r.net);
        head.w = r.head.w;
        loss = next;
        break;
      }
    }
  }
  state.net = std::move(net);
  state.head.w = head.w;
  const RMatrix after = forward_batch(state.net, state.inputs);
  if (!after.allFinite()) throw Error(ErrorCode::kNonFinite, "non-finite features after update");
  return hinge_loss(state.head, after, pseudo);
}

EpochReport run_epoch(PipelineState& state) {
  EpochReport r;
  r.epoch = state.epoch;
  extract_stage(state);
  cluster_stage(state);
  svm_stage(state);
  const std::vector<int>& a = state.clusters.assignments;
  if (state.stack) {
    const ShotPlan plan = epoch_plan(state.config, state.epoch, kVoteTag);
    double hit = 0.0;
    for (Index i = 0; i < state.features.rows(); ++i) {
      const int pred = classify_stack(*state.stack, state.features.row(i).transpose(),
                                      plan.is_sampled() ? plan.derive(static_cast<std::uint64_t>(i)) : plan);
      hit += pred == a[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    r.svm_agreement = hit / static_cast<double>(state.features.rows());
  }
  r.hinge_loss = network_stage(state);
  r.kmeans_objective = state.clusters.objective;
  r.kmeans_iterations = state.clusters.iterations;
  r.churn = state.previous.empty() ? 0.0 : churn(state.previous, a);
  if (state.truth) {
    r.purity = purity(a, *state.truth);
    r.nmi = nmi(a, *state.truth);
    r.accuracy = matched_accuracy(a, *state.truth);
  }
  state.previous = a;
  ++state.epoch;
  return r;
}

PipelineResult run_pipeline(const PipelineConfig& config, const Dataset& data) {
  PipelineResult out{{}, init_pipeline(config, data), json()};
  for (int e = 0; e < config.epochs; ++e) out.epochs.push_back(run_epoch(out.state));
  const EpochReport& last = out.epochs.back();
  out.summary = json{{"schema", 1},
                     {"run", run_directory_name(config)},
                     {"epochs", config.epochs},
                     {"k", config.k},
                     {"points", data.x.rows()},
                     {"final", to_json(last)},
                     {"assignments", out.state.clusters.assignments}};
  return out;
}

std::string run_directory_name(const PipelineConfig& config) {
  json j = to_json(config);
  j.erase("master_seed");
  char buf[64];
  std::snprintf(buf, sizeof buf, "run-%016llx-%llu", static_cast<unsigned long long>(fnv1a64(j.dump())),
                static_cast<unsigned long long>(config.master_seed));
  return buf;
}

void write_pipeline_artifacts(const std::string& dir, const PipelineResult& result, const json& resolved_config) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + (fs::path(dir) / name).string());
    out << text;
  };
  write("config.json", resolved_config.dump(2) + "\n");
  std::string lines;
  for (const EpochReport& r : result.epochs) lines += to_json(r).dump() + "\n";
  write("epochs.jsonl", lines);
  write("summary.json", result.summary.dump(2) + "\n");
  write("cluster.json", to_json(result.state.clusters).dump(2) + "\n");
  if (result.state.stack) write("stack.json", stack_to_json(*result.state.stack).dump() + "\n");
  write("net.json", to_json(result.state.net).dump(2) + "\n");
}

}  // namespace qdc
