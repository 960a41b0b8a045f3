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

#include "qdc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qdc/allpair.hpp"
#include "qdc/cost_model.hpp"
#include "qdc/dataset.hpp"
#include "qdc/error.hpp"
#include "qdc/metrics.hpp"
#include "qdc/pipeline.hpp"

namespace qdc {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::uint64_t> shots;
};

json load_config(const Flags& f) {
  if (f.config.empty()) return json::object();
  std::ifstream in(f.config);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + f.config);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, "config must be a JSON object");
  return j;
}

// Dataset paths are relative to the config file.
std::string resolve_path(const Flags& f, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !f.config.empty()) path = fs::path(f.config).parent_path() / path;
  return fs::absolute(path).lexically_normal().string();
}

std::string output_root(const Flags& f, const json& cfg) {
  if (f.out) return *f.out;
  return resolve_path(f, cfg.value("out", std::string(".")));
}

std::uint64_t master_seed(const Flags& f, const json& cfg) {
  if (f.seed) return *f.seed;
  return cfg.value("master_seed", std::uint64_t{1});
}

// Resolved {"mode", "shots"} after flag overrides.
json resolve_plan(const Flags& f, const json& cfg) {
  json plan = cfg.value("plan", json{{"mode", "exact"}, {"shots", 1000}});
  reject_unknown_keys(plan, {"mode", "shots"}, "plan");
  if (!plan.contains("mode")) plan["mode"] = "exact";
  if (!plan.contains("shots")) plan["shots"] = 1000;
  if (f.mode) plan["mode"] = *f.mode;
  if (f.shots) plan["shots"] = *f.shots;
  const std::string mode = plan["mode"].get<std::string>();
  if (mode != "exact" && mode != "sampled") throw Error(ErrorCode::kConfigError, "unknown mode '" + mode + "'");
  if (plan["shots"].get<std::uint64_t>() < 1) throw Error(ErrorCode::kConfigError, "shots must be >= 1");
  return plan;
}

ShotPlan make_plan(const json& plan, std::uint64_t seed) {
  if (plan.at("mode") == "exact") return ShotPlan::exact();
  return ShotPlan::sampled(plan.at("shots").get<std::uint64_t>(), seed);
}

std::string hashed_run_dir(const std::string& root, const json& resolved, std::uint64_t seed) {
  json j = resolved;
  j.erase("master_seed");
  j.erase("out");
  char buf[64];
  std::snprintf(buf, sizeof buf, "run-%016llx-%llu", static_cast<unsigned long long>(fnv1a64(j.dump())),
                static_cast<unsigned long long>(seed));
  return (fs::path(root) / buf).string();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + p.string());
  out << text;
}

int cmd_generate(const Flags& f, std::ostream& out) {
  const json cfg = load_config(f);
  reject_unknown_keys(cfg, {"blobs", "master_seed", "out"}, "generate");
  BlobSpec spec;
  const json blobs = cfg.value("blobs", json::object());
  reject_unknown_keys(blobs, {"k", "per_blob", "dim", "std", "separation"}, "generate.blobs");
  spec.k = blobs.value("k", spec.k);
  spec.per_blob = blobs.value("per_blob", spec.per_blob);
  spec.dim = blobs.value("dim", spec.dim);
  spec.stddev = number_field(blobs, "std", spec.stddev);
  spec.separation = number_field(blobs, "separation", spec.separation);
  spec.seed = master_seed(f, cfg);
  const Dataset d = generate_blobs(spec);
  const std::string path = f.out ? *f.out : resolve_path(f, cfg.value("out", std::string("data.csv")));
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  write_dataset_csv(path, d);
  out << path << '\n';
  return 0;
}

Dataset load_data(const Flags& f, json& resolved) {
  if (!resolved.contains("data")) throw Error(ErrorCode::kConfigError, "config needs a \"data\" CSV path");
  const std::string path = resolve_path(f, resolved.at("data").get<std::string>());
  resolved["data"] = path;
  return read_dataset_csv(path);
}

std::vector<int> require_labels(const Dataset& d) {
  if (!d.labels) throw Error(ErrorCode::kBadLabels, "dataset has no label column");
  return *d.labels;
}

int cmd_train_svm(const Flags& f, std::ostream& out) {
  json cfg = load_config(f);
  reject_unknown_keys(cfg, {"data", "test", "kernel", "eta", "eps_k", "inversion", "plan", "master_seed", "out"},
                      "train-svm");
  json resolved = cfg;
  const Dataset train = load_data(f, resolved);
  std::optional<Dataset> test;
  if (cfg.contains("test")) {
    resolved["test"] = resolve_path(f, cfg.at("test").get<std::string>());
    test = read_dataset_csv(resolved["test"].get<std::string>());
  }
  const KernelSpec kernel = cfg.contains("kernel") ? kernel_from_json(cfg.at("kernel")) : KernelSpec::linear();
  const double eta = number_field(cfg, "eta", 10.0);
  std::optional<double> eps_k;
  if (cfg.contains("eps_k")) eps_k = number_field(cfg, "eps_k", 0.0);
  const InversionMode mode =
      cfg.contains("inversion") ? inversion_mode_from_json(cfg.at("inversion")) : InversionMode::exact_spectral();
  const std::uint64_t seed = master_seed(f, cfg);
  resolved["master_seed"] = seed;
  resolved["plan"] = resolve_plan(f, cfg);
  resolved["kernel"] = to_json(kernel);
  resolved["eta"] = eta;
  resolved["inversion"] = to_json(mode);
  resolved.erase("out");

  const std::vector<int> labels = require_labels(train);
  int g = 0;
  for (int y : labels) {
    if (y < 0) throw Error(ErrorCode::kBadLabels, "labels must be >= 0");
    g = std::max(g, y + 1);
  }
  if (g < 2) throw Error(ErrorCode::kBadLabels, "need at least two classes");
  const MulticlassSVMModel model = train_multiclass(train.x, labels, g, kernel, eta, eps_k, mode);
  const ShotPlan plan = make_plan(resolved["plan"], seed);

  json fidelities = json::array();
  for (const QuantumSVMModel& bin : model.binaries) {
    const BinarySVMModel c = train_classical(bin.support, bin.labels, kernel, eta);
    fidelities.push_back(solution_fidelity(bin, c.b, c.alpha));
  }
  auto accuracy = [&](const Dataset& d, std::uint64_t tag) {
    const std::vector<int> truth = require_labels(d);
    double quantum = 0.0, oracle = 0.0;
    AllPairOptions exact_vote;
    exact_vote.oracle = true;
    for (Index i = 0; i < d.x.rows(); ++i) {
      const RVector x = d.x.row(i).transpose();
      const ShotPlan p = plan.is_sampled() ? plan.derive(tag + static_cast<std::uint64_t>(i)) : plan;
      quantum += classify_all_pairs(model, x, p) == truth[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      oracle += classify_all_pairs(model, x, ShotPlan::exact(), exact_vote) == truth[static_cast<std::size_t>(i)]
                    ? 1.0
                    : 0.0;
    }
    const double m = static_cast<double>(d.x.rows());
    return json{{"quantum", quantum / m}, {"majority_vote", oracle / m}};
  };
  json report{{"schema", 1},
              {"g", g},
              {"pairs", model.binaries.size()},
              {"fidelity", fidelities},
              {"train_accuracy", accuracy(train, 0)}};
  if (test) report["test_accuracy"] = accuracy(*test, 1ULL << 32);

  const std::string dir = hashed_run_dir(output_root(f, cfg), resolved, seed);
  fs::create_directories(dir);
  write_text(fs::path(dir) / "config.json", resolved.dump(2) + "\n");
  write_text(fs::path(dir) / "report.json", report.dump(2) + "\n");
  write_text(fs::path(dir) / "model.json", to_json(model).dump() + "\n");
  out << dir << '\n';
  return 0;
}

int cmd_cluster(const Flags& f, std::ostream& out) {
  json cfg = load_config(f);
  reject_unknown_keys(cfg, {"data", "k", "kmeans", "plan", "master_seed", "out"}, "cluster");
  json resolved = cfg;
  const Dataset d = load_data(f, resolved);
  const std::uint64_t seed = master_seed(f, cfg);
  // Reuse the pipeline's K-Means and seeding settings without a network.
  json pj{{"k", cfg.value("k", 3)}, {"master_seed", seed}, {"plan", resolve_plan(f, cfg)}, {"train_deep_svm", false}};
  if (cfg.contains("kmeans")) pj["kmeans"] = cfg.at("kmeans");
  const PipelineConfig pc = pipeline_config_from_json(pj);
  resolved["k"] = pc.k;
  resolved["master_seed"] = seed;
  resolved["plan"] = pj["plan"];
  resolved["kmeans"] = to_json(pc)["kmeans"];
  resolved.erase("out");

  PipelineState state = init_pipeline(pc, d);
  state.features = d.x;
  const std::vector<Index> seeds = choose_seeds(state);
  QKMeansOptions opt;
  opt.iters = pc.kmeans_iters;
  opt.anneal = pc.anneal;
  opt.copies = pc.copies;
  opt.plan = make_plan(pj["plan"], seed);
  const auto [result, zeta] = qkmeans_run(d.x, pc.k, seeds, opt);
  const ClusterResult lloyd = lloyd_classical(d.x, pc.k, seeds, pc.kmeans_iters);
  json report{{"schema", 1},
              {"seeds", seeds},
              {"objective", result.objective},
              {"iterations", result.iterations},
              {"lloyd_objective", lloyd.objective},
              {"lloyd_agreement", 1.0 - churn(result.assignments, lloyd.assignments)},
              {"cluster_state_dim", zeta.zeta.dim()}};
  if (d.labels) {
    report["purity"] = purity(result.assignments, *d.labels);
    report["nmi"] = nmi(result.assignments, *d.labels);
    report["accuracy"] = matched_accuracy(result.assignments, *d.labels);
  }
  const std::string dir = hashed_run_dir(output_root(f, cfg), resolved, seed);
  fs::create_directories(dir);
  write_text(fs::path(dir) / "config.json", resolved.dump(2) + "\n");
  write_text(fs::path(dir) / "report.json", report.dump(2) + "\n");
  write_text(fs::path(dir) / "cluster.json", to_json(result).dump(2) + "\n");
  out << dir << '\n';
  return 0;
}

int cmd_deep_cluster(const Flags& f, std::ostream& out) {
  json cfg = load_config(f);
  reject_unknown_keys(cfg, {"data", "pipeline", "master_seed", "plan", "out"}, "deep-cluster");
  json resolved = cfg;
  const Dataset d = load_data(f, resolved);
  json pj = cfg.value("pipeline", json::object());
  if (!pj.is_object()) throw Error(ErrorCode::kConfigError, "pipeline must be an object");
  if (f.seed || cfg.contains("master_seed") || !pj.contains("master_seed")) pj["master_seed"] = master_seed(f, cfg);
  if (f.mode || f.shots || cfg.contains("plan") || !pj.contains("plan")) {
    json base = cfg;
    if (!cfg.contains("plan") && pj.contains("plan")) base["plan"] = pj["plan"];
    pj["plan"] = resolve_plan(f, base);
  }
  const PipelineConfig pc = pipeline_config_from_json(pj);
  resolved.erase("out");
  resolved.erase("master_seed");
  resolved.erase("plan");
  resolved["pipeline"] = to_json(pc);

  const PipelineResult result = run_pipeline(pc, d);
  const std::string dir = (fs::path(output_root(f, cfg)) / run_directory_name(pc)).string();
  write_pipeline_artifacts(dir, result, resolved);
  out << dir << '\n';
  return 0;
}

int cmd_cost(const Flags& f, std::ostream& out) {
  json cfg = load_config(f);
  reject_unknown_keys(cfg, {"params", "sweep", "master_seed", "out"}, "cost");
  json resolved = cfg;
  resolved.erase("out");
  const CostParams defaults = cfg.contains("params") ? cost_params_from_json(cfg.at("params")) : CostParams{};
  std::vector<CostParams> params;
  if (cfg.contains("sweep")) {
    const std::string path = resolve_path(f, cfg.at("sweep").get<std::string>());
    resolved["sweep"] = path;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open sweep " + path);
    params = read_cost_sweep(in, defaults);
  } else {
    defaults.validate();
    params.push_back(defaults);
  }
  resolved["params"] = to_json(defaults);
  std::vector<CostReport> reports;
  json rows = json::array();
  for (const CostParams& p : params) {
    reports.push_back(cost_report(p));
    rows.push_back(json{{"params", to_json(p)}, {"report", to_json(reports.back())}});
  }
  const std::uint64_t seed = master_seed(f, cfg);
  const std::string dir = hashed_run_dir(output_root(f, cfg), resolved, seed);
  fs::create_directories(dir);
  write_text(fs::path(dir) / "config.json", resolved.dump(2) + "\n");
  write_text(fs::path(dir) / "report.json", json{{"schema", 1}, {"rows", rows}}.dump(2) + "\n");
  std::ostringstream csv;
  write_cost_report_csv(csv, params, reports);
  write_text(fs::path(dir) / "report.csv", csv.str());
  out << dir << '\n';
  return 0;
}

int exit_code_for(ErrorCode code) { return is_numerical(code) ? 1 : 2; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum deep clustering simulator"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", flags.config, "JSON configuration file");
    if (needs_config) opt->required();
    sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
    sub->add_option("--mode", flags.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
    sub->add_option("--out", flags.out, "output directory (output file for generate)");
    sub->add_option("--shots", flags.shots, "shots per sampled measurement")->check(CLI::PositiveNumber);
  };
  auto* gen = app.add_subcommand("generate", "write a synthetic Gaussian-blob dataset");
  add_common(gen, false);
  auto* svm = app.add_subcommand("train-svm", "train and evaluate a quantum multiclass SVM");
  add_common(svm, true);
  auto* clu = app.add_subcommand("cluster", "quantum K-Means with a Lloyd comparison");
  add_common(clu, true);
  auto* deep = app.add_subcommand("deep-cluster", "full deep clustering pipeline");
  add_common(deep, true);
  auto* cost = app.add_subcommand("cost", "evaluate the runtime cost model");
  add_common(cost, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: CONFIG_ERROR: " << e.what() << '\n';
    return 2;
  }
  try {
    if (gen->parsed()) return cmd_generate(flags, out);
    if (svm->parsed()) return cmd_train_svm(flags, out);
    if (clu->parsed()) return cmd_cluster(flags, out);
    if (deep->parsed()) return cmd_deep_cluster(flags, out);
    if (cost->parsed()) return cmd_cost(flags, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: CONFIG_ERROR: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: IO_ERROR: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace qdc
