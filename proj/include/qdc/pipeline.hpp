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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdc/dataset.hpp"
#include "qdc/deep_svm.hpp"
#include "qdc/feature_net.hpp"
#include "qdc/qkmeans.hpp"

namespace qdc {

enum class SeedRule { kMaximin, kShuffle };

struct NetSpec {
  /// "reference" (conv + dense) or "dense".
  std::string kind = "reference";
  Index output_dim = 8;
  int channels = 4;
  /// Hidden sizes between input and output for kind "dense".
  std::vector<Index> hidden;
  Activation activation = Activation::kTanh;
};

/// One hidden layer of two SVMs (linear, rbf gamma 0.5) and a linear
/// final SVM, all eta = 10.
DeepSVMConfig default_pipeline_deep_svm();

struct PipelineConfig {
  int epochs = 20;
  int k = 3;
  DeepSVMConfig deep_svm = default_pipeline_deep_svm();
  bool train_deep_svm = true;
  NetSpec net;
  /// Head template; its weights are created at g x d zeros.
  double head_c = 1.0;
  double head_lr = 0.05;
  int head_gr = 200;
  /// Network gradient-descent steps per epoch and their rate.
  int net_steps = 5;
  double net_lr = 0.01;
  int kmeans_iters = 20;
  SeedRule seed_rule = SeedRule::kMaximin;
  AnnealSchedule anneal;
  int copies = 1;
  MeasureMode mode = MeasureMode::kExact;
  std::uint64_t shots = 1000;
  std::uint64_t master_seed = 1;

  void validate() const;
};

json to_json(const PipelineConfig& config);
/// Rejects unknown keys at every level with kConfigError.
PipelineConfig pipeline_config_from_json(const json& j);

struct EpochReport {
  int epoch = 0;
  double hinge_loss = 0.0;
  double kmeans_objective = 0.0;
  /// Fraction of assignments changed since the previous epoch; 0 on the first.
  double churn = 0.0;
  int kmeans_iterations = 0;
  /// Deep-SVM predictions on the training features that match the
  /// pseudo-labels; absent when no stack is trained.
  std::optional<double> svm_agreement;
  std::optional<double> purity;
  std::optional<double> nmi;
  std::optional<double> accuracy;
};

json to_json(const EpochReport& r);

struct PipelineState {
  PipelineConfig config;
  RMatrix inputs;
  std::optional<std::vector<int>> truth;
  FeatureNet net;
  HingeHead head;
  int epoch = 0;
  /// Latest epoch outputs.
  RMatrix features;
  ClusterResult clusters;
  std::optional<DeepSVMStack> stack;
  std::vector<int> previous;
};

PipelineState init_pipeline(const PipelineConfig& config, const Dataset& data);

/// K-Means seed indices for the state's current features.
std::vector<Index> choose_seeds(const PipelineState& state);

/// Stages of one epoch, in order; run_epoch calls all four.
void extract_stage(PipelineState& state);
void cluster_stage(PipelineState& state);
void svm_stage(PipelineState& state);
/// Head refit and network steps. Reads only the features and the
/// pseudo-labels; the deep-SVM stack is left untouched.
double network_stage(PipelineState& state);

EpochReport run_epoch(PipelineState& state);

struct PipelineResult {
  std::vector<EpochReport> epochs;
  PipelineState state;
  json summary;
};

PipelineResult run_pipeline(const PipelineConfig& config, const Dataset& data);

/// run-<config hash>-<seed>
std::string run_directory_name(const PipelineConfig& config);

/// Writes config.json, epochs.jsonl, summary.json, cluster.json,
/// stack.json (when trained) and net.json under `dir`.
void write_pipeline_artifacts(const std::string& dir, const PipelineResult& result,
                              const json& resolved_config);

}  // namespace qdc
