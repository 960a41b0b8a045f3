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

#include <optional>
#include <vector>

#include "qdc/allpair.hpp"
#include "qdc/serialize.hpp"

namespace qdc {

/// One multiclass SVM inside the deep stack.
struct SvmNodeSpec {
  KernelSpec kernel;
  double eta = 10.0;
  std::optional<double> eps_k;
};

/// Layered SVM network. `hidden[k]` lists the v_k multiclass SVMs of
/// hidden layer k; no hidden layers means a bare multiclass SVM.
struct DeepSVMConfig {
  int g = 2;
  std::vector<std::vector<SvmNodeSpec>> hidden;
  SvmNodeSpec final_node;
  InversionMode mode;

  std::vector<int> layer_widths() const;
  void validate() const;
};

struct DeepSVMStack {
  DeepSVMConfig config;
  Index input_dim = 0;
  std::vector<std::vector<MulticlassSVMModel>> hidden;
  MulticlassSVMModel final_model;

  /// v_k * g(g-1)/2 for every hidden layer k.
  std::vector<Index> activation_dims() const;
};

/// Hidden-layer output: entry (v, r) = sum_i alpha_i K(x_i, x) of binary r
/// in multiclass SVM v, bias omitted; laid out v-major then r.
RVector layer_activation(const std::vector<MulticlassSVMModel>& layer, const RVector& x);
RMatrix layer_activations(const std::vector<MulticlassSVMModel>& layer, const RMatrix& data);

/// Greedy layer-wise training with the same labels at every layer.
DeepSVMStack train_stack(const DeepSVMConfig& config, const RMatrix& data,
                         const std::vector<int>& labels);

/// The hidden-layer transform of x (x itself when there are no hidden layers).
RVector stack_transform(const DeepSVMStack& stack, const RVector& x);

int classify_stack(const DeepSVMStack& stack, const RVector& x,
                   const ShotPlan& plan = ShotPlan::exact(), const AllPairOptions& options = {});

json to_json(const SvmNodeSpec& node);
SvmNodeSpec svm_node_from_json(const json& j);
json to_json(const DeepSVMConfig& config);
DeepSVMConfig deep_svm_config_from_json(const json& j);

json to_json(const QuantumSVMModel& model);
QuantumSVMModel quantum_svm_from_json(const json& j);
json to_json(const MulticlassSVMModel& model);
MulticlassSVMModel multiclass_from_json(const json& j);

/// Full stack document; every float is hex-encoded so load(save(s))
/// reproduces s bit-for-bit.
json stack_to_json(const DeepSVMStack& stack);
DeepSVMStack stack_from_json(const json& j);

}  // namespace qdc
