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

#include "qdc/deep_svm.hpp"

#include <string>

#include "qdc/error.hpp"

namespace qdc {

std::vector<int> DeepSVMConfig::layer_widths() const {
  std::vector<int> widths;
  for (const auto& layer : hidden) widths.push_back(static_cast<int>(layer.size()));
  return widths;
}

void DeepSVMConfig::validate() const {
  if (g < 2) throw Error(ErrorCode::kInvalidArgument, "deep SVM needs g >= 2");
  for (std::size_t k = 0; k < hidden.size(); ++k) {
    if (hidden[k].empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hidden layer " + std::to_string(k) + " has no SVMs");
    }
    for (const auto& node : hidden[k]) node.kernel.validate();
  }
  final_node.kernel.validate();
}

std::vector<Index> DeepSVMStack::activation_dims() const {
  std::vector<Index> dims;
  for (const auto& layer : hidden) {
    dims.push_back(static_cast<Index>(layer.size()) * pair_count(config.g));
  }
  return dims;
}

RVector layer_activation(const std::vector<MulticlassSVMModel>& layer, const RVector& x) {
  Index width = 0;
  for (const auto& svm : layer) width += static_cast<Index>(svm.binaries.size());
  RVector h(width);
  Index pos = 0;
  for (const auto& svm : layer) {
    for (const auto& bin : svm.binaries) {
      h[pos++] = kernel_expansion(bin.support, bin.alpha(), bin.kernel, x);
    }
  }
  return h;
}

RMatrix layer_activations(const std::vector<MulticlassSVMModel>& layer, const RMatrix& data) {
  if (data.rows() == 0) return RMatrix(0, 0);
  RVector first = layer_activation(layer, data.row(0).transpose());
  RMatrix out(data.rows(), first.size());
  out.row(0) = first.transpose();
  for (Index i = 1; i < data.rows(); ++i) {
    out.row(i) = layer_activation(layer, data.row(i).transpose()).transpose();
  }
  return out;
}

DeepSVMStack train_stack(const DeepSVMConfig& config, const RMatrix& data,
                         const std::vector<int>& labels) {
  config.validate();
  DeepSVMStack stack;
  stack.config = config;
  stack.input_dim = data.cols();
  RMatrix current = data;
  for (const auto& layer_spec : config.hidden) {
    std::vector<MulticlassSVMModel> layer;
    layer.reserve(layer_spec.size());
    for (const auto& node : layer_spec) {
      layer.push_back(train_multiclass(current, labels, config.g, node.kernel, node.eta,
                                       node.eps_k, config.mode));
    }
    current = layer_activations(layer, current);
    stack.hidden.push_back(std::move(layer));
  }
  const auto& fin = config.final_node;
  stack.final_model =
      train_multiclass(current, labels, config.g, fin.kernel, fin.eta, fin.eps_k, config.mode);
  return stack;
}

RVector stack_transform(const DeepSVMStack& stack, const RVector& x) {
  if (x.size() != stack.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has dimension " + std::to_string(x.size()) + ", stack expects " +
                    std::to_string(stack.input_dim));
  }
  RVector h = x;
  for (const auto& layer : stack.hidden) h = layer_activation(layer, h);
  return h;
}

int classify_stack(const DeepSVMStack& stack, const RVector& x, const ShotPlan& plan,
                   const AllPairOptions& options) {
  return classify_all_pairs(stack.final_model, stack_transform(stack, x), plan, options);
}

json to_json(const SvmNodeSpec& node) {
  json j{{"kernel", to_json(node.kernel)}, {"eta", hexfloat(node.eta)}};
  if (node.eps_k) j["eps_k"] = hexfloat(*node.eps_k);
  return j;
}

SvmNodeSpec svm_node_from_json(const json& j) {
  reject_unknown_keys(j, {"kernel", "eta", "eps_k"}, "svm node");
  SvmNodeSpec node;
  if (j.contains("kernel")) node.kernel = kernel_from_json(j.at("kernel"));
  node.eta = number_field(j, "eta", node.eta);
  if (!(node.eta > 0.0)) throw Error(ErrorCode::kConfigError, "eta must be > 0");
  if (j.contains("eps_k")) node.eps_k = number_field(j, "eps_k", 0.0);
  return node;
}

json to_json(const DeepSVMConfig& config) {
  json hidden = json::array();
  for (const auto& layer : config.hidden) {
    json nodes = json::array();
    for (const auto& node : layer) nodes.push_back(to_json(node));
    hidden.push_back(nodes);
  }
  return json{{"g", config.g},
              {"hidden", hidden},
              {"final", to_json(config.final_node)},
              {"mode", to_json(config.mode)}};
}

DeepSVMConfig deep_svm_config_from_json(const json& j) {
  reject_unknown_keys(j, {"g", "hidden", "final", "mode"}, "deep_svm");
  DeepSVMConfig config;
  config.g = j.value("g", config.g);
  if (j.contains("hidden")) {
    for (const auto& layer : j.at("hidden")) {
      std::vector<SvmNodeSpec> nodes;
      for (const auto& node : layer) nodes.push_back(svm_node_from_json(node));
      config.hidden.push_back(std::move(nodes));
    }
  }
  if (j.contains("final")) config.final_node = svm_node_from_json(j.at("final"));
  if (j.contains("mode")) config.mode = inversion_mode_from_json(j.at("mode"));
  return config;
}

json to_json(const QuantumSVMModel& model) {
  const CVector& amps = model.state.amplitudes();
  json pair = model.class_pair ? json::array({model.class_pair->first, model.class_pair->second})
                               : json(nullptr);
  return json{{"pair", pair},
              {"b", hexfloat(model.b())},
              {"alpha", to_hex_json(model.alpha())},
              {"state_re", to_hex_json(RVector(amps.real()))},
              {"state_im", to_hex_json(RVector(amps.imag()))},
              {"norm_scale", hexfloat(model.norm_scale)},
              {"support_indices", model.support_indices},
              {"support", to_hex_json(model.support)},
              {"labels", to_hex_json(model.labels)},
              {"kernel", to_json(model.kernel)},
              {"eta", hexfloat(model.eta)},
              {"eps_k", hexfloat(model.eps_k)},
              {"mode", to_json(model.mode)}};
}

QuantumSVMModel quantum_svm_from_json(const json& j) {
  const RVector re = vector_from_hex_json(j.at("state_re"));
  const RVector im = vector_from_hex_json(j.at("state_im"));
  if (re.size() != im.size()) throw Error(ErrorCode::kConfigError, "state parts differ in length");
  CVector amps(re.size());
  for (Index i = 0; i < re.size(); ++i) amps[i] = Complex(re[i], im[i]);
  std::optional<std::pair<int, int>> pair;
  if (!j.at("pair").is_null()) pair = std::make_pair(j.at("pair")[0].get<int>(), j.at("pair")[1].get<int>());
  QuantumSVMModel model{StateVec(std::move(amps)),
                        parse_hexfloat(j.at("norm_scale").get<std::string>()),
                        matrix_from_hex_json(j.at("support")),
                        vector_from_hex_json(j.at("labels")),
                        kernel_from_json(j.at("kernel")),
                        parse_hexfloat(j.at("eta").get<std::string>()),
                        parse_hexfloat(j.at("eps_k").get<std::string>()),
                        inversion_mode_from_json(j.at("mode")),
                        j.at("support_indices").get<std::vector<Index>>(),
                        pair};
  if (model.state.dim() != model.support.rows() + 1) {
    throw Error(ErrorCode::kConfigError, "state dimension does not match support size");
  }
  return model;
}

json to_json(const MulticlassSVMModel& model) {
  json bins = json::array();
  for (const auto& b : model.binaries) bins.push_back(to_json(b));
  return json{{"g", model.g}, {"m_max", model.m_max}, {"binaries", bins}};
}

MulticlassSVMModel multiclass_from_json(const json& j) {
  MulticlassSVMModel model;
  model.g = j.at("g").get<int>();
  model.m_max = j.at("m_max").get<Index>();
  for (const auto& b : j.at("binaries")) {
    model.binaries.push_back(quantum_svm_from_json(b));
    if (!model.binaries.back().class_pair) {
      throw Error(ErrorCode::kConfigError, "multiclass binary lacks a class pair");
    }
    model.pairs.push_back(*model.binaries.back().class_pair);
  }
  if (static_cast<int>(model.binaries.size()) != pair_count(model.g)) {
    throw Error(ErrorCode::kConfigError, "multiclass model has the wrong number of binaries");
  }
  return model;
}

json stack_to_json(const DeepSVMStack& stack) {
  json hidden = json::array();
  for (const auto& layer : stack.hidden) {
    json svms = json::array();
    for (const auto& svm : layer) svms.push_back(to_json(svm));
    hidden.push_back(svms);
  }
  return json{{"schema", 1},
              {"config", to_json(stack.config)},
              {"input_dim", stack.input_dim},
              {"hidden", hidden},
              {"final", to_json(stack.final_model)}};
}

DeepSVMStack stack_from_json(const json& j) {
  if (j.value("schema", 0) != 1) throw Error(ErrorCode::kConfigError, "unsupported stack schema");
  DeepSVMStack stack;
  stack.config = deep_svm_config_from_json(j.at("config"));
  stack.input_dim = j.at("input_dim").get<Index>();
  for (const auto& layer : j.at("hidden")) {
    std::vector<MulticlassSVMModel> svms;
    for (const auto& svm : layer) svms.push_back(multiclass_from_json(svm));
    stack.hidden.push_back(std::move(svms));
  }
  stack.final_model = multiclass_from_json(j.at("final"));
  return stack;
}

}  // namespace qdc
