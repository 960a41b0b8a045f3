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
#include <string>
#include <vector>

#include "qdc/serialize.hpp"

namespace qdc {

enum class Activation { kIdentity, kRelu, kTanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// A dense layer maps in -> out with an (out x in) matrix. A conv layer
/// is a 2-D "same" convolution, stride 1, over an (in_channels, height,
/// width) tensor stored channel-major; its weights are
/// (channels x in_channels * kernel * kernel). No biases.
struct Layer {
  enum class Kind { kDense, kConv2d };
  Kind kind = Kind::kDense;
  Activation activation = Activation::kIdentity;
  RMatrix weights;
  int in_channels = 1;
  int height = 1;
  int width = 1;
  int kernel = 1;

  Index input_dim() const;
  Index output_dim() const;
  Index parameter_count() const { return weights.size(); }
};

struct FeatureNet {
  std::vector<Layer> layers;

  Index input_dim() const;
  Index output_dim() const;
  Index parameter_count() const;
  /// Throws kShapeMismatch when consecutive layers disagree.
  void validate() const;
};

/// Pre-activations z and activations a of every layer; a[0] is the input.
struct ForwardTrace {
  std::vector<RVector> z;
  std::vector<RVector> a;
};

RVector forward(const FeatureNet& net, const RVector& x);
ForwardTrace forward_trace(const FeatureNet& net, const RVector& x);
/// forward() applied to every row.
RMatrix forward_batch(const FeatureNet& net, const RMatrix& x);

/// The linear map of a layer as an explicit (out x in) matrix.
RMatrix dense_equivalent(const Layer& layer);

/// theta: every layer's weights, row-major, concatenated in layer order.
RVector get_parameters(const FeatureNet& net);
void set_parameters(FeatureNet& net, const RVector& theta);

/// Dense net with sizes (n0, n1, ..., nL), uniform(-0.1, 0.1) weights.
FeatureNet make_dense_net(const std::vector<Index>& sizes, Activation act, std::uint64_t seed);

/// Reference extractor: a 3x3 conv with `channels` outputs over the input
/// viewed as an h x w image (h the largest divisor of the input size not
/// above its square root), then a dense layer to output_dim; tanh.
FeatureNet make_reference_net(Index input_dim, Index output_dim, std::uint64_t seed,
                              int channels = 4);

/// One-vs-rest squared-hinge head over features: w is g x d.
struct HingeHead {
  RMatrix w;
  double c = 1.0;
  double lr = 0.01;
  int gr = 100;

  void validate() const;
};

/// +1 where the one-hot entry is 1, -1 elsewhere. Rows must be one-hot.
RMatrix signed_targets(const RMatrix& pseudo_labels);

/// 1/2 |w|_F^2 + C sum_i sum_c max(1 - y_ic w_c . f_i, 0)^2.
double hinge_loss(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo_labels);

/// dL/dh for one sample with signed targets y (length g).
RVector grad_penultimate(const HingeHead& head, const RVector& h, const RVector& y);

/// dL/dw over the batch.
RMatrix head_gradient(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo_labels);

/// dL/dtheta for the net, head held fixed; same layout as get_parameters.
RVector net_gradient(const FeatureNet& net, const HingeHead& head, const RMatrix& inputs,
                     const RMatrix& pseudo_labels);

struct TrainStepResult {
  FeatureNet net;
  HingeHead head;
  double loss_before = 0.0;
};

/// One gradient-descent step on both the net and the head weights.
/// Throws kNonFinite if any gradient entry is NaN or infinite.
TrainStepResult train_step(const FeatureNet& net, const HingeHead& head, const RMatrix& inputs,
                           const RMatrix& pseudo_labels, double lr);

/// Gradient descent on w alone, at most head.gr iterations at head.lr.
HingeHead refit_head(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo_labels);

json to_json(const FeatureNet& net);
FeatureNet feature_net_from_json(const json& j);

}  // namespace qdc
