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

#include "qdc/feature_net.hpp"

#include <cmath>
#include <random>

#include "qdc/error.hpp"

namespace qdc {
namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kIdentity:
      break;
  }
  return z;
}

double activate_prime(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::kIdentity:
      break;
  }
  return 1.0;
}

// Patch matrix: row (ci, ky, kx), column y * width + x.
RMatrix im2col(const Layer& l, const RVector& in) {
  const int k = l.kernel;
  const int r = k / 2;
  const Index hw = static_cast<Index>(l.height) * l.width;
  RMatrix p = RMatrix::Zero(static_cast<Index>(l.in_channels) * k * k, hw);
  for (int ci = 0; ci < l.in_channels; ++ci) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const Index row = (static_cast<Index>(ci) * k + ky) * k + kx;
        for (int y = 0; y < l.height; ++y) {
          const int sy = y + ky - r;
          if (sy < 0 || sy >= l.height) continue;
          for (int x = 0; x < l.width; ++x) {
            const int sx = x + kx - r;
            if (sx < 0 || sx >= l.width) continue;
            p(row, static_cast<Index>(y) * l.width + x) =
                in[(static_cast<Index>(ci) * l.height + sy) * l.width + sx];
          }
        }
      }
    }
  }
  return p;
}

RVector col2im(const Layer& l, const RMatrix& dp) {
  const int k = l.kernel;
  const int r = k / 2;
  RVector out = RVector::Zero(l.input_dim());
  for (int ci = 0; ci < l.in_channels; ++ci) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const Index row = (static_cast<Index>(ci) * k + ky) * k + kx;
        for (int y = 0; y < l.height; ++y) {
          const int sy = y + ky - r;
          if (sy < 0 || sy >= l.height) continue;
          for (int x = 0; x < l.width; ++x) {
            const int sx = x + kx - r;
            if (sx < 0 || sx >= l.width) continue;
            out[(static_cast<Index>(ci) * l.height + sy) * l.width + sx] +=
                dp(row, static_cast<Index>(y) * l.width + x);
          }
        }
      }
    }
  }
  return out;
}

// Flattens a (channels x hw) map channel-major.
RVector flatten_maps(const RMatrix& maps) {
  RVector out(maps.size());
  for (Index c = 0; c < maps.rows(); ++c) out.segment(c * maps.cols(), maps.cols()) = maps.row(c).transpose();
  return out;
}

RMatrix unflatten_maps(const RVector& v, Index channels) {
  const Index hw = v.size() / channels;
  RMatrix maps(channels, hw);
  for (Index c = 0; c < channels; ++c) maps.row(c) = v.segment(c * hw, hw).transpose();
  return maps;
}

RVector linear_map(const Layer& l, const RVector& in) {
  if (l.kind == Layer::Kind::kDense) return l.weights * in;
  return flatten_maps(l.weights * im2col(l, in));
}

void check_input(const FeatureNet& net, Index size) {
  if (size != net.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "input has " + std::to_string(size) +
                                               " components, net expects " +
                                               std::to_string(net.input_dim()));
  }
}

void check_labels(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo) {
  if (features.rows() != pseudo.rows()) throw Error(ErrorCode::kShapeMismatch, "feature and label batch sizes differ");
  if (features.cols() != head.w.cols()) throw Error(ErrorCode::kShapeMismatch, "feature dimension does not match the head");
  if (pseudo.cols() != head.w.rows()) throw Error(ErrorCode::kShapeMismatch, "label width does not match the head");
}

void require_finite(const RVector& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorCode::kNonFinite, std::string("non-finite ") + what);
}

void require_finite(const RMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::kNonFinite, std::string("non-finite ") + what);
}

RMatrix uniform_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  RMatrix w(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) w(i, j) = u(rng);
  }
  return w;
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kIdentity:
      break;
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::kIdentity;
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  throw Error(ErrorCode::kConfigError, "unknown activation '" + s + "'");
}

Index Layer::input_dim() const {
  if (kind == Kind::kDense) return weights.cols();
  return static_cast<Index>(in_channels) * height * width;
}

Index Layer::output_dim() const {
  if (kind == Kind::kDense) return weights.rows();
  return weights.rows() * height * width;
}

Index FeatureNet::input_dim() const { return layers.empty() ? 0 : layers.front().input_dim(); }
Index FeatureNet::output_dim() const { return layers.empty() ? 0 : layers.back().output_dim(); }

Index FeatureNet::parameter_count() const {
  Index n = 0;
  for (const Layer& l : layers) n += l.parameter_count();
  return n;
}

void FeatureNet::validate() const {
  if (layers.empty()) throw Error(ErrorCode::kShapeMismatch, "feature net has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (l.weights.rows() < 1 || l.weights.cols() < 1) {
      throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(i) + " has empty weights");
    }
    if (l.kind == Layer::Kind::kConv2d) {
      if (l.kernel < 1 || l.kernel % 2 == 0 || l.in_channels < 1 || l.height < 1 || l.width < 1) {
        throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(i) + " has invalid conv geometry");
      }
      if (l.weights.cols() != static_cast<Index>(l.in_channels) * l.kernel * l.kernel) {
        throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(i) + " conv weights have the wrong width");
      }
    }
    if (i > 0 && l.input_dim() != layers[i - 1].output_dim()) {
      throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(i) + " expects " +
                                                 std::to_string(l.input_dim()) + " inputs, previous layer gives " +
                                                 std::to_string(layers[i - 1].output_dim()));
    }
  }
}

ForwardTrace forward_trace(const FeatureNet& net, const RVector& x) {
  check_input(net, x.size());
  ForwardTrace t;
  t.a.push_back(x);
  for (const Layer& l : net.layers) {
    RVector z = linear_map(l, t.a.back());
    RVector a = z.unaryExpr([&](double v) { return activate(l.activation, v); });
    t.z.push_back(std::move(z));
    t.a.push_back(std::move(a));
  }
  return t;
}

RVector forward(const FeatureNet& net, const RVector& x) {
  check_input(net, x.size());
  RVector a = x;
  for (const Layer& l : net.layers) {
    a = linear_map(l, a).unaryExpr([&](double v) { return activate(l.activation, v); });
  }
  return a;
}

RMatrix forward_batch(const FeatureNet& net, const RMatrix& x) {
  check_input(net, x.cols());
  RMatrix out(x.rows(), net.output_dim());
  for (Index i = 0; i < x.rows(); ++i) out.row(i) = forward(net, x.row(i).transpose()).transpose();
  return out;
}

RMatrix dense_equivalent(const Layer& layer) {
  if (layer.kind == Layer::Kind::kDense) return layer.weights;
  RMatrix out(layer.output_dim(), layer.input_dim());
  for (Index j = 0; j < layer.input_dim(); ++j) {
    out.col(j) = linear_map(layer, RVector::Unit(layer.input_dim(), j));
  }
  return out;
}

RVector get_parameters(const FeatureNet& net) {
  RVector theta(net.parameter_count());
  Index off = 0;
  for (const Layer& l : net.layers) {
    for (Index i = 0; i < l.weights.rows(); ++i) {
      for (Index j = 0; j < l.weights.cols(); ++j) theta[off++] = l.weights(i, j);
    }
  }
  return theta;
}

void set_parameters(FeatureNet& net, const RVector& theta) {
  if (theta.size() != net.parameter_count()) {
    throw Error(ErrorCode::kShapeMismatch, "parameter vector has " + std::to_string(theta.size()) +
                                               " entries, net has " + std::to_string(net.parameter_count()));
  }
  Index off = 0;
  for (Layer& l : net.layers) {
    for (Index i = 0; i < l.weights.rows(); ++i) {
      for (Index j = 0; j < l.weights.cols(); ++j) l.weights(i, j) = theta[off++];
    }
  }
}

FeatureNet make_dense_net(const std::vector<Index>& sizes, Activation act, std::uint64_t seed) {
  if (sizes.size() < 2) throw Error(ErrorCode::kShapeMismatch, "dense net needs at least two sizes");
  std::mt19937_64 rng(seed);
  FeatureNet net;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    if (sizes[l] < 1 || sizes[l - 1] < 1) throw Error(ErrorCode::kShapeMismatch, "layer sizes must be positive");
    Layer layer;
    layer.kind = Layer::Kind::kDense;
    layer.activation = act;
    layer.weights = uniform_matrix(sizes[l], sizes[l - 1], rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

FeatureNet make_reference_net(Index input_dim, Index output_dim, std::uint64_t seed, int channels) {
  if (input_dim < 1 || output_dim < 1 || channels < 1) {
    throw Error(ErrorCode::kShapeMismatch, "reference net needs positive sizes");
  }
  int h = 1;
  for (int d = 1; static_cast<Index>(d) * d <= input_dim; ++d) {
    if (input_dim % d == 0) h = d;
  }
  std::mt19937_64 rng(seed);
  Layer conv;
  conv.kind = Layer::Kind::kConv2d;
  conv.activation = Activation::kTanh;
  conv.in_channels = 1;
  conv.height = h;
  conv.width = static_cast<int>(input_dim / h);
  conv.kernel = 3;
  conv.weights = uniform_matrix(channels, 9, rng);
  Layer dense;
  dense.kind = Layer::Kind::kDense;
  dense.activation = Activation::kTanh;
  dense.weights = uniform_matrix(output_dim, conv.output_dim(), rng);
  FeatureNet net;
  net.layers = {conv, dense};
  return net;
}

void HingeHead::validate() const {
  if (!(c > 0.0)) throw Error(ErrorCode::kInvalidArgument, "hinge penalty C must be > 0");
  if (!(lr > 0.0)) throw Error(ErrorCode::kInvalidArgument, "head learning rate must be > 0");
  if (gr < 0) throw Error(ErrorCode::kInvalidArgument, "Gr must be >= 0");
}

RMatrix signed_targets(const RMatrix& pseudo_labels) {
  for (Index i = 0; i < pseudo_labels.rows(); ++i) {
    double sum = 0.0;
    for (Index c = 0; c < pseudo_labels.cols(); ++c) {
      const double v = pseudo_labels(i, c);
      if (v != 0.0 && v != 1.0) throw Error(ErrorCode::kBadLabels, "pseudo-labels must be 0/1");
      sum += v;
    }
    if (sum != 1.0) throw Error(ErrorCode::kBadLabels, "pseudo-label row " + std::to_string(i) + " is not one-hot");
  }
  return (2.0 * pseudo_labels.array() - 1.0).matrix();
}

double hinge_loss(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo_labels) {
  check_labels(head, features, pseudo_labels);
  const RMatrix y = signed_targets(pseudo_labels);
  const RMatrix scores = features * head.w.transpose();
  const RMatrix slack = (1.0 - y.array() * scores.array()).max(0.0).matrix();
  return 0.5 * head.w.squaredNorm() + head.c * slack.squaredNorm();
}

RVector grad_penultimate(const HingeHead& head, const RVector& h, const RVector& y) {
  if (h.size() != head.w.cols() || y.size() != head.w.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient inputs do not match the head");
  }
  RVector grad = RVector::Zero(h.size());
  for (Index c = 0; c < head.w.rows(); ++c) {
    const double slack = std::max(0.0, 1.0 - y[c] * head.w.row(c).dot(h));
    if (slack > 0.0) grad -= 2.0 * head.c * y[c] * slack * head.w.row(c).transpose();
  }
  return grad;
}

RMatrix head_gradient(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo_labels) {
  check_labels(head, features, pseudo_labels);
  const RMatrix y = signed_targets(pseudo_labels);
  const RMatrix scores = features * head.w.transpose();
  const RMatrix slack = (1.0 - y.array() * scores.array()).max(0.0).matrix();
  const RMatrix coeff = (-2.0 * head.c * y.array() * slack.array()).matrix();  // M x g
  return head.w + coeff.transpose() * features;
}

RVector net_gradient(const FeatureNet& net, const HingeHead& head, const RMatrix& inputs,
                     const RMatrix& pseudo_labels) {
  check_input(net, inputs.cols());
  if (inputs.rows() != pseudo_labels.rows()) throw Error(ErrorCode::kShapeMismatch, "input and label batch sizes differ");
  if (net.output_dim() != head.w.cols()) throw Error(ErrorCode::kShapeMismatch, "net output does not match the head");
  const RMatrix y = signed_targets(pseudo_labels);
  std::vector<RMatrix> grads;
  for (const Layer& l : net.layers) grads.push_back(RMatrix::Zero(l.weights.rows(), l.weights.cols()));
  for (Index i = 0; i < inputs.rows(); ++i) {
    const ForwardTrace t = forward_trace(net, inputs.row(i).transpose());
    RVector delta = grad_penultimate(head, t.a.back(), y.row(i).transpose());
    for (std::size_t l = net.layers.size(); l-- > 0;) {
      const Layer& layer = net.layers[l];
      const RVector dz = delta.cwiseProduct(
          t.z[l].unaryExpr([&](double v) { return activate_prime(layer.activation, v); }));
      if (layer.kind == Layer::Kind::kDense) {
        grads[l] += dz * t.a[l].transpose();
        if (l > 0) delta = layer.weights.transpose() * dz;
      } else {
        const RMatrix patches = im2col(layer, t.a[l]);
        const RMatrix dmaps = unflatten_maps(dz, layer.weights.rows());
        grads[l] += dmaps * patches.transpose();
        if (l > 0) delta = col2im(layer, layer.weights.transpose() * dmaps);
      }
    }
  }
  RVector theta(net.parameter_count());
  Index off = 0;
  for (const RMatrix& g : grads) {
    for (Index i = 0; i < g.rows(); ++i) {
      for (Index j = 0; j < g.cols(); ++j) theta[off++] = g(i, j);
    }
  }
  return theta;
}

TrainStepResult train_step(const FeatureNet& net, const HingeHead& head, const RMatrix& inputs,
                           const RMatrix& pseudo_labels, double lr) {
  net.validate();
  if (inputs.rows() < 1) throw Error(ErrorCode::kShapeMismatch, "empty training batch");
  if (!(lr >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  const RMatrix features = forward_batch(net, inputs);
  require_finite(features, "features");
  TrainStepResult out{net, head, hinge_loss(head, features, pseudo_labels)};
  const RVector g_net = net_gradient(net, head, inputs, pseudo_labels);
  const RMatrix g_head = head_gradient(head, features, pseudo_labels);
  require_finite(g_net, "network gradient");
  require_finite(g_head, "head gradient");
  if (lr == 0.0) return out;
  set_parameters(out.net, get_parameters(net) - lr * g_net);
  out.head.w = head.w - lr * g_head;
  return out;
}

HingeHead refit_head(const HingeHead& head, const RMatrix& features, const RMatrix& pseudo_labels) {
  head.validate();
  HingeHead out = head;
  for (int it = 0; it < head.gr; ++it) {
    const RMatrix g = head_gradient(out, features, pseudo_labels);
    require_finite(g, "head gradient");
    if (g.norm() < 1e-10) break;
    out.w -= head.lr * g;
  }
  return out;
}

json to_json(const FeatureNet& net) {
  json layers = json::array();
  for (const Layer& l : net.layers) {
    json j{{"kind", l.kind == Layer::Kind::kDense ? "dense" : "conv2d"},
           {"activation", to_string(l.activation)},
           {"weights", to_hex_json(l.weights)}};
    if (l.kind == Layer::Kind::kConv2d) {
      j["in_channels"] = l.in_channels;
      j["height"] = l.height;
      j["width"] = l.width;
      j["kernel"] = l.kernel;
    }
    layers.push_back(std::move(j));
  }
  return json{{"schema", 1}, {"layers", layers}};
}

FeatureNet feature_net_from_json(const json& j) {
  reject_unknown_keys(j, {"schema", "layers"}, "feature net");
  FeatureNet net;
  for (const json& lj : j.at("layers")) {
    reject_unknown_keys(lj, {"kind", "activation", "weights", "in_channels", "height", "width", "kernel"},
                        "feature net layer");
    Layer l;
    const std::string kind = lj.at("kind").get<std::string>();
    if (kind == "dense") {
      l.kind = Layer::Kind::kDense;
    } else if (kind == "conv2d") {
      l.kind = Layer::Kind::kConv2d;
      l.in_channels = lj.at("in_channels").get<int>();
      l.height = lj.at("height").get<int>();
      l.width = lj.at("width").get<int>();
      l.kernel = lj.at("kernel").get<int>();
    } else {
      throw Error(ErrorCode::kConfigError, "unknown layer kind '" + kind + "'");
    }
    l.activation = activation_from_string(lj.value("activation", std::string("identity")));
    l.weights = matrix_from_hex_json(lj.at("weights"));
    net.layers.push_back(std::move(l));
  }
  net.validate();
  return net;
}

}  // namespace qdc
