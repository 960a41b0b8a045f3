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
#include <utility>
#include <vector>

#include "qdc/lssvm.hpp"
#include "qdc/statevector.hpp"

namespace qdc {

/// How F-hat^{-1} |y> is simulated.
struct InversionMode {
  enum class Kind { kExactSpectral, kQpe };

  Kind kind = Kind::kExactSpectral;
  int clock_bits = 12;
  double t0 = 0.0;  // 0: chosen from the spectrum

  static InversionMode exact_spectral() { return {}; }
  static InversionMode qpe(int clock_bits, double t0 = 0.0) {
    return {Kind::kQpe, clock_bits, t0};
  }
  std::optional<QpeSettings> qpe_settings() const;
  bool operator==(const InversionMode&) const = default;
};

/// Binary model trained by simulated matrix inversion. `state` holds
/// (b, alpha_1..alpha_M) / sqrt(b^2 + sum alpha^2); `norm_scale` is that
/// square root, so b() and alpha() read the amplitudes back at full scale.
struct QuantumSVMModel {
  StateVec state;
  double norm_scale = 1.0;
  RMatrix support;  // one training vector per row
  RVector labels;   // +-1
  KernelSpec kernel;
  double eta = 1.0;
  double eps_k = 0.0;
  InversionMode mode;
  /// Row indices of `support` in the data set the model was trained from.
  std::vector<Index> support_indices;
  std::optional<std::pair<int, int>> class_pair;

  Index size() const { return support.rows(); }
  double b() const { return state[0].real() * norm_scale; }
  RVector alpha() const;
};

/// Default inversion floor: 1e-4 of the largest |eigenvalue| of F-hat.
double default_eps_k(const LSSVMSystem& sys);

/// Builds F, normalizes it by its trace, and inverts it on
/// |y> = (0, y_1, ..., y_M) / sqrt(M). eps_k = nullopt uses default_eps_k.
QuantumSVMModel train_quantum_binary(const RMatrix& data, const RVector& labels,
                                     const KernelSpec& kernel, double eta,
                                     std::optional<double> eps_k = std::nullopt,
                                     InversionMode mode = InversionMode::exact_spectral());

/// |T> over the (m_max + 1) x (N + 1) register: b on |0>|0> and
/// alpha_i |x_i| on |i>|x_i>, normalized. m_max = 0 means the model size.
StateVec prepare_training_oracle(const QuantumSVMModel& model, Index m_max = 0);

/// |x> over the same register: |0>|0> + sum_{i<=m_max} |x| |i>|x>, normalized
/// by sqrt(m_max |x|^2 + 1).
StateVec prepare_query_state(const RVector& x, Index m_max);

struct BinaryDecision {
  int label = 0;              // +1 or -1
  double probability = 0.0;   // ancilla success probability P
  double overlap = 0.0;       // Re <T|x>
};

/// Swap-test classification: P = 1/2 (1 - <T|x>), label +1 iff P < 1/2.
/// The linear kernel uses the raw-vector oracle and query states. Other
/// kernels place k(x_i, x) in slot i of the query instead, which gives
/// the same sign as the kernel decision function on the read-out (b, alpha).
BinaryDecision classify_binary(const QuantumSVMModel& model, const RVector& x,
                               const ShotPlan& plan = ShotPlan::exact(), Index m_max = 0);

/// Classical decision function evaluated on the amplitudes read from the
/// trained state.
double quantum_decision_value(const QuantumSVMModel& model, const RVector& x);

/// |<state | (b, alpha) / ||(b, alpha)||>| against a classical solution.
double solution_fidelity(const QuantumSVMModel& model, double b, const RVector& alpha);

}  // namespace qdc
