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

#include "qdc/qsvm.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdc/error.hpp"

namespace qdc {

std::optional<QpeSettings> InversionMode::qpe_settings() const {
  if (kind != Kind::kQpe) return std::nullopt;
  return QpeSettings{clock_bits, t0};
}

RVector QuantumSVMModel::alpha() const {
  const Index m = state.dim() - 1;
  RVector a(m);
  for (Index i = 0; i < m; ++i) a[i] = state[i + 1].real() * norm_scale;
  return a;
}

double default_eps_k(const LSSVMSystem& sys) {
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(sys.F / sys.trace, Eigen::EigenvaluesOnly);
  return 1e-4 * eig.eigenvalues().cwiseAbs().maxCoeff();
}

QuantumSVMModel train_quantum_binary(const RMatrix& data, const RVector& labels,
                                     const KernelSpec& kernel, double eta,
                                     std::optional<double> eps_k, InversionMode mode) {
  if (data.rows() < 1) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  if (data.rows() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "data rows and labels disagree in count");
  }
  const LSSVMSystem sys = assemble_system(build_kernel_matrix(data, kernel), labels, eta);
  if (!(sys.trace > 0.0) || !std::isfinite(sys.trace)) {
    throw Error(ErrorCode::kSingularSystem, "trace of F is not positive");
  }
  const double floor = eps_k.value_or(default_eps_k(sys));
  if (floor <= 0.0) {
    // Without a filter the inversion needs a nonsingular F.
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(sys.F, Eigen::EigenvaluesOnly);
    const RVector mag = eig.eigenvalues().cwiseAbs();
    if (!(mag.minCoeff() > 0.0) || mag.maxCoeff() / mag.minCoeff() > kSingularConditionLimit) {
      throw Error(ErrorCode::kSingularSystem, "F is singular and eps_K = 0");
    }
  }

  const Index m = labels.size();
  const CMatrix f_hat = (sys.F / sys.trace).cast<Complex>();
  const StateVec y_state = StateVec::normalized(sys.rhs().cast<Complex>());
  const InversionResult inv = spectral_invert(f_hat, y_state, floor, mode.qpe_settings());

  // F-hat^{-1} |y> = trF / sqrt(M) (b, alpha); undo both factors.
  const double norm_scale = inv.scale * std::sqrt(static_cast<double>(m)) / sys.trace;

  std::vector<Index> indices(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) indices[static_cast<std::size_t>(i)] = i;
  return QuantumSVMModel{inv.state, norm_scale, data,  labels,           kernel,
                         eta,       floor,      mode,  std::move(indices), std::nullopt};
}

StateVec prepare_training_oracle(const QuantumSVMModel& model, Index m_max) {
  const Index m = model.size();
  if (m_max == 0) m_max = m;
  if (m_max < m) {
    throw Error(ErrorCode::kDimensionMismatch, "M_max is smaller than the model's support");
  }
  const Index n = model.support.cols();
  const Index width = n + 1;
  CVector amps = CVector::Zero((m_max + 1) * width);
  amps[0] = model.b();
  const RVector alpha = model.alpha();
  for (Index i = 0; i < m; ++i) {
    const RVector xi = model.support.row(i).transpose();
    // alpha_i |x_i| |x_i-hat> = alpha_i x_i componentwise.
    for (Index k = 0; k < n; ++k) amps[(i + 1) * width + 1 + k] = alpha[i] * xi[k];
  }
  return StateVec::normalized(std::move(amps));
}

StateVec prepare_query_state(const RVector& x, Index m_max) {
  if (m_max < 1) throw Error(ErrorCode::kInvalidArgument, "M_max must be >= 1");
  if (x.norm() == 0.0) throw Error(ErrorCode::kZeroVector, "query vector is zero");
  const Index width = x.size() + 1;
  CVector amps = CVector::Zero((m_max + 1) * width);
  amps[0] = 1.0;
  for (Index i = 1; i <= m_max; ++i) {
    for (Index k = 0; k < x.size(); ++k) amps[i * width + 1 + k] = x[k];
  }
  return StateVec::normalized(std::move(amps));
}

namespace {

// Kernel form of the oracle/query pair: slot i carries alpha_i and
// k(x_i, x) respectively, so <T|x> is proportional to the decision value.
std::pair<StateVec, StateVec> kernel_states(const QuantumSVMModel& model, const RVector& x) {
  const Index m = model.size();
  if (model.support.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "query dimension does not match the model");
  }
  CVector t(m + 1);
  CVector q(m + 1);
  const RVector alpha = model.alpha();
  t[0] = model.b();
  q[0] = 1.0;
  for (Index i = 0; i < m; ++i) {
    t[i + 1] = alpha[i];
    q[i + 1] = model.kernel(model.support.row(i).transpose(), x);
  }
  return {StateVec::normalized(std::move(t)), StateVec::normalized(std::move(q))};
}

}  // namespace

BinaryDecision classify_binary(const QuantumSVMModel& model, const RVector& x,
                               const ShotPlan& plan, Index m_max) {
  if (model.support.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(model.support.cols()));
  }
  BinaryDecision out;
  if (model.kernel.kind == KernelSpec::Kind::kLinear && x.norm() > 0.0) {
    const StateVec oracle = prepare_training_oracle(model, m_max);
    const StateVec query = prepare_query_state(x, m_max == 0 ? model.size() : m_max);
    out.overlap = oracle.inner(query).real();
    out.probability = swap_test_probability(oracle, query, plan);
  } else {
    // A zero query under the linear kernel leaves only the |0>|0> slot,
    // which the kernel form also covers (k(x_i, 0) = 0).
    const auto [oracle, query] = kernel_states(model, x);
    out.overlap = oracle.inner(query).real();
    out.probability = swap_test_probability(oracle, query, plan);
  }
  out.label = out.probability < 0.5 ? 1 : -1;
  return out;
}

double quantum_decision_value(const QuantumSVMModel& model, const RVector& x) {
  return kernel_expansion(model.support, model.alpha(), model.kernel, x) + model.b();
}

double solution_fidelity(const QuantumSVMModel& model, double b, const RVector& alpha) {
  CVector v(alpha.size() + 1);
  v[0] = b;
  for (Index i = 0; i < alpha.size(); ++i) v[i + 1] = alpha[i];
  return std::abs(model.state.inner(StateVec::normalized(std::move(v))));
}

}  // namespace qdc
