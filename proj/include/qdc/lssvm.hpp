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

#include "qdc/types.hpp"

namespace qdc {

/// k(x, y) for the linear, Gaussian (rbf) and polynomial kernels.
struct KernelSpec {
  enum class Kind { kLinear, kRbf, kPolynomial };

  Kind kind = Kind::kLinear;
  double gamma = 1.0;  // rbf: exp(-gamma |x - y|^2)
  int degree = 2;      // polynomial: (x.y + coef)^degree
  double coef = 1.0;

  static KernelSpec linear() { return {}; }
  static KernelSpec rbf(double gamma);
  static KernelSpec polynomial(int degree, double coef);

  void validate() const;
  double operator()(const RVector& x, const RVector& y) const;
  bool operator==(const KernelSpec&) const = default;
};

/// Gram matrix of the rows of `data`.
RMatrix build_kernel_matrix(const RMatrix& data, const KernelSpec& kernel);

/// The bordered least-squares SVM system
///
///     F = [ 0   1^T           ]      F (b, alpha) = (0, y)
///         [ 1   K + eta^-1 I  ]
///
/// Only eta enters F, so it is the one regularizer exposed.
struct LSSVMSystem {
  RMatrix F;
  RVector y;
  double eta = 1.0;
  double trace = 0.0;

  Index size() const { return y.size(); }
  /// (0, y_1, ..., y_M)
  RVector rhs() const;
};

LSSVMSystem assemble_system(const RMatrix& kernel_matrix, const RVector& labels, double eta);

struct LSSVMSolution {
  double b = 0.0;
  RVector alpha;
  double condition = 0.0;
};

/// Direct solve of F (b, alpha) = (0, y). Throws kSingularSystem when the
/// condition number of F exceeds 1e12.
LSSVMSolution solve_classical(const LSSVMSystem& sys);

inline constexpr double kSingularConditionLimit = 1e12;

/// Trained binary model. Labels are already absorbed into alpha, so the
/// decision function is sum_i alpha_i k(x_i, x) + b with no extra y_i.
struct BinarySVMModel {
  double b = 0.0;
  RVector alpha;
  RMatrix support;  // one training vector per row
  RVector labels;   // +-1
  KernelSpec kernel;
  double eta = 1.0;
  std::optional<std::pair<int, int>> class_pair;
};

BinarySVMModel train_classical(const RMatrix& data, const RVector& labels,
                               const KernelSpec& kernel, double eta);

/// sum_i coefficients_i k(support_i, x)
double kernel_expansion(const RMatrix& support, const RVector& coefficients,
                        const KernelSpec& kernel, const RVector& x);

double decision_value(const BinarySVMModel& model, const RVector& x);

}  // namespace qdc
