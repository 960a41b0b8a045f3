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

#include "qdc/lssvm.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdc/error.hpp"

namespace qdc {

KernelSpec KernelSpec::rbf(double gamma) {
  KernelSpec k;
  k.kind = Kind::kRbf;
  k.gamma = gamma;
  k.validate();
  return k;
}

KernelSpec KernelSpec::polynomial(int degree, double coef) {
  KernelSpec k;
  k.kind = Kind::kPolynomial;
  k.degree = degree;
  k.coef = coef;
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (kind == Kind::kRbf && !(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rbf kernel needs gamma > 0");
  }
  if (kind == Kind::kPolynomial && degree < 1) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial kernel needs degree >= 1");
  }
}

double KernelSpec::operator()(const RVector& x, const RVector& y) const {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "kernel arguments have dimensions " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  }
  switch (kind) {
    case Kind::kLinear:
      return x.dot(y);
    case Kind::kRbf:
      return std::exp(-gamma * (x - y).squaredNorm());
    case Kind::kPolynomial:
      return std::pow(x.dot(y) + coef, degree);
  }
  return 0.0;
}

RMatrix build_kernel_matrix(const RMatrix& data, const KernelSpec& kernel) {
  kernel.validate();
  const Index m = data.rows();
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "kernel matrix needs at least one vector");
  RMatrix k(m, m);
  for (Index i = 0; i < m; ++i) {
    const RVector xi = data.row(i).transpose();
    for (Index j = i; j < m; ++j) {
      k(i, j) = kernel(xi, data.row(j).transpose());
      k(j, i) = k(i, j);
    }
  }
  return k;
}

RVector LSSVMSystem::rhs() const {
  RVector r(y.size() + 1);
  r[0] = 0.0;
  r.tail(y.size()) = y;
  return r;
}

LSSVMSystem assemble_system(const RMatrix& kernel_matrix, const RVector& labels, double eta) {
  const Index m = labels.size();
  if (kernel_matrix.rows() != m || kernel_matrix.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "kernel matrix and labels disagree in size");
  }
  if (!(eta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eta must be > 0");
  for (Index i = 0; i < m; ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw Error(ErrorCode::kBadLabels, "label " + std::to_string(labels[i]) + " is not +-1");
    }
  }
  LSSVMSystem sys;
  sys.F = RMatrix::Zero(m + 1, m + 1);
  sys.F.block(0, 1, 1, m).setOnes();
  sys.F.block(1, 0, m, 1).setOnes();
  sys.F.bottomRightCorner(m, m) = kernel_matrix;
  sys.F.bottomRightCorner(m, m).diagonal().array() += 1.0 / eta;
  sys.y = labels;
  sys.eta = eta;
  sys.trace = sys.F.trace();
  return sys;
}

LSSVMSolution solve_classical(const LSSVMSystem& sys) {
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(sys.F, Eigen::EigenvaluesOnly);
  const RVector mag = eig.eigenvalues().cwiseAbs();
  const double cond = mag.minCoeff() > 0.0 ? mag.maxCoeff() / mag.minCoeff()
                                           : std::numeric_limits<double>::infinity();
  if (!(cond <= kSingularConditionLimit)) {
    throw Error(ErrorCode::kSingularSystem,
                "LS-SVM system is singular (condition " + std::to_string(cond) + ")");
  }
  const RVector rhs = sys.rhs();
  const auto lu = sys.F.fullPivLu();
  RVector x = lu.solve(rhs);
  x += lu.solve(rhs - sys.F * x);  // one round of refinement
  return {x[0], x.tail(sys.size()), cond};
}

BinarySVMModel train_classical(const RMatrix& data, const RVector& labels,
                               const KernelSpec& kernel, double eta) {
  if (data.rows() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "data rows and labels disagree in count");
  }
  const LSSVMSystem sys = assemble_system(build_kernel_matrix(data, kernel), labels, eta);
  const LSSVMSolution sol = solve_classical(sys);
  BinarySVMModel model;
  model.b = sol.b;
  model.alpha = sol.alpha;
  model.support = data;
  model.labels = labels;
  model.kernel = kernel;
  model.eta = eta;
  return model;
}

double kernel_expansion(const RMatrix& support, const RVector& coefficients,
                        const KernelSpec& kernel, const RVector& x) {
  if (support.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(support.cols()));
  }
  double sum = 0.0;
  for (Index i = 0; i < support.rows(); ++i) {
    sum += coefficients[i] * kernel(support.row(i).transpose(), x);
  }
  return sum;
}

double decision_value(const BinarySVMModel& model, const RVector& x) {
  return kernel_expansion(model.support, model.alpha, model.kernel, x) + model.b;
}

}  // namespace qdc
