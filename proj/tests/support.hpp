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

// Independent reference computations for the tests. Nothing here calls
// the library code it is compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdc/types.hpp"

namespace qdc::testing {

inline RMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  RMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

inline RVector random_vector(Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return random_matrix(n, 1, rng, lo, hi).col(0);
}

inline CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  CMatrix a(n, n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return (a + a.adjoint()) / 2.0;
}

inline CVector random_unit(Index n, std::mt19937_64& rng) {
  CVector v(n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Index i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

/// exp(-i H t) by Eigen's scaling-and-squaring Pade routine.
inline CMatrix expm_oracle(const CMatrix& h, double t) {
  const CMatrix a = (Complex(0.0, -t) * h).eval();
  return a.exp();
}

/// Plain Gaussian elimination with partial pivoting.
inline RVector gauss_solve(RMatrix a, RVector b) {
  const Index n = a.rows();
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    for (Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    }
    a.row(c).swap(a.row(p));
    std::swap(b[c], b[p]);
    for (Index r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      a.row(r) -= f * a.row(c);
      b[r] -= f * b[c];
    }
  }
  RVector x(n);
  for (Index r = n; r-- > 0;) {
    double s = b[r];
    for (Index c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

/// LS-SVM (b, alpha) by writing out the bordered system entry by entry.
inline std::pair<double, RVector> lssvm_oracle(const RMatrix& x, const RVector& y, double eta,
                                               double (*kern)(const RVector&, const RVector&, double),
                                               double param) {
  const Index m = x.rows();
  RMatrix f = RMatrix::Zero(m + 1, m + 1);
  RVector rhs = RVector::Zero(m + 1);
  for (Index i = 0; i < m; ++i) {
    f(0, i + 1) = f(i + 1, 0) = 1.0;
    rhs[i + 1] = y[i];
    for (Index j = 0; j < m; ++j) {
      f(i + 1, j + 1) = kern(x.row(i).transpose(), x.row(j).transpose(), param) + (i == j ? 1.0 / eta : 0.0);
    }
  }
  const RVector sol = gauss_solve(f, rhs);
  return {sol[0], sol.tail(m)};
}

inline double linear_k(const RVector& a, const RVector& b, double) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double rbf_k(const RVector& a, const RVector& b, double gamma) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * s);
}

/// Isotropic blobs with centres on scaled coordinate axes, so centre
/// distances are exactly sep * sqrt(2).
inline std::pair<RMatrix, std::vector<int>> axis_blobs(int k, int per, int dim, double sep,
                                                       std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RMatrix x(k * per, dim);
  std::vector<int> labels;
  for (int c = 0; c < k; ++c) {
    for (int p = 0; p < per; ++p) {
      for (int t = 0; t < dim; ++t) x(c * per + p, t) = g(rng) + (t == c ? sep : 0.0);
      labels.push_back(c);
    }
  }
  return {x, labels};
}

/// Plain Lloyd iteration for comparison: nearest seed, then alternate
/// mean updates and nearest-mean assignment until nothing changes.
inline std::vector<int> lloyd_oracle(const RMatrix& x, const std::vector<Index>& seeds, int max_iter) {
  const Index k = static_cast<Index>(seeds.size());
  RMatrix c(k, x.cols());
  for (Index i = 0; i < k; ++i) c.row(i) = x.row(seeds[static_cast<std::size_t>(i)]);
  std::vector<int> a(static_cast<std::size_t>(x.rows()), -1);
  for (int it = 0; it <= max_iter; ++it) {
    bool changed = false;
    for (Index j = 0; j < x.rows(); ++j) {
      int best = 0;
      for (Index i = 1; i < k; ++i) {
        if ((x.row(j) - c.row(i)).squaredNorm() < (x.row(j) - c.row(best)).squaredNorm()) best = static_cast<int>(i);
      }
      if (a[static_cast<std::size_t>(j)] != best) changed = true;
      a[static_cast<std::size_t>(j)] = best;
    }
    if (!changed) break;
    c.setZero();
    std::vector<double> n(static_cast<std::size_t>(k), 0.0);
    for (Index j = 0; j < x.rows(); ++j) {
      c.row(a[static_cast<std::size_t>(j)]) += x.row(j);
      n[static_cast<std::size_t>(a[static_cast<std::size_t>(j)])] += 1.0;
    }
    for (Index i = 0; i < k; ++i) c.row(i) /= std::max(1.0, n[static_cast<std::size_t>(i)]);
  }
  return a;
}

// Returns the strict mode, or -1 when the top count is shared.
inline int strict_mode(const std::vector<int>& votes, int g) {
  std::vector<int> counts(static_cast<std::size_t>(g), 0);
  for (int v : votes) ++counts[static_cast<std::size_t>(v)];
  const int top = *std::max_element(counts.begin(), counts.end());
  if (std::count(counts.begin(), counts.end(), top) > 1) return -1;
  return static_cast<int>(std::find(counts.begin(), counts.end(), top) - counts.begin());
}

inline int lowest_top(const std::vector<int>& votes, int g) {
  std::vector<int> counts(static_cast<std::size_t>(g), 0);
  for (int v : votes) ++counts[static_cast<std::size_t>(v)];
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace qdc::testing
