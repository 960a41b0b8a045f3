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

#include <iosfwd>
#include <string>
#include <vector>

#include "qdc/serialize.hpp"

namespace qdc {

/// Inputs of the runtime formulas. Counts are stored as doubles so that
/// large sweeps stay exact up to 2^53.
struct CostParams {
  double m = 100;
  double m_max = 100;
  double n = 16;
  double g = 3;
  double v = 2;
  double l = 2;
  double cnn_layers = 2;
  std::vector<double> layer_sizes;
  double gr = 10;
  double k_clusters = 3;
  double n_features = 8;
  double eps = 0.1;
  double eps_k = 0.1;
  double eps_kmeans = 0.1;
  double delta = 0.1;
  double eps_gd = 0.1;
  double t0 = 1.0;
  bool well_separated = false;
  double t_conv = 0.0;

  /// Throws kBadSizes on non-positive or non-integral counts, M_max > M,
  /// or tolerances outside (0, 1).
  void validate() const;
};

struct CnnCounts {
  double n_mul = 0;
  double n_act = 0;
  double t_forward = 0;
};

/// Values are model units: every hidden constant is 1 and logs are base 2.
struct CostReport {
  CnnCounts cnn;
  double t_back = 0;
  double t_c1 = 0, t_c2 = 0, t_c3 = 0;
  double t_q1 = 0, t_q2 = 0, t_q3 = 0;
  /// T_q2 with its log(M_max N) factor carried by eps_K^-2 eps^-3.
  double t_q2_qpe = 0;
  double pairs = 0;
  double eps_gd = 0;
  double total_classical = 0;
  double total_quantum = 0;
  double speedup_svm = 0;
  double speedup_kmeans = 0;
  double speedup_total = 0;
};

/// Multiplication and activation counts of a fully connected net with
/// sizes (n0, ..., nL), L >= 1.
CnnCounts cnn_counts(const std::vector<double>& layer_sizes);

struct ClassicalCosts {
  double t_c1, t_c2, t_c3;
};
struct QuantumCosts {
  double t_q1, t_q2, t_q3;
};

ClassicalCosts classical_costs(const CostParams& p);
QuantumCosts quantum_costs(const CostParams& p);
CostReport cost_report(const CostParams& p);

json to_json(const CostParams& p);
CostParams cost_params_from_json(const json& j);
json to_json(const CostReport& r);

/// Sweep CSV: a header naming CostParams columns (M, M_max, N, g, v, l,
/// L, layer_sizes, Gr, K, N_features, eps, eps_K, eps_KMeans, delta,
/// eps_gd, t0, well_separated, T_conv), one parameter set per row.
/// Missing columns take `defaults`; layer_sizes is ';'-separated.
std::vector<CostParams> read_cost_sweep(std::istream& in, const CostParams& defaults = {});
/// Input columns followed by every report value, full precision.
void write_cost_report_csv(std::ostream& out, const std::vector<CostParams>& params,
                           const std::vector<CostReport>& reports);

}  // namespace qdc
