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

#include <utility>
#include <vector>

#include "qdc/serialize.hpp"
#include "qdc/statevector.hpp"

namespace qdc {

/// K-Means outcome. `pseudo_labels` is the M x K one-hot matrix of the
/// assignments; `objective` is the mean squared distance of each point to
/// its centroid.
struct ClusterResult {
  int k = 0;
  RMatrix centroids;  // K x d
  std::vector<int> assignments;
  double objective = 0.0;
  RMatrix pseudo_labels;
  /// Objective after every assignment/update round.
  std::vector<double> objective_history;
  int iterations = 0;
};

/// (1/sqrt M) sum_j |c_j>|j>, flattened as index c * M + j.
struct ClusterState {
  StateVec zeta;
  int k = 0;
  Index m = 0;
  int copies = 1;
};

ClusterState make_cluster_state(const std::vector<int>& assignments, int k, int copies = 1);

/// Mean of squared distances from each point to its assigned centroid.
double clustering_objective(const RMatrix& features, const RMatrix& centroids,
                            const std::vector<int>& assignments);

RMatrix one_hot(const std::vector<int>& assignments, int k);

/// Cluster means. An empty cluster takes the point farthest from its own
/// centroid, which is moved out of its old cluster.
RMatrix update_centroids(const RMatrix& features, std::vector<int>& assignments, int k);

/// Lloyd's algorithm from explicit seed points. Stops at an assignment
/// fixpoint or after max_iter rounds.
ClusterResult lloyd_classical(const RMatrix& features, int k, const std::vector<Index>& seeds,
                              int max_iter);

/// |x - y|^2 from the classical norms and a swap test on the directions.
double quantum_distance(const RVector& x, const RVector& y, const ShotPlan& plan = ShotPlan::exact());

struct AnnealSchedule {
  double t_anneal = 50.0;
  int steps = 400;
};

/// Final cluster-register distribution after evolving the uniform state
/// under H(s) = (1 - s)(1 - |phi><phi|) + s diag(d / max d), s linear in
/// time, one exact exponential per step at the step's midpoint.
RVector adiabatic_distribution(const RVector& distances, const AnnealSchedule& schedule);

/// Measures the annealed cluster register: the most probable outcome in
/// exact mode, a single draw in sampled mode.
int adiabatic_assign(const RVector& distances, const AnnealSchedule& schedule,
                     const ShotPlan& plan = ShotPlan::exact());

struct QKMeansOptions {
  int iters = 20;
  AnnealSchedule anneal;
  /// Copies D of the seed/cluster states; multiplies the distance-shot
  /// budget in sampled mode.
  int copies = 1;
  ShotPlan plan;
};

/// Quantum K-Means: nearest-seed initial state, then rounds of mean
/// distance estimation and adiabatic reassignment until a fixpoint.
std::pair<ClusterResult, ClusterState> qkmeans_run(const RMatrix& features, int k,
                                                   const std::vector<Index>& seeds,
                                                   const QKMeansOptions& options);

json to_json(const ClusterResult& result);

}  // namespace qdc
