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

#include "qdc/qkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qdc/error.hpp"

namespace qdc {
namespace {

void validate_seeds(const RMatrix& features, int k, const std::vector<Index>& seeds) {
  if (k < 1) throw Error(ErrorCode::kBadSeeds, "K must be >= 1");
  if (k > features.rows()) throw Error(ErrorCode::kBadSeeds, "K exceeds the number of points");
  if (static_cast<int>(seeds.size()) != k) {
    throw Error(ErrorCode::kBadSeeds, "expected " + std::to_string(k) + " seeds, got " +
                                          std::to_string(seeds.size()));
  }
  std::set<Index> seen;
  for (Index s : seeds) {
    if (s < 0 || s >= features.rows()) throw Error(ErrorCode::kBadSeeds, "seed index out of range");
    if (!seen.insert(s).second) throw Error(ErrorCode::kBadSeeds, "seed indices must be distinct");
  }
}

int argmin(const RVector& d) {
  Index best = 0;
  for (Index c = 1; c < d.size(); ++c) {
    if (d[c] < d[best]) best = c;
  }
  return static_cast<int>(best);
}

std::vector<int> nearest_assignment(const RMatrix& features, const RMatrix& centroids) {
  std::vector<int> out(static_cast<std::size_t>(features.rows()));
  RVector d(centroids.rows());
  for (Index j = 0; j < features.rows(); ++j) {
    for (Index c = 0; c < centroids.rows(); ++c) {
      d[c] = (features.row(j) - centroids.row(c)).squaredNorm();
    }
    out[static_cast<std::size_t>(j)] = argmin(d);
  }
  return out;
}

RMatrix rows_of(const RMatrix& features, const std::vector<Index>& idx) {
  RMatrix out(static_cast<Index>(idx.size()), features.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = features.row(idx[i]);
  return out;
}

constexpr double kAnnealCeiling = 2.0;

StateVec anneal(const RVector& distances, const AnnealSchedule& schedule) {
  const Index k = distances.size();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "no candidate clusters");
  if (schedule.steps < 1 || !(schedule.t_anneal > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "anneal schedule needs steps >= 1 and T > 0");
  }
  if ((distances.array() < 0.0).any() || !distances.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "distances must be finite and >= 0");
  }
  StateVec psi = StateVec::uniform(k);
  if (k == 1) return psi;
  // Shifting by the minimum is a global phase; saturating keeps the argmin
  // and every gap below the ceiling while bounding the sweep rate.
  const RVector problem = (distances.array() - distances.minCoeff()).min(kAnnealCeiling);
  // 1 - |phi><phi| for the uniform superposition |phi>.
  const CMatrix driver = CMatrix::Identity(k, k) - CMatrix::Constant(k, k, 1.0 / static_cast<double>(k));
  const CMatrix diag = problem.cast<Complex>().asDiagonal();
  const double dt = schedule.t_anneal / schedule.steps;
  for (int n = 0; n < schedule.steps; ++n) {
    const double s = (n + 0.5) / schedule.steps;
    psi = evolve(psi, (1.0 - s) * driver + s * diag, dt);
  }
  return psi;
}

}  // namespace

ClusterState make_cluster_state(const std::vector<int>& assignments, int k, int copies) {
  const Index m = static_cast<Index>(assignments.size());
  if (m < 1 || k < 1) throw Error(ErrorCode::kInvalidArgument, "cluster state needs M, K >= 1");
  CVector amps = CVector::Zero(static_cast<Index>(k) * m);
  const double a = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index j = 0; j < m; ++j) {
    const int c = assignments[static_cast<std::size_t>(j)];
    if (c < 0 || c >= k) throw Error(ErrorCode::kInvalidArgument, "assignment out of range");
    amps[c * m + j] = a;
  }
  return {StateVec::normalized(std::move(amps)), k, m, copies};
}

double clustering_objective(const RMatrix& features, const RMatrix& centroids,
                            const std::vector<int>& assignments) {
  double sum = 0.0;
  for (Index j = 0; j < features.rows(); ++j) {
    sum += (features.row(j) - centroids.row(assignments[static_cast<std::size_t>(j)])).squaredNorm();
  }
  return sum / static_cast<double>(features.rows());
}

RMatrix one_hot(const std::vector<int>& assignments, int k) {
  RMatrix y = RMatrix::Zero(static_cast<Index>(assignments.size()), k);
  for (std::size_t j = 0; j < assignments.size(); ++j) y(static_cast<Index>(j), assignments[j]) = 1.0;
  return y;
}

RMatrix update_centroids(const RMatrix& features, std::vector<int>& assignments, int k) {
  const Index d = features.cols();
  for (int guard = 0; guard <= k; ++guard) {
    RMatrix centroids = RMatrix::Zero(k, d);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index j = 0; j < features.rows(); ++j) {
      const int c = assignments[static_cast<std::size_t>(j)];
      centroids.row(c) += features.row(j);
      ++counts[static_cast<std::size_t>(c)];
    }
    int empty = -1;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        if (empty < 0) empty = c;
      } else {
        centroids.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
    if (empty < 0) return centroids;
    // Reseed with the point farthest from its centroid, taken from a
    // cluster that keeps at least one other member.
    Index far = -1;
    double far_d = -1.0;
    for (Index j = 0; j < features.rows(); ++j) {
      const int c = assignments[static_cast<std::size_t>(j)];
      if (counts[static_cast<std::size_t>(c)] < 2) continue;
      const double dist = (features.row(j) - centroids.row(c)).squaredNorm();
      if (dist > far_d) {
        far_d = dist;
        far = j;
      }
    }
    if (far < 0) throw Error(ErrorCode::kBadSeeds, "cannot repair an empty cluster");
    assignments[static_cast<std::size_t>(far)] = empty;
  }
  throw Error(ErrorCode::kBadSeeds, "empty-cluster repair did not converge");
}

ClusterResult lloyd_classical(const RMatrix& features, int k, const std::vector<Index>& seeds,
                              int max_iter) {
  validate_seeds(features, k, seeds);
  ClusterResult r;
  r.k = k;
  r.assignments = nearest_assignment(features, rows_of(features, seeds));
  RMatrix centroids = update_centroids(features, r.assignments, k);
  r.objective_history.push_back(clustering_objective(features, centroids, r.assignments));
  for (int it = 0; it < max_iter; ++it) {
    std::vector<int> next = nearest_assignment(features, centroids);
    ++r.iterations;
    if (next == r.assignments) break;
    r.assignments = std::move(next);
    centroids = update_centroids(features, r.assignments, k);
    r.objective_history.push_back(clustering_objective(features, centroids, r.assignments));
  }
  r.centroids = centroids;
  r.objective = clustering_objective(features, r.centroids, r.assignments);
  r.pseudo_labels = one_hot(r.assignments, k);
  return r;
}

double quantum_distance(const RVector& x, const RVector& y, const ShotPlan& plan) {
  if (x.size() != y.size()) throw Error(ErrorCode::kDimensionMismatch, "distance between vectors of different dimension");
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0) return ny * ny;
  if (ny == 0.0) return nx * nx;
  const EncodedVector ex = encode_amplitudes(x);
  const EncodedVector ey = encode_amplitudes(y);
  const double overlap = 1.0 - 2.0 * swap_test_probability(ex.state, ey.state, plan);
  return std::max(0.0, nx * nx + ny * ny - 2.0 * nx * ny * overlap);
}

RVector adiabatic_distribution(const RVector& distances, const AnnealSchedule& schedule) {
  return anneal(distances, schedule).probabilities();
}

int adiabatic_assign(const RVector& distances, const AnnealSchedule& schedule,
                     const ShotPlan& plan) {
  const StateVec psi = anneal(distances, schedule);
  if (plan.is_sampled()) return static_cast<int>(measure_once(psi, plan.seed));
  const RVector p = psi.probabilities();
  Index best = 0;
  for (Index c = 1; c < p.size(); ++c) {
    if (p[c] > p[best]) best = c;
  }
  return static_cast<int>(best);
}

std::pair<ClusterResult, ClusterState> qkmeans_run(const RMatrix& features, int k,
                                                   const std::vector<Index>& seeds,
                                                   const QKMeansOptions& options) {
  validate_seeds(features, k, seeds);
  if (options.copies < 1) throw Error(ErrorCode::kInvalidArgument, "copies D must be >= 1");
  const Index m = features.rows();
  const ShotPlan base = options.plan.is_sampled()
                            ? options.plan.with_shots(options.plan.shots *
                                                      static_cast<std::uint64_t>(options.copies))
                            : options.plan;
  auto distances_to = [&](const RMatrix& centres, Index j, int round) {
    RVector d(centres.rows());
    const RVector x = features.row(j).transpose();
    for (Index c = 0; c < centres.rows(); ++c) {
      const std::uint64_t tag = (static_cast<std::uint64_t>(round) * static_cast<std::uint64_t>(m) +
                                 static_cast<std::uint64_t>(j)) * static_cast<std::uint64_t>(k) +
                                static_cast<std::uint64_t>(c);
      d[c] = quantum_distance(x, centres.row(c).transpose(), base.derive(tag));
    }
    return d;
  };

  ClusterResult r;
  r.k = k;
  r.assignments.resize(static_cast<std::size_t>(m));
  const RMatrix seed_points = rows_of(features, seeds);
  for (Index j = 0; j < m; ++j) r.assignments[static_cast<std::size_t>(j)] = argmin(distances_to(seed_points, j, 0));

  RMatrix centroids = update_centroids(features, r.assignments, k);
  r.objective_history.push_back(clustering_objective(features, centroids, r.assignments));
  for (int it = 1; it <= options.iters; ++it) {
    std::vector<int> next(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
      const RVector d = distances_to(centroids, j, it);
      const ShotPlan measure = options.plan.derive(0x5EED0000ULL + static_cast<std::uint64_t>(it) * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(j));
      next[static_cast<std::size_t>(j)] = adiabatic_assign(d, options.anneal, measure);
    }
    ++r.iterations;
    if (next == r.assignments) break;
    r.assignments = std::move(next);
    centroids = update_centroids(features, r.assignments, k);
    r.objective_history.push_back(clustering_objective(features, centroids, r.assignments));
  }
  r.centroids = centroids;
  r.objective = clustering_objective(features, r.centroids, r.assignments);
  r.pseudo_labels = one_hot(r.assignments, k);
  ClusterState state = make_cluster_state(r.assignments, k, options.copies);
  return {std::move(r), std::move(state)};
}

json to_json(const ClusterResult& result) {
  json centroids = json::array();
  for (Index c = 0; c < result.centroids.rows(); ++c) {
    centroids.push_back(std::vector<double>(result.centroids.row(c).begin(), result.centroids.row(c).end()));
  }
  return json{{"schema", 1},
              {"k", result.k},
              {"centroids", centroids},
              {"centroids_hex", to_hex_json(result.centroids)},
              {"assignments", result.assignments},
              {"objective", result.objective},
              {"objective_history", result.objective_history},
              {"iterations", result.iterations}};
}

}  // namespace qdc
