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

#include "qdc/allpair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qdc/error.hpp"

namespace qdc {

MulticlassSVMModel train_multiclass(const RMatrix& data, const std::vector<int>& labels, int g,
                                    const KernelSpec& kernel, double eta,
                                    std::optional<double> eps_k, InversionMode mode) {
  if (g < 2) throw Error(ErrorCode::kInvalidArgument, "multiclass model needs g >= 2");
  if (static_cast<Index>(labels.size()) != data.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "data rows and labels disagree in count");
  }
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(g));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= g) {
      throw Error(ErrorCode::kBadLabels, "class label " + std::to_string(labels[i]) +
                                             " outside [0, " + std::to_string(g) + ")");
    }
    members[static_cast<std::size_t>(labels[i])].push_back(static_cast<Index>(i));
  }
  for (int c = 0; c < g; ++c) {
    if (members[static_cast<std::size_t>(c)].empty()) {
      throw Error(ErrorCode::kEmptyClass, "class " + std::to_string(c) + " has no samples");
    }
  }

  MulticlassSVMModel model;
  model.g = g;
  for (int i = 0; i < g; ++i) {
    for (int j = i + 1; j < g; ++j) {
      // Keep data order so the subset is a stable function of the input.
      std::vector<Index> subset;
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == i || labels[k] == j) subset.push_back(static_cast<Index>(k));
      }
      const Index m = static_cast<Index>(subset.size());
      RMatrix x(m, data.cols());
      RVector y(m);
      for (Index r = 0; r < m; ++r) {
        x.row(r) = data.row(subset[static_cast<std::size_t>(r)]);
        y[r] = labels[static_cast<std::size_t>(subset[static_cast<std::size_t>(r)])] == i ? 1.0 : -1.0;
      }
      QuantumSVMModel bin = train_quantum_binary(x, y, kernel, eta, eps_k, mode);
      bin.support_indices = std::move(subset);
      bin.class_pair = std::make_pair(i, j);
      model.m_max = std::max(model.m_max, m);
      model.binaries.push_back(std::move(bin));
      model.pairs.emplace_back(i, j);
    }
  }
  return model;
}

VoteRecord collect_votes(const MulticlassSVMModel& model, const RVector& x, const ShotPlan& plan,
                         double epsilon) {
  VoteRecord rec;
  rec.g = model.g;
  rec.epsilon = epsilon;
  rec.votes.reserve(model.binaries.size());
  for (std::size_t r = 0; r < model.binaries.size(); ++r) {
    const BinaryDecision d =
        classify_binary(model.binaries[r], x, plan.derive(r), model.m_max);
    const auto [ci, cj] = model.pairs[r];
    rec.votes.push_back(d.label > 0 ? ci : cj);
  }
  return rec;
}

namespace {

std::vector<int> vote_counts(const std::vector<int>& votes, int g) {
  std::vector<int> counts(static_cast<std::size_t>(g), 0);
  for (int v : votes) {
    if (v < 0 || v >= g) {
      throw Error(ErrorCode::kInvalidArgument, "vote " + std::to_string(v) + " out of range");
    }
    ++counts[static_cast<std::size_t>(v)];
  }
  return counts;
}

}  // namespace

StateVec amplify_marked(int g, const std::vector<bool>& marked) {
  if (g < 1 || static_cast<int>(marked.size()) != g) {
    throw Error(ErrorCode::kInvalidArgument, "marking must cover every class");
  }
  const auto m = static_cast<double>(std::count(marked.begin(), marked.end(), true));
  StateVec psi = StateVec::uniform(g);
  if (m == 0.0 || m == g) return psi;
  // Phase-matched Grover (Long 2001): J + 1 rounds of
  // -(1 + (e^{i phi} - 1)|s><s|)(1 + (e^{i phi} - 1)P_marked).
  const double beta = std::asin(std::sqrt(m / g));
  const int j = static_cast<int>(std::floor((std::numbers::pi / 2.0 - beta) / (2.0 * beta)));
  const double phi = 2.0 * std::asin(std::sin(std::numbers::pi / (4.0 * j + 6.0)) / std::sin(beta));
  const Complex phase = std::polar(1.0, phi) - 1.0;
  const CVector s = psi.amplitudes();
  CVector a = s;
  for (int k = 0; k <= j; ++k) {
    for (int c = 0; c < g; ++c) {
      if (marked[static_cast<std::size_t>(c)]) a[c] += phase * a[c];
    }
    a += phase * s * s.dot(a);
    a = -a;
  }
  return StateVec::normalized(std::move(a));
}

int majority_vote(const std::vector<int>& votes, int g) {
  if (votes.empty()) throw Error(ErrorCode::kInvalidArgument, "no votes to aggregate");
  const std::vector<int> counts = vote_counts(votes, g);
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

int default_iter_cap(int g, double c) {
  const double cap = std::ceil(c * std::log2(static_cast<double>(std::max(g, 2))));
  return std::max(1, static_cast<int>(cap));
}

SearchResult grover_frequency_search(const VoteRecord& rec, std::uint64_t seed, int iter_cap) {
  if (rec.votes.empty()) throw Error(ErrorCode::kInvalidArgument, "no votes to search");
  if (iter_cap < 1) throw Error(ErrorCode::kInvalidArgument, "iter_cap must be >= 1");
  const int g = rec.g;
  const std::vector<int> counts = vote_counts(rec.votes, g);
  const double total = static_cast<double>(rec.votes.size());
  const double readout_err = rec.epsilon / (4.0 * g);
  const double margin = rec.epsilon / (2.0 * g);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-readout_err, readout_err);
  auto read_freq = [&](int c) {
    return std::clamp(counts[static_cast<std::size_t>(c)] / total + noise(rng), 0.0, 1.0);
  };

  std::uniform_int_distribution<std::size_t> pick(0, rec.votes.size() - 1);
  int incumbent = rec.votes[pick(rng)];
  double s = read_freq(incumbent);
  SearchResult out;

  for (int it = 0; it < iter_cap; ++it) {
    std::vector<bool> marked(static_cast<std::size_t>(g));
    const int inc_count = counts[static_cast<std::size_t>(incumbent)];
    for (int c = 0; c < g; ++c) {
      const int cc = counts[static_cast<std::size_t>(c)];
      marked[static_cast<std::size_t>(c)] = cc > inc_count || (cc == inc_count && c < incumbent);
    }
    const StateVec found_state = amplify_marked(g, marked);
    const int found = static_cast<int>(measure_once(found_state, rng()));
    const double s_new = read_freq(found);
    const bool better = s_new > s + margin;
    const bool tie_lower = std::abs(s_new - s) <= margin && found < incumbent;
    if (better || tie_lower) {
      incumbent = found;
      s = s_new;
      ++out.replacements;
    }
  }
  out.class_index = incumbent;
  out.freq = s;
  return out;
}

int classify_all_pairs(const MulticlassSVMModel& model, const RVector& x, const ShotPlan& plan,
                       const AllPairOptions& options) {
  const VoteRecord rec = collect_votes(model, x, plan, options.epsilon);
  if (model.g == 2) return rec.votes.front();
  if (options.oracle) return majority_vote(rec.votes, model.g);
  const std::uint64_t seed = derive_seed(plan.seed, 0xA11FA1ULL + model.binaries.size());
  return grover_frequency_search(rec, seed, default_iter_cap(model.g, options.iter_scale))
      .class_index;
}

}  // namespace qdc
