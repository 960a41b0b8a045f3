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

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qdc/qsvm.hpp"

namespace qdc {

/// One-vs-one family: one binary model per unordered class pair (i, j),
/// i < j, in lexicographic pair order. Label +1 means class i.
struct MulticlassSVMModel {
  int g = 0;
  std::vector<QuantumSVMModel> binaries;
  std::vector<std::pair<int, int>> pairs;
  /// Largest pairwise training subset; sizes every oracle/query register.
  Index m_max = 0;

  Index input_dim() const { return binaries.empty() ? 0 : binaries.front().support.cols(); }
};

inline int pair_count(int g) { return g * (g - 1) / 2; }

/// Labels in [0, g). Throws kEmptyClass if some class has no sample.
MulticlassSVMModel train_multiclass(const RMatrix& data, const std::vector<int>& labels, int g,
                                    const KernelSpec& kernel, double eta,
                                    std::optional<double> eps_k = std::nullopt,
                                    InversionMode mode = InversionMode::exact_spectral());

struct VoteRecord {
  std::vector<int> votes;  // one class index per binary classifier
  int g = 0;
  double epsilon = 0.01;   // measurement error of a frequency readout
  double freq = 0.0;       // estimated frequency of the winner
};

/// Collects one vote per binary model by swap-test classification. The
/// plan for binary r is plan.derive(r).
VoteRecord collect_votes(const MulticlassSVMModel& model, const RVector& x, const ShotPlan& plan,
                         double epsilon = 0.01);

/// Exact argmax of vote counts; ties go to the lowest class index.
int majority_vote(const std::vector<int>& votes, int g);

/// Amplitude amplification of the marked classes from the uniform state.
/// Uses the phase-matched variant whose success probability is exactly 1
/// for a known marked count.
StateVec amplify_marked(int g, const std::vector<bool>& marked);

/// ceil(c * log2 g), at least 1.
int default_iter_cap(int g, double c = 3.0);

struct SearchResult {
  int class_index = 0;
  double freq = 0.0;
  int replacements = 0;
};

/// Iterated maximum-frequency search over the class register.
///
/// The incumbent starts as the class of a uniformly random vote. Each
/// round runs amplify_marked over classes that beat the incumbent
/// (higher count, or equal count and lower index), measures the class
/// register, and reads the found class's frequency with error at most
/// epsilon / (4g). The incumbent moves when the readout beats its own by
/// more than epsilon / (2g), or sits within that band with a lower index.
SearchResult grover_frequency_search(const VoteRecord& votes, std::uint64_t seed, int iter_cap);

struct AllPairOptions {
  bool oracle = false;  // true: exact majority vote
  double epsilon = 0.01;
  double iter_scale = 3.0;
};

int classify_all_pairs(const MulticlassSVMModel& model, const RVector& x,
                       const ShotPlan& plan = ShotPlan::exact(),
                       const AllPairOptions& options = {});

}  // namespace qdc
