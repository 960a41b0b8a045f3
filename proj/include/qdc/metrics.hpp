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

#include <vector>

namespace qdc {

/// Fraction of points whose cluster's majority class matches their own.
double purity(const std::vector<int>& clusters, const std::vector<int>& truth);

/// Normalized mutual information, 2 I / (H(clusters) + H(truth)); 1 when
/// both labelings are constant.
double nmi(const std::vector<int>& clusters, const std::vector<int>& truth);

/// Every point's cluster id relabeled to the class it is matched with.
/// The one-to-one matching maximizes agreement: exhaustive over
/// permutations for at most 6 labels, greedy otherwise. Clusters left
/// without a class become -1.
std::vector<int> best_matching(const std::vector<int>& clusters, const std::vector<int>& truth);

/// Accuracy of `clusters` relabeled by best_matching.
double matched_accuracy(const std::vector<int>& clusters, const std::vector<int>& truth);

/// Fraction of positions where the two labelings differ.
double churn(const std::vector<int>& before, const std::vector<int>& after);

}  // namespace qdc
