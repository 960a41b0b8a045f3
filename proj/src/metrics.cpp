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

#include "qdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qdc/error.hpp"

namespace qdc {
namespace {

// Contingency table over compacted label ids.
struct Table {
  std::vector<int> rows;  // distinct cluster ids
  std::vector<int> cols;  // distinct class ids
  std::vector<std::vector<double>> n;
  double total = 0.0;
};

std::vector<int> distinct(const std::vector<int>& v) {
  std::vector<int> d = v;
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

Table contingency(const std::vector<int>& clusters, const std::vector<int>& truth) {
  if (clusters.size() != truth.size()) throw Error(ErrorCode::kDimensionMismatch, "labelings differ in length");
  if (clusters.empty()) throw Error(ErrorCode::kInvalidArgument, "empty labeling");
  Table t;
  t.rows = distinct(clusters);
  t.cols = distinct(truth);
  t.n.assign(t.rows.size(), std::vector<double>(t.cols.size(), 0.0));
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto r = std::lower_bound(t.rows.begin(), t.rows.end(), clusters[i]) - t.rows.begin();
    const auto c = std::lower_bound(t.cols.begin(), t.cols.end(), truth[i]) - t.cols.begin();
    t.n[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] += 1.0;
  }
  t.total = static_cast<double>(clusters.size());
  return t;
}

double entropy(const std::vector<double>& counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log(c / total);
  }
  return h;
}

}  // namespace

double purity(const std::vector<int>& clusters, const std::vector<int>& truth) {
  const Table t = contingency(clusters, truth);
  double hit = 0.0;
  for (const auto& row : t.n) hit += *std::max_element(row.begin(), row.end());
  return hit / t.total;
}

double nmi(const std::vector<int>& clusters, const std::vector<int>& truth) {
  const Table t = contingency(clusters, truth);
  std::vector<double> rs(t.rows.size(), 0.0);
  std::vector<double> cs(t.cols.size(), 0.0);
  for (std::size_t r = 0; r < rs.size(); ++r) {
    for (std::size_t c = 0; c < cs.size(); ++c) {
      rs[r] += t.n[r][c];
      cs[c] += t.n[r][c];
    }
  }
  const double hr = entropy(rs, t.total);
  const double hc = entropy(cs, t.total);
  if (hr == 0.0 && hc == 0.0) return 1.0;
  double mi = 0.0;
  for (std::size_t r = 0; r < rs.size(); ++r) {
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const double n = t.n[r][c];
      if (n > 0.0) mi += (n / t.total) * std::log(n * t.total / (rs[r] * cs[c]));
    }
  }
  return std::clamp(2.0 * mi / (hr + hc), 0.0, 1.0);
}

std::vector<int> best_matching(const std::vector<int>& clusters, const std::vector<int>& truth) {
  const Table t = contingency(clusters, truth);
  const std::size_t nr = t.rows.size();
  const std::size_t nc = t.cols.size();
  const std::size_t size = std::max(nr, nc);
  auto gain = [&](std::size_t r, std::size_t c) { return r < nr && c < nc ? t.n[r][c] : 0.0; };
  std::vector<std::size_t> assign(size);  // padded row -> padded column
  if (size <= 6) {
    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = -1.0;
    do {
      double s = 0.0;
      for (std::size_t r = 0; r < size; ++r) s += gain(r, perm[r]);
      if (s > best) {
        best = s;
        assign = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<bool> row_used(size, false), col_used(size, false);
    for (std::size_t step = 0; step < size; ++step) {
      double best = -1.0;
      std::size_t br = 0, bc = 0;
      for (std::size_t r = 0; r < size; ++r) {
        if (row_used[r]) continue;
        for (std::size_t c = 0; c < size; ++c) {
          if (!col_used[c] && gain(r, c) > best) {
            best = gain(r, c);
            br = r;
            bc = c;
          }
        }
      }
      row_used[br] = col_used[bc] = true;
      assign[br] = bc;
    }
  }
  std::map<int, int> to_class;
  for (std::size_t r = 0; r < nr; ++r) to_class[t.rows[r]] = assign[r] < nc ? t.cols[assign[r]] : -1;
  std::vector<int> out(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) out[i] = to_class[clusters[i]];
  return out;
}

double matched_accuracy(const std::vector<int>& clusters, const std::vector<int>& truth) {
  const std::vector<int> mapped = best_matching(clusters, truth);
  double hit = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) hit += mapped[i] == truth[i] ? 1.0 : 0.0;
  return hit / static_cast<double>(mapped.size());
}

double churn(const std::vector<int>& before, const std::vector<int>& after) {
  if (before.size() != after.size()) throw Error(ErrorCode::kDimensionMismatch, "labelings differ in length");
  if (before.empty()) return 0.0;
  double changed = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) changed += before[i] != after[i] ? 1.0 : 0.0;
  return changed / static_cast<double>(before.size());
}

}  // namespace qdc
