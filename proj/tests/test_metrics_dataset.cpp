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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "qdc/dataset.hpp"
#include "qdc/error.hpp"
#include "qdc/metrics.hpp"

namespace qdc {
namespace {

// Entropy form: NMI = 2 (H(U) + H(V) - H(U,V)) / (H(U) + H(V)).
double nmi_oracle(const std::vector<int>& u, const std::vector<int>& v) {
  const double n = static_cast<double>(u.size());
  std::map<int, double> cu, cv;
  std::map<std::pair<int, int>, double> cj;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cu[u[i]] += 1;
    cv[v[i]] += 1;
    cj[{u[i], v[i]}] += 1;
  }
  auto h = [n](const auto& m) {
    double s = 0.0;
    for (const auto& [key, c] : m) s -= c / n * std::log(c / n);
    return s;
  };
  const double hu = h(cu), hv = h(cv);
  if (hu + hv == 0.0) return 1.0;
  return 2.0 * (hu + hv - h(cj)) / (hu + hv);
}

// Best accuracy over every injective relabeling, by brute force.
double accuracy_oracle(const std::vector<int>& clusters, const std::vector<int>& truth, int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
  double best = 0.0;
  do {
    double hit = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      hit += perm[static_cast<std::size_t>(clusters[i])] == truth[i] ? 1.0 : 0.0;
    }
    best = std::max(best, hit / static_cast<double>(clusters.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(Metrics, PurityExamples) {
  EXPECT_DOUBLE_EQ(purity({0, 0, 1, 1}, {5, 5, 7, 7}), 1.0);
  EXPECT_DOUBLE_EQ(purity({0, 0, 0, 0}, {0, 0, 0, 1}), 0.75);
  EXPECT_DOUBLE_EQ(purity({0, 0, 1, 1, 2, 2}, {0, 1, 1, 1, 2, 0}), 4.0 / 6.0);
}

TEST(Metrics, NmiExamples) {
  EXPECT_DOUBLE_EQ(nmi({0, 0, 1, 1}, {1, 1, 0, 0}), 1.0);
  EXPECT_NEAR(nmi({0, 1, 0, 1}, {0, 0, 1, 1}), 0.0, 1e-15);
  EXPECT_NEAR(nmi({0, 0, 0, 1}, {0, 0, 1, 1}), 0.3437110184854507, 1e-12);
  EXPECT_DOUBLE_EQ(nmi({2, 2, 2}, {4, 4, 4}), 1.0);
}

TEST(Metrics, RandomLabelingsMatchOracles) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 4;
    std::uniform_int_distribution<int> lab(0, k - 1);
    std::vector<int> a(40), b(40);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = lab(rng);
      b[i] = lab(rng);
    }
    EXPECT_NEAR(nmi(a, b), std::clamp(nmi_oracle(a, b), 0.0, 1.0), 1e-12);
    EXPECT_NEAR(matched_accuracy(a, b), accuracy_oracle(a, b, k), 1e-15);
    EXPECT_GE(purity(a, b), matched_accuracy(a, b));
  }
}

TEST(Metrics, InvariantUnderClusterRelabeling) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a(30), b(30);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = lab(rng);
      b[i] = lab(rng);
    }
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> relabeled(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) relabeled[i] = perm[static_cast<std::size_t>(a[i])] + 10;
    EXPECT_DOUBLE_EQ(purity(relabeled, b), purity(a, b));
    EXPECT_NEAR(nmi(relabeled, b), nmi(a, b), 1e-14);
    EXPECT_DOUBLE_EQ(matched_accuracy(relabeled, b), matched_accuracy(a, b));
  }
}

TEST(Metrics, BestMatchingMapsClusters) {
  const std::vector<int> mapped = best_matching({1, 1, 0, 0, 2}, {0, 0, 2, 2, 1});
  EXPECT_EQ(mapped, (std::vector<int>{0, 0, 2, 2, 1}));
}

TEST(Metrics, ChurnExamples) {
  EXPECT_DOUBLE_EQ(churn({0, 1, 2, 0}, {0, 1, 2, 0}), 0.0);
  EXPECT_DOUBLE_EQ(churn({0, 1, 2, 0}, {1, 1, 2, 2}), 0.5);
  EXPECT_DOUBLE_EQ(churn({}, {}), 0.0);
  EXPECT_THROW(churn({0}, {0, 1}), Error);
}

TEST(Metrics, LengthMismatchThrows) {
  try {
    purity({0, 1}, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(nmi({}, {}), Error);
}

TEST(Dataset, SplitCsvLine) {
  EXPECT_EQ(split_csv_line("a, b ,c"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(split_csv_line("1,2,"), (std::vector<std::string>{"1", "2", ""}));
}

TEST(Dataset, ReadWithLabels) {
  std::istringstream in("x0,x1,label\n1.5,-2,0\n\n3,4e-1,2\n");
  const Dataset d = read_dataset_csv(in);
  EXPECT_EQ(d.columns, (std::vector<std::string>{"x0", "x1"}));
  ASSERT_EQ(d.x.rows(), 2);
  EXPECT_DOUBLE_EQ(d.x(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(d.x(1, 1), 0.4);
  ASSERT_TRUE(d.labels);
  EXPECT_EQ(*d.labels, (std::vector<int>{0, 2}));
}

TEST(Dataset, ReadWithoutLabels) {
  std::istringstream in("a,b\n1,2\n");
  const Dataset d = read_dataset_csv(in);
  EXPECT_FALSE(d.labels);
  EXPECT_EQ(d.x.cols(), 2);
}

TEST(Dataset, BadInputsAreConfigErrors) {
  for (const char* text : {"", "label\n1\n", "a,b\n1\n", "a\nxyz\n", "a,label\n1,0.5\n", "a\n", "a,label,label\n1,0,0\n"}) {
    std::istringstream in(text);
    try {
      read_dataset_csv(in);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigError) << text;
    }
  }
  try {
    read_dataset_csv(std::string("/nonexistent/file.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(Dataset, RoundTripIsExact) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1e3);
  Dataset d;
  d.columns = {"f0", "f1", "f2"};
  d.x.resize(7, 3);
  for (Index i = 0; i < 7; ++i) {
    for (Index c = 0; c < 3; ++c) d.x(i, c) = g(rng) * std::pow(10.0, static_cast<double>(i - 3));
  }
  d.labels = std::vector<int>{0, 1, 2, 0, 1, 2, -1};
  std::stringstream s;
  write_dataset_csv(s, d);
  const Dataset back = read_dataset_csv(s);
  EXPECT_EQ(back.columns, d.columns);
  EXPECT_EQ(back.x, d.x);
  EXPECT_EQ(*back.labels, *d.labels);
}

TEST(Dataset, BlobsShapeAndLabels) {
  const Dataset d = generate_blobs(BlobSpec{});
  EXPECT_EQ(d.x.rows(), 60);
  EXPECT_EQ(d.x.cols(), 8);
  ASSERT_TRUE(d.labels);
  std::vector<int> counts(3, 0);
  for (int l : *d.labels) ++counts.at(static_cast<std::size_t>(l));
  EXPECT_EQ(counts, (std::vector<int>{20, 20, 20}));
  EXPECT_EQ(d.columns.size(), 8u);
}

TEST(Dataset, BlobCentersRespectSeparation) {
  BlobSpec spec;
  spec.per_blob = 400;
  const Dataset d = generate_blobs(spec);
  RMatrix means = RMatrix::Zero(3, 8);
  for (Index i = 0; i < d.x.rows(); ++i) means.row((*d.labels)[static_cast<std::size_t>(i)]) += d.x.row(i) / 400.0;
  // Sample means sit within a few standard errors of the true centers.
  const double slack = 6.0 * std::sqrt(8.0 / 400.0);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) EXPECT_GE((means.row(a) - means.row(b)).norm(), 6.0 - slack);
  }
}

TEST(Dataset, BlobsDeterministicPerSeed) {
  BlobSpec a, b;
  b.seed = 2;
  EXPECT_EQ(generate_blobs(a).x, generate_blobs(a).x);
  EXPECT_NE(generate_blobs(a).x, generate_blobs(b).x);
  BlobSpec bad;
  bad.k = 0;
  EXPECT_THROW(generate_blobs(bad), Error);
}

}  // namespace
}  // namespace qdc
