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
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qdc/dataset.hpp"
#include "qdc/error.hpp"
#include "qdc/pipeline.hpp"
#include "support.hpp"

namespace qdc {
namespace {

Dataset blobs(std::uint64_t seed = 1) {
  BlobSpec spec;
  spec.seed = seed;
  return generate_blobs(spec);
}

PipelineConfig short_config(int epochs) {
  PipelineConfig c;
  c.epochs = epochs;
  return c;
}

// Mean squared distance of each point to the mean of its cluster.
double objective_oracle(const RMatrix& x, const std::vector<int>& a, int k) {
  RMatrix c = RMatrix::Zero(k, x.cols());
  std::vector<double> n(static_cast<std::size_t>(k), 0.0);
  for (Index j = 0; j < x.rows(); ++j) {
    c.row(a[static_cast<std::size_t>(j)]) += x.row(j);
    n[static_cast<std::size_t>(a[static_cast<std::size_t>(j)])] += 1.0;
  }
  for (int i = 0; i < k; ++i) c.row(i) /= n[static_cast<std::size_t>(i)];
  double s = 0.0;
  for (Index j = 0; j < x.rows(); ++j) s += (x.row(j) - c.row(a[static_cast<std::size_t>(j)])).squaredNorm();
  return s / static_cast<double>(x.rows());
}

TEST(Pipeline, FirstEpochObjectiveMatchesLloyd) {
  PipelineState s = init_pipeline(short_config(1), blobs());
  extract_stage(s);
  const std::vector<Index> seeds = choose_seeds(s);
  const std::vector<int> ref = testing::lloyd_oracle(s.features, seeds, 50);
  cluster_stage(s);
  EXPECT_EQ(s.clusters.assignments, ref);
  EXPECT_NEAR(s.clusters.objective, objective_oracle(s.features, ref, 3), 1e-6);
}

TEST(Pipeline, NetworkUpdateLeavesStackUntouched) {
  PipelineState s = init_pipeline(short_config(1), blobs());
  extract_stage(s);
  cluster_stage(s);
  svm_stage(s);
  ASSERT_TRUE(s.stack);
  const std::string before = stack_to_json(*s.stack).dump();
  const std::string net_before = to_json(s.net).dump();
  network_stage(s);
  EXPECT_EQ(stack_to_json(*s.stack).dump(), before);
  EXPECT_NE(to_json(s.net).dump(), net_before);
}

TEST(Pipeline, FrozenFeaturesGiveNonIncreasingObjective) {
  for (double sep : {6.0, 2.0, 1.0}) {
    BlobSpec spec;
    spec.separation = sep;
    spec.seed = 4;
    PipelineConfig c = short_config(6);
    c.net_lr = 0.0;
    c.train_deep_svm = false;
    const PipelineResult r = run_pipeline(c, generate_blobs(spec));
    for (std::size_t e = 1; e < r.epochs.size(); ++e) {
      EXPECT_LE(r.epochs[e].kmeans_objective, r.epochs[e - 1].kmeans_objective + 1e-12) << "sep " << sep;
    }
  }
}

TEST(Pipeline, FixpointEpochHasZeroChurnAndKeepsParameters) {
  PipelineConfig c = short_config(1);
  c.net_lr = 0.0;
  PipelineState s = init_pipeline(c, blobs());
  run_epoch(s);
  const std::string net = to_json(s.net).dump();
  const EpochReport r = run_epoch(s);
  EXPECT_EQ(r.churn, 0.0);
  EXPECT_EQ(to_json(s.net).dump(), net);
}

TEST(Pipeline, SingleClusterDegenerate) {
  Dataset d = blobs();
  (*d.labels)[0] = 1;  // classes of sizes 19, 21, 20
  PipelineConfig c = short_config(3);
  c.k = 1;
  const PipelineResult r = run_pipeline(c, d);
  for (const EpochReport& e : r.epochs) {
    EXPECT_DOUBLE_EQ(*e.purity, 21.0 / 60.0);
    EXPECT_EQ(e.churn, 0.0);
    EXPECT_FALSE(e.svm_agreement);
  }
  EXPECT_FALSE(r.state.stack);
}

TEST(Pipeline, SameSeedGivesIdenticalReports) {
  const PipelineConfig c = short_config(3);
  const PipelineResult a = run_pipeline(c, blobs());
  const PipelineResult b = run_pipeline(c, blobs());
  ASSERT_EQ(a.epochs.size(), b.epochs.size());
  for (std::size_t e = 0; e < a.epochs.size(); ++e) EXPECT_EQ(to_json(a.epochs[e]).dump(), to_json(b.epochs[e]).dump());
  EXPECT_EQ(to_json(a.state.net).dump(), to_json(b.state.net).dump());
  EXPECT_EQ(stack_to_json(*a.state.stack).dump(), stack_to_json(*b.state.stack).dump());
  EXPECT_EQ(a.summary.dump(), b.summary.dump());
}

TEST(Pipeline, ThreeBlobsReachHighPurity) {
  const Dataset d = blobs();
  const PipelineResult r = run_pipeline(short_config(20), d);
  ASSERT_EQ(r.epochs.size(), 20u);
  EXPECT_GE(*r.epochs.back().purity, 0.95);
  EXPECT_EQ(r.epochs.back().churn, 0.0);
  for (const EpochReport& e : r.epochs) {
    EXPECT_TRUE(std::isfinite(e.hinge_loss));
    EXPECT_TRUE(std::isfinite(e.kmeans_objective));
    EXPECT_GE(e.churn, 0.0);
    EXPECT_LE(e.churn, 1.0);
  }
  // Control: plain Lloyd on the raw inputs.
  const std::vector<int> lloyd = testing::lloyd_oracle(d.x, {0, 20, 40}, 50);
  std::vector<int> hits(9, 0);
  for (std::size_t i = 0; i < lloyd.size(); ++i) ++hits[static_cast<std::size_t>(lloyd[i] * 3 + (*d.labels)[i])];
  int pure = 0;
  for (int c = 0; c < 3; ++c) pure += *std::max_element(hits.begin() + c * 3, hits.begin() + c * 3 + 3);
  EXPECT_GE(pure / 60.0, 0.95);
}

TEST(Pipeline, SampledModeIsDeterministic) {
  PipelineConfig c = short_config(2);
  c.mode = MeasureMode::kSampled;
  c.shots = 2000;
  const PipelineResult a = run_pipeline(c, blobs());
  const PipelineResult b = run_pipeline(c, blobs());
  EXPECT_EQ(a.summary.dump(), b.summary.dump());
}

TEST(Pipeline, ConfigJsonRoundTrip) {
  PipelineConfig c;
  c.epochs = 7;
  c.net.kind = "dense";
  c.net.hidden = {5, 4};
  c.seed_rule = SeedRule::kShuffle;
  c.mode = MeasureMode::kSampled;
  c.shots = 123;
  c.master_seed = 99;
  const json j = to_json(c);
  EXPECT_EQ(to_json(pipeline_config_from_json(j)), j);
}

TEST(Pipeline, ConfigRejectsUnknownKeysAndBadValues) {
  for (const char* text : {R"({"epoch": 3})", R"({"net": {"width": 3}})", R"({"kmeans": {"anneal": {"T": 1}}})",
                           R"({"epochs": 0})", R"({"k": 3, "deep_svm": {"g": 2}})", R"({"net": {"kind": "rnn"}})",
                           R"({"plan": {"mode": "noisy"}})", R"({"kmeans": {"seed_rule": "random"}})"}) {
    try {
      pipeline_config_from_json(json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigError) << text;
    }
  }
}

TEST(Pipeline, DeepSvmWidthFollowsK) {
  const PipelineConfig c = pipeline_config_from_json(json::parse(R"({"k": 4})"));
  EXPECT_EQ(c.deep_svm.g, 4);
}

TEST(Pipeline, InitValidatesDataset) {
  Dataset d = blobs();
  d.labels->pop_back();
  try {
    init_pipeline(short_config(1), d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  PipelineConfig c = short_config(1);
  c.k = 61;
  c.deep_svm.g = 61;
  EXPECT_THROW(init_pipeline(c, blobs()), Error);
}

TEST(Pipeline, RunDirectoryNameDependsOnConfigAndSeed) {
  PipelineConfig a;
  PipelineConfig b = a;
  b.master_seed = 2;
  PipelineConfig c = a;
  c.epochs = 3;
  EXPECT_EQ(run_directory_name(a), run_directory_name(PipelineConfig{}));
  EXPECT_NE(run_directory_name(a), run_directory_name(b));
  EXPECT_NE(run_directory_name(a), run_directory_name(c));
  EXPECT_EQ(run_directory_name(a).substr(run_directory_name(a).size() - 2), "-1");
}

TEST(Pipeline, ArtifactsAreWritten) {
  namespace fs = std::filesystem;
  const PipelineConfig c = short_config(2);
  const PipelineResult r = run_pipeline(c, blobs());
  const fs::path dir = fs::temp_directory_path() / ("qdc_pipeline_test_" + run_directory_name(c));
  fs::remove_all(dir);
  write_pipeline_artifacts(dir.string(), r, to_json(c));
  for (const char* f : {"config.json", "epochs.jsonl", "summary.json", "cluster.json", "stack.json", "net.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "epochs.jsonl");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const json j = json::parse(line);
    EXPECT_EQ(j.at("schema"), 1);
    EXPECT_EQ(j.at("epoch"), n);
    ++n;
  }
  EXPECT_EQ(n, 2);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace qdc
