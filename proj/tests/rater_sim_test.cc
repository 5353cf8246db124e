// Copyright 2026 The aecmos Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aecmos/rater_sim.h"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "aecmos/corpus.h"
#include "aecmos/metrics.h"
#include "aecmos/screening.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace aecmos {
namespace {

struct Campaign {
  Corpus corpus;
  GroundTruth truth;
  std::vector<TaskManifest> manifests;
};

// NE-ST clips c<k>_<i> in condition k with the given per-condition truth.
Campaign MakeCampaign(const std::vector<double>& truths, int clips_per_cond,
                      size_t votes, uint64_t seed) {
  Campaign c;
  std::vector<std::string> ids;
  for (size_t k = 0; k < truths.size(); ++k) {
    for (int i = 0; i < clips_per_cond; ++i) {
      CorpusClip clip;
      clip.clip_id = "c" + std::to_string(k) + "_" + std::to_string(i);
      clip.condition_id = "k" + std::to_string(k);
      clip.scenario = Scenario::kNearEndSingleTalk;
      clip.path = clip.clip_id + ".wav";
      c.corpus.Add(clip);
      ids.push_back(clip.clip_id);
      c.truth.Set(clip.clip_id, Scale::kOverall, truths[k]);
    }
  }
  const std::vector<TrappingDef> traps = {{"trap", {Scale::kOverall, 2}}};
  const std::vector<GoldDef> golds = {{"gold", {Scale::kOverall, 5}, 1}};
  c.truth.Set("gold", Scale::kOverall, 5.0);
  BuildConfig cfg;
  cfg.votes_target = votes;
  auto built = BuildTasks(ids, traps, golds, cfg, seed);
  EXPECT_TRUE(built.ok()) << built.status();
  c.manifests = *built;
  return c;
}

TEST(SimulatedVote, NoiselessRounds) {
  SplitMix64 rng(1);
  const RaterProfile exact;
  for (double t : {1.0, 1.4, 1.6, 2.49, 3.0, 4.51, 5.0}) {
    for (int i = 0; i < 20; ++i) {
      EXPECT_EQ(SimulatedVote(t, exact, rng), static_cast<int>(std::lround(t)));
    }
  }
  RaterProfile biased{RaterKind::kBiased, 0.0, 2.0, 1.0};
  EXPECT_EQ(SimulatedVote(4.0, biased, rng), 5);
  biased.bias = -2.0;
  EXPECT_EQ(SimulatedVote(2.0, biased, rng), 1);
}

TEST(SimulateRun, NoiselessPipelineMatchesRoundedTruth) {
  const std::vector<double> truths = {1.3, 2.6, 3.5, 4.2};
  Campaign c = MakeCampaign(truths, 15, 4, 3);
  const std::vector<PopulationGroup> groups = {
      {{RaterKind::kReliable, 0.0, 0.0, 1.0}, 10, "r"}};
  const auto pop = ExpandPopulation(groups);
  ASSERT_OK_AND_ASSIGN(auto subs, SimulateRun(c.manifests, pop, c.truth, 9));
  ASSERT_OK_AND_ASSIGN(ScreeningReport report,
                       ScreenCampaign(subs, c.manifests, c.corpus, ScreeningConfig{}));
  EXPECT_EQ(report.rejected, 0);
  ASSERT_OK_AND_ASSIGN(Aggregation agg, AggregateConditions(report.votes));
  ASSERT_EQ(agg.conditions.size(), 4u);
  for (size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(agg.conditions[k].mean, std::lround(truths[k]));
    EXPECT_EQ(agg.conditions[k].n_votes, 15 * 4);
  }
}

TEST(SimulateRun, SpammerAttention) {
  Campaign c = MakeCampaign({3.0}, 100, 1000, 4);
  ASSERT_GE(c.manifests.size(), 10000u);
  const std::vector<PopulationGroup> groups = {
      {{RaterKind::kSpammer, 0.0, 0.0, 0.2}, 25, "s"}};
  const auto pop = ExpandPopulation(groups);
  ASSERT_OK_AND_ASSIGN(auto subs, SimulateRun(c.manifests, pop, c.truth, 11));
  int correct = 0, total = 0;
  for (const auto& s : subs) {
    for (const auto& a : s.answers) {
      if (a.clip_id == "trap") {
        ++total;
        correct += a.score == 2;
      } else {
        EXPECT_EQ(a.listen_duration_s, 0.0);
      }
    }
  }
  ASSERT_EQ(total, static_cast<int>(subs.size()));
  EXPECT_NEAR(double(correct) / total, 0.2, 0.01);
}

TEST(SimulateRun, DeterministicUnderSeed) {
  Campaign c = MakeCampaign({2.0, 4.0}, 10, 3, 5);
  const std::vector<PopulationGroup> groups = {
      {{RaterKind::kReliable, 0.7, 0.0, 1.0}, 5, "r"},
      {{RaterKind::kSpammer, 0.0, 0.0, 0.2}, 2, "s"},
      {{RaterKind::kBiased, 0.5, 0.4, 0.9}, 2, "b"}};
  const auto pop = ExpandPopulation(groups);
  ASSERT_EQ(pop.size(), 9u);
  EXPECT_EQ(pop[0].first, "r0");
  EXPECT_EQ(pop[8].first, "b1");
  ASSERT_OK_AND_ASSIGN(auto a, SimulateRun(c.manifests, pop, c.truth, 77));
  ASSERT_OK_AND_ASSIGN(auto b, SimulateRun(c.manifests, pop, c.truth, 77));
  ASSERT_OK_AND_ASSIGN(auto d, SimulateRun(c.manifests, pop, c.truth, 78));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, d);
  ASSERT_EQ(a.size(), c.manifests.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].task_id, c.manifests[i].task_id);
}

TEST(SimulateRun, Errors) {
  Campaign c = MakeCampaign({2.0}, 5, 1, 6);
  EXPECT_KIND(SimulateRun(c.manifests, {}, c.truth, 1), kEmptyGroup);
  const std::vector<PopulationGroup> groups = {
      {{RaterKind::kReliable, 0.0, 0.0, 1.0}, 1, "r"}};
  const auto pop = ExpandPopulation(groups);
  EXPECT_KIND(SimulateRun(c.manifests, pop, GroundTruth{}, 1), kMissingTruth);
}

TEST(SimulateRun, MeansConvergeToTruth) {
  const std::vector<double> truths = {2.2, 2.9, 3.4, 3.8};
  const std::vector<PopulationGroup> groups = {
      {{RaterKind::kReliable, 0.7, 0.0, 1.0}, 50, "r"}};
  const auto pop = ExpandPopulation(groups);
  int within = 0, total = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Campaign c = MakeCampaign(truths, 20, 45, seed);
    ASSERT_OK_AND_ASSIGN(auto subs, SimulateRun(c.manifests, pop, c.truth, seed));
    ASSERT_OK_AND_ASSIGN(ScreeningReport report, ScreenCampaign(
                                                     subs, c.manifests, c.corpus,
                                                     ScreeningConfig{}));
    ASSERT_OK_AND_ASSIGN(Aggregation agg, AggregateConditions(report.votes));
    for (size_t k = 0; k < truths.size(); ++k) {
      ASSERT_GE(agg.conditions[k].n_votes, 800);
      ++total;
      within += std::abs(agg.conditions[k].mean - truths[k]) <= 0.08;
    }
  }
  EXPECT_GE(double(within) / total, 0.99);
}

}  // namespace
}  // namespace aecmos
