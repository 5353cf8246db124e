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

#include "aecmos/metrics.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace aecmos {
namespace {

using ::aecmos::testing::RandomSamples;

ErleInput Pair(std::vector<float> y, std::vector<float> e, int rate = 16000) {
  return {AudioBuffer::Mono(rate, std::move(y)),
          AudioBuffer::Mono(rate, std::move(e))};
}

std::vector<float> Scaled(const std::vector<float>& x, float c) {
  std::vector<float> out(x);
  for (float& v : out) v *= c;
  return out;
}

TEST(Erle, Examples) {
  std::mt19937_64 gen(1);
  const auto y = RandomSamples(4000, gen);
  ASSERT_OK_AND_ASSIGN(double same, Erle(Pair(y, y)));
  EXPECT_EQ(same, 0.0);
  // Computed on doubles so the 0.1 factor is exact up to float rounding of y.
  std::vector<float> e(y.size());
  for (size_t i = 0; i < y.size(); ++i) e[i] = y[i] * 0.1f;
  ASSERT_OK_AND_ASSIGN(double twenty, Erle(Pair(y, e)));
  EXPECT_NEAR(twenty, 20.0, 1e-5);
  ASSERT_OK_AND_ASSIGN(double capped,
                       Erle(Pair(y, std::vector<float>(y.size(), 0.0f))));
  EXPECT_EQ(capped, 100.0);
}

TEST(Erle, PowerOfTwoRatioIsExact) {
  std::mt19937_64 gen(2);
  const auto y = RandomSamples(1000, gen);
  ASSERT_OK_AND_ASSIGN(double db, Erle(Pair(y, Scaled(y, 0.125f))));
  EXPECT_NEAR(db, 10.0 * std::log10(64.0), 1e-9);
}

TEST(Erle, BothSilentIsZero) {
  ASSERT_OK_AND_ASSIGN(double db, Erle(Pair({0, 0, 0}, {0, 0, 0})));
  EXPECT_EQ(db, 0.0);
}

TEST(Erle, ScaleInvariance) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 50; ++t) {
    const auto y = RandomSamples(500, gen);
    const auto e = RandomSamples(500, gen, 0.05f);
    ASSERT_OK_AND_ASSIGN(double base, Erle(Pair(y, e)));
    for (float c : {0.25f, 2.0f, -1.0f}) {
      ASSERT_OK_AND_ASSIGN(double scaled,
                           Erle(Pair(Scaled(y, c), Scaled(e, c))));
      EXPECT_NEAR(scaled, base, 1e-9);
    }
  }
}

TEST(Erle, Errors) {
  EXPECT_KIND(Erle(Pair({1, 2}, {1})), kLengthMismatch);
  EXPECT_KIND(Erle(Pair({}, {})), kEmptySignal);
  ErleInput mismatch{AudioBuffer::Mono(16000, {1}), AudioBuffer::Mono(48000, {1})};
  EXPECT_KIND(Erle(mismatch), kSampleRateMismatch);
  ErleInput stereo{AudioBuffer::Zeros(16000, 2), AudioBuffer::Zeros(16000, 2)};
  ASSERT_OK_AND_ASSIGN(stereo.y, AudioBuffer::Create(16000, {{1, 1}, {1, 1}}));
  EXPECT_KIND(Erle(stereo), kNotMono);
}

TEST(ErleFramewise, StationaryFramesMatchGlobal) {
  // A 320-sample pattern repeated: every 20 ms frame at 16 kHz is identical.
  std::mt19937_64 gen(4);
  const auto py = RandomSamples(320, gen);
  const auto pe = RandomSamples(320, gen, 0.1f);
  std::vector<float> y, e;
  for (int r = 0; r < 10; ++r) {
    y.insert(y.end(), py.begin(), py.end());
    e.insert(e.end(), pe.begin(), pe.end());
  }
  const ErleInput in = Pair(y, e);
  ASSERT_OK_AND_ASSIGN(double global, Erle(in));
  ASSERT_OK_AND_ASSIGN(FramewiseErle fw, ErleFramewise(in));
  ASSERT_EQ(fw.frame_db.size(), 10u);
  for (double d : fw.frame_db) EXPECT_NEAR(d, global, 1e-9);
  EXPECT_NEAR(fw.mean_db, global, 1e-9);
  EXPECT_EQ(fw.active_frames, 10u);
}

TEST(ErleFramewise, GatingExcludesSilentHalf) {
  std::mt19937_64 gen(5);
  auto active = RandomSamples(16000, gen);
  std::vector<float> y(active);
  y.resize(32000, 0.0f);
  std::vector<float> e(32000, 0.0f);
  for (size_t i = 0; i < 16000; ++i) e[i] = active[i] * 0.1f;
  ASSERT_OK_AND_ASSIGN(double oracle,
                       Erle(Pair(active, std::vector<float>(e.begin(), e.begin() + 16000))));
  ASSERT_OK_AND_ASSIGN(FramewiseErle fw, ErleFramewise(Pair(y, e), 20.0, -30.0));
  EXPECT_EQ(fw.frame_db.size(), 100u);
  EXPECT_EQ(fw.active_frames, 50u);
  for (size_t f = 0; f < 100; ++f) EXPECT_EQ(fw.active[f], f < 50) << f;
  EXPECT_NEAR(fw.mean_db, oracle, 0.05);
  EXPECT_NEAR(fw.mean_db, 20.0, 0.05);

  // Gating off: silent frames (0 dB, both energies floored) pull the mean.
  ASSERT_OK_AND_ASSIGN(FramewiseErle all, ErleFramewise(Pair(y, e)));
  EXPECT_EQ(all.active_frames, 100u);
  double sum = 0.0;
  for (double d : all.frame_db) sum += d;
  EXPECT_NEAR(all.mean_db, sum / 100.0, 1e-12);
}

TEST(ErleFramewise, PartialLastFrameKept) {
  ASSERT_OK_AND_ASSIGN(FramewiseErle fw,
                       ErleFramewise(Pair(std::vector<float>(330, 0.5f),
                                          std::vector<float>(330, 0.05f))));
  EXPECT_EQ(fw.frame_db.size(), 2u);
}

TEST(ErleFramewise, Errors) {
  EXPECT_KIND(ErleFramewise(Pair({1, 2}, {1})), kLengthMismatch);
  EXPECT_KIND(ErleFramewise(Pair({}, {})), kEmptySignal);
  EXPECT_FALSE(ErleFramewise(Pair({1, 2}, {1, 2}), 0.01).ok());
}

// Plain product-moment formula, for comparison.
double NaivePearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Correlate, Examples) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {1, 3, 2, 4};
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  for (auto m : {CorrelationMethod::kPearson, CorrelationMethod::kSpearman}) {
    ASSERT_OK_AND_ASSIGN(double self, Correlate(x, x, m));
    EXPECT_NEAR(self, 1.0, 1e-15);
    ASSERT_OK_AND_ASSIGN(double anti, Correlate(x, neg, m));
    EXPECT_NEAR(anti, -1.0, 1e-15);
  }
  ASSERT_OK_AND_ASSIGN(double rho, Correlate(x, y, CorrelationMethod::kSpearman));
  EXPECT_NEAR(rho, 0.8, 1e-12);
}

TEST(Correlate, AverageRanksWithTies) {
  const std::vector<double> v = {10, 20, 10, 30, 20, 10};
  EXPECT_EQ(AverageRanks(v), (std::vector<double>{2, 4.5, 2, 6, 4.5, 2}));
}

TEST(Correlate, Errors) {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {1, 2};
  const std::vector<double> c = {2, 2, 2};
  const std::vector<double> nan = {1, NAN, 3};
  EXPECT_KIND(Correlate(a, b, CorrelationMethod::kPearson), kLengthMismatch);
  EXPECT_KIND(Correlate(b, b, CorrelationMethod::kPearson), kDegenerateInput);
  EXPECT_KIND(Correlate(a, c, CorrelationMethod::kPearson), kDegenerateInput);
  EXPECT_KIND(Correlate(c, a, CorrelationMethod::kSpearman), kDegenerateInput);
  EXPECT_KIND(Correlate(a, nan, CorrelationMethod::kPearson), kDegenerateInput);
}

TEST(Correlate, Invariants) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    const size_t n = 3 + t % 40;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = normal(gen);
      y[i] = 0.5 * x[i] + normal(gen);
    }
    ASSERT_OK_AND_ASSIGN(double p, Correlate(x, y, CorrelationMethod::kPearson));
    ASSERT_OK_AND_ASSIGN(double s, Correlate(x, y, CorrelationMethod::kSpearman));
    ASSERT_OK_AND_ASSIGN(double p_sym, Correlate(y, x, CorrelationMethod::kPearson));
    ASSERT_OK_AND_ASSIGN(double s_sym, Correlate(y, x, CorrelationMethod::kSpearman));
    EXPECT_NEAR(p, p_sym, 1e-12);
    EXPECT_NEAR(s, s_sym, 1e-12);
    EXPECT_NEAR(p, NaivePearson(x, y), 1e-9);

    std::vector<double> affine(x), monotone(x);
    for (double& v : affine) v = 3.0 * v + 7.0;
    for (double& v : monotone) v = std::exp(v);
    ASSERT_OK_AND_ASSIGN(double p_aff, Correlate(affine, y, CorrelationMethod::kPearson));
    ASSERT_OK_AND_ASSIGN(double s_mono, Correlate(monotone, y, CorrelationMethod::kSpearman));
    EXPECT_NEAR(p_aff, p, 1e-9);
    EXPECT_EQ(s_mono, s);

    // Tie-free: Spearman is Pearson over integer ranks.
    const auto rx = AverageRanks(x);
    const auto ry = AverageRanks(y);
    ASSERT_OK_AND_ASSIGN(double on_ranks, Correlate(rx, ry, CorrelationMethod::kPearson));
    EXPECT_EQ(on_ranks, s);
    EXPECT_GE(p, -1.0);
    EXPECT_LE(p, 1.0);
  }
}

VoteRecord Vote(std::string condition, Scale scale, int score,
                std::string clip = "c0") {
  VoteRecord v;
  v.worker_id = "w";
  v.clip_id = std::move(clip);
  v.condition_id = std::move(condition);
  v.scenario = Scenario::kFarEndSingleTalk;
  v.scale = scale;
  v.score = score;
  return v;
}

TEST(Aggregate, Examples) {
  std::vector<VoteRecord> threes(7, Vote("a", Scale::kEcho, 3));
  ASSERT_OK_AND_ASSIGN(Aggregation flat, AggregateConditions(threes));
  ASSERT_EQ(flat.conditions.size(), 1u);
  EXPECT_EQ(flat.conditions[0].mean, 3.0);
  EXPECT_EQ(flat.conditions[0].ci95, 0.0);
  EXPECT_EQ(flat.conditions[0].n_votes, 7);

  const std::vector<VoteRecord> spread = {Vote("a", Scale::kEcho, 1),
                                          Vote("a", Scale::kEcho, 5)};
  ASSERT_OK_AND_ASSIGN(Aggregation two, AggregateConditions(spread));
  EXPECT_EQ(two.conditions[0].mean, 3.0);
  EXPECT_NEAR(two.conditions[0].stddev, 2.8284271247461903, 1e-12);
  EXPECT_NEAR(two.conditions[0].ci95, 1.96 * std::sqrt(8.0) / std::sqrt(2.0),
              1e-12);
}

TEST(Aggregate, GroupsByConditionAndScale) {
  std::vector<VoteRecord> v = {
      Vote("a", Scale::kEcho, 2), Vote("b", Scale::kEcho, 4),
      Vote("a", Scale::kOther, 5), Vote("b", Scale::kOther, 1),
      Vote("a", Scale::kEcho, 4, "c1")};
  ASSERT_OK_AND_ASSIGN(Aggregation agg, AggregateConditions(v));
  ASSERT_EQ(agg.conditions.size(), 4u);
  size_t echo = 0;
  for (const auto& c : agg.conditions) echo += c.scale == Scale::kEcho;
  EXPECT_EQ(echo, 2u);
  EXPECT_EQ(agg.conditions[0].condition_id, "a");
  EXPECT_EQ(agg.conditions[0].scale, Scale::kEcho);
  EXPECT_EQ(agg.conditions[0].mean, 3.0);
  EXPECT_EQ(agg.clips.size(), 5u);
}

TEST(Aggregate, Errors) {
  EXPECT_KIND(AggregateConditions({}), kEmptyGroup);
  const std::vector<VoteRecord> bad = {Vote("a", Scale::kEcho, 6)};
  EXPECT_KIND(AggregateConditions(bad), kSchemaInvalid);
}

TEST(Aggregate, OrderAndPartitionInvariance) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> score(1, 5), cond(0, 3);
  std::vector<VoteRecord> votes;
  for (int i = 0; i < 2000; ++i) {
    votes.push_back(Vote("k" + std::to_string(cond(gen)), Scale::kEcho,
                         score(gen), "clip" + std::to_string(i % 37)));
  }
  ASSERT_OK_AND_ASSIGN(Aggregation base, AggregateConditions(votes));
  std::shuffle(votes.begin(), votes.end(), gen);
  ASSERT_OK_AND_ASSIGN(Aggregation shuffled, AggregateConditions(votes));
  VoteAggregator parts[3];
  for (size_t i = 0; i < votes.size(); ++i) parts[i % 3].Add(votes[i]);
  parts[0].Merge(parts[2]);
  parts[1].Merge(parts[0]);
  const auto merged = parts[1].ConditionScores();
  ASSERT_EQ(base.conditions.size(), shuffled.conditions.size());
  ASSERT_EQ(base.conditions.size(), merged.size());
  for (size_t i = 0; i < merged.size(); ++i) {
    EXPECT_EQ(base.conditions[i].mean, shuffled.conditions[i].mean);
    EXPECT_EQ(base.conditions[i].ci95, shuffled.conditions[i].ci95);
    EXPECT_EQ(base.conditions[i].mean, merged[i].mean);
    EXPECT_EQ(base.conditions[i].ci95, merged[i].ci95);
    EXPECT_EQ(base.conditions[i].n_votes, merged[i].n_votes);
  }
}

TEST(Aggregate, CiScalesWithDuplication) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> score(1, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<VoteRecord> votes;
    const int n = 2 + t;
    for (int i = 0; i < n; ++i) votes.push_back(Vote("a", Scale::kEcho, score(gen)));
    votes.push_back(Vote("a", Scale::kEcho, 1));
    votes.push_back(Vote("a", Scale::kEcho, 5));
    const double m = votes.size();
    ASSERT_OK_AND_ASSIGN(Aggregation once, AggregateConditions(votes));
    const auto copy = votes;
    votes.insert(votes.end(), copy.begin(), copy.end());
    ASSERT_OK_AND_ASSIGN(Aggregation twice, AggregateConditions(votes));
    // Sum of squared deviations doubles and n doubles:
    // ci' = ci * sqrt((m - 1) / (2m - 1)).
    EXPECT_NEAR(twice.conditions[0].ci95,
                once.conditions[0].ci95 * std::sqrt((m - 1) / (2 * m - 1)), 1e-9);
    EXPECT_EQ(twice.conditions[0].mean, once.conditions[0].mean);
  }
}

}  // namespace
}  // namespace aecmos
