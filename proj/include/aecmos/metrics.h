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

#ifndef AECMOS_METRICS_H_
#define AECMOS_METRICS_H_

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/statusor.h"
#include "aecmos/audio.h"
#include "aecmos/scales.h"

namespace aecmos {

// ---------------------------------------------------------------------------
// Echo return loss enhancement.

struct ErleInput {
  AudioBuffer y;  // microphone signal
  AudioBuffer e;  // residual echo after cancellation
};

inline constexpr double kErleFloor = 1e-10;
inline constexpr double kErleCapDb = 100.0;

// 10 log10(mean(y^2) / max(mean(e^2), floor)), clamped to +-100 dB.
absl::StatusOr<double> Erle(const ErleInput& input,
                            double floor = kErleFloor);

struct FramewiseErle {
  std::vector<double> frame_db;
  std::vector<bool> active;
  size_t active_frames = 0;
  double mean_db = 0.0;
};

// Per-frame ERLE. A frame is active when its mean y energy is at least
// activity_threshold_db relative to the mean y energy of the whole signal;
// mean_db averages the active frames. A trailing partial frame is kept.
absl::StatusOr<FramewiseErle> ErleFramewise(
    const ErleInput& input, double frame_ms = 20.0,
    double activity_threshold_db = -std::numeric_limits<double>::infinity(),
    double floor = kErleFloor);

// ---------------------------------------------------------------------------
// Correlation.

enum class CorrelationMethod { kPearson, kSpearman };

// Fractional ranks (1-based); tied values share the average of their ranks.
std::vector<double> AverageRanks(std::span<const double> values);

// Needs equal lengths >= 3 and non-constant inputs. Result is clamped to
// [-1, 1].
absl::StatusOr<double> Correlate(std::span<const double> x,
                                 std::span<const double> y,
                                 CorrelationMethod method);

// ---------------------------------------------------------------------------
// Vote aggregation.

struct VoteRecord {
  std::string worker_id;
  std::string clip_id;
  std::string condition_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  Scale scale = Scale::kOverall;
  int score = kMinScore;
  int64_t accepted_at = 0;  // unix seconds

  bool operator==(const VoteRecord&) const = default;
};

// Integer moments of a vote multiset. Merging is exact and associative, so
// any partition of the votes yields the same statistics.
struct VoteMoments {
  int64_t n = 0;
  int64_t sum = 0;
  int64_t sum_sq = 0;

  void Add(int score) {
    ++n;
    sum += score;
    sum_sq += static_cast<int64_t>(score) * score;
  }
  void Merge(const VoteMoments& other) {
    n += other.n;
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  double Mean() const { return static_cast<double>(sum) / n; }
  // Sample (n - 1) standard deviation; 0 for n < 2.
  double StdDev() const;
  // 1.96 * s / sqrt(n); 0 for n < 2.
  double Ci95() const;
};

struct ConditionScore {
  std::string condition_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  Scale scale = Scale::kOverall;
  double mean = 0.0;
  int64_t n_votes = 0;
  double stddev = 0.0;
  double ci95 = 0.0;
};

struct ClipScore {
  std::string clip_id;
  std::string condition_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  Scale scale = Scale::kOverall;
  double mean = 0.0;
  int64_t n_votes = 0;
};

// Key ordering used for every grouped output: condition, scenario, scale.
using ConditionKey = std::tuple<std::string, Scenario, Scale>;
using ClipKey = std::tuple<std::string, std::string, Scenario, Scale>;

// Streaming aggregator. Add() votes in any order or Merge() partial
// aggregators built over disjoint batches; the result is identical.
class VoteAggregator {
 public:
  void Add(const VoteRecord& vote);
  void Merge(const VoteAggregator& other);

  std::vector<ConditionScore> ConditionScores() const;
  std::vector<ClipScore> ClipScores() const;
  bool empty() const { return conditions_.empty(); }

 private:
  std::map<ConditionKey, VoteMoments> conditions_;
  std::map<ClipKey, VoteMoments> clips_;  // key: clip, condition, ...
};

struct Aggregation {
  // Pooled over all clips of a condition, sorted by ConditionKey.
  std::vector<ConditionScore> conditions;
  // Per-clip means, kept for diagnostics.
  std::vector<ClipScore> clips;
};

absl::StatusOr<Aggregation> AggregateConditions(
    std::span<const VoteRecord> votes);

}  // namespace aecmos

#endif  // AECMOS_METRICS_H_
