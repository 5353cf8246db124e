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

#ifndef AECMOS_RATER_SIM_H_
#define AECMOS_RATER_SIM_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "aecmos/rng.h"
#include "aecmos/screening.h"
#include "aecmos/test_builder.h"

namespace aecmos {

enum class RaterKind { kReliable, kSpammer, kBiased };

struct RaterProfile {
  RaterKind kind = RaterKind::kReliable;
  double noise_sd = 0.0;  // scale points
  double bias = 0.0;      // scale points
  // Probability of answering a trapping question correctly.
  double attention_p = 1.0;
};

struct PopulationGroup {
  RaterProfile profile;
  int count = 0;
  std::string id_prefix;
};

// Expands groups into named raters: "<prefix><index>".
std::vector<std::pair<std::string, RaterProfile>> ExpandPopulation(
    std::span<const PopulationGroup> groups);

// True score per (clip, scale), real-valued in [1, 5].
class GroundTruth {
 public:
  void Set(const std::string& clip_id, Scale scale, double score) {
    scores_[{clip_id, scale}] = score;
  }
  const double* Find(const std::string& clip_id, Scale scale) const {
    auto it = scores_.find({clip_id, scale});
    return it == scores_.end() ? nullptr : &it->second;
  }
  size_t size() const { return scores_.size(); }

 private:
  std::map<std::pair<std::string, Scale>, double> scores_;
};

// Vote of a reliable or biased rater: clamp(round(truth + bias + sd * z)).
int SimulatedVote(double truth, const RaterProfile& profile, SplitMix64& rng);

struct SimulationOptions {
  // Timestamp stamped on every generated submission.
  Timestamp submitted_at{};
  // Listening time of attentive raters; spammers report ~0 s.
  double listen_duration_s = 8.0;
};

// One submission per manifest, each answered by a rater drawn uniformly from
// the population. Reliable and biased raters vote around the truth (gold
// clips included) and answer the trapping question with probability
// attention_p. Spammers vote uniformly on every scale; with probability
// attention_p they give the trapping answer, otherwise a uniform wrong one.
absl::StatusOr<std::vector<Submission>> SimulateRun(
    std::span<const TaskManifest> manifests,
    std::span<const std::pair<std::string, RaterProfile>> population,
    const GroundTruth& truth, uint64_t seed,
    const SimulationOptions& options = {});

}  // namespace aecmos

#endif  // AECMOS_RATER_SIM_H_
