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

#include <algorithm>
#include <cmath>

#include "aecmos/rng.h"
#include "aecmos/status.h"

namespace aecmos {

std::vector<std::pair<std::string, RaterProfile>> ExpandPopulation(
    std::span<const PopulationGroup> groups) {
  std::vector<std::pair<std::string, RaterProfile>> out;
  for (const PopulationGroup& g : groups) {
    for (int i = 0; i < g.count; ++i) {
      out.emplace_back(g.id_prefix + std::to_string(i), g.profile);
    }
  }
  return out;
}

int SimulatedVote(double truth, const RaterProfile& profile, SplitMix64& rng) {
  const double noisy = truth + profile.bias + profile.noise_sd * rng.Normal();
  const double rounded = std::round(noisy);
  return static_cast<int>(std::clamp(rounded, double{kMinScore},
                                     double{kMaxScore}));
}

namespace {

int UniformScore(SplitMix64& rng) {
  return kMinScore + static_cast<int>(rng.Below(kScalePoints));
}

int UniformWrongScore(int correct, SplitMix64& rng) {
  const int pick = kMinScore + static_cast<int>(rng.Below(kScalePoints - 1));
  return pick >= correct ? pick + 1 : pick;
}

}  // namespace

absl::StatusOr<std::vector<Submission>> SimulateRun(
    std::span<const TaskManifest> manifests,
    std::span<const std::pair<std::string, RaterProfile>> population,
    const GroundTruth& truth, uint64_t seed,
    const SimulationOptions& options) {
  if (population.empty()) {
    return MakeError(ErrorKind::kEmptyGroup, "empty rater population");
  }
  for (const TaskManifest& m : manifests) {
    for (const std::string& clip : m.RatingClips()) {
      for (Scale s : m.scales) {
        if (truth.Find(clip, s) == nullptr) {
          return MakeError(ErrorKind::kMissingTruth,
                           "no truth for " + clip + "/" +
                               std::string(ScaleToken(s)));
        }
      }
    }
  }

  SplitMix64 rng(seed);
  std::vector<Submission> out;
  out.reserve(manifests.size());
  for (const TaskManifest& m : manifests) {
    const auto& [worker, profile] = population[rng.Below(population.size())];
    const bool spammer = profile.kind == RaterKind::kSpammer;
    Submission sub;
    sub.worker_id = worker;
    sub.task_id = m.task_id;
    sub.submitted_at = options.submitted_at;
    sub.client_started = options.submitted_at;
    sub.client_finished = options.submitted_at;
    const double listen = spammer ? 0.0 : options.listen_duration_s;

    for (const std::string& clip : m.clips) {
      const GoldDef* gold = m.FindGold(clip);
      for (Scale s : m.scales) {
        int score = 0;
        if (m.IsTrapping(clip)) {
          const int correct = m.trapping.expected.score;
          if (s != m.trapping.expected.scale) {
            score = UniformScore(rng);
          } else if (rng.Bernoulli(profile.attention_p)) {
            score = correct;
          } else {
            score = UniformWrongScore(correct, rng);
          }
        } else if (spammer) {
          score = UniformScore(rng);
        } else if (gold != nullptr && gold->expected.scale == s) {
          score = SimulatedVote(gold->expected.score, profile, rng);
        } else if (const double* t = truth.Find(clip, s)) {
          score = SimulatedVote(*t, profile, rng);
        } else {
          // Gold clip on a scale it does not define.
          score = UniformScore(rng);
        }
        sub.answers.push_back({clip, s, score, true, listen});
      }
    }
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace aecmos
