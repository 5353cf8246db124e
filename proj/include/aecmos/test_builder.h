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

#ifndef AECMOS_TEST_BUILDER_H_
#define AECMOS_TEST_BUILDER_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "aecmos/scales.h"

namespace aecmos {

using Timestamp = std::chrono::sys_seconds;

struct TrappingDef {
  std::string clip_id;
  ScaleAnswer expected;
  bool operator==(const TrappingDef&) const = default;
};

struct GoldDef {
  std::string clip_id;
  ScaleAnswer expected;
  int tolerance = 1;
  bool operator==(const GoldDef&) const = default;
};

struct SectionFlags {
  bool qualification = true;
  bool setup = true;
  bool training = true;
  bool operator==(const SectionFlags&) const = default;
};

// One crowdsourcing task. `clips` is the presentation order and contains the
// rating clips plus exactly one trapping clip and the gold clips.
struct TaskManifest {
  std::string task_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  std::vector<std::string> clips;
  TrappingDef trapping;
  std::vector<GoldDef> gold;
  std::vector<Scale> scales;
  SectionFlags section_flags;
  uint64_t seed = 0;
  double pay_usd = 0.0;

  size_t TrappingPosition() const;
  bool IsTrapping(const std::string& clip_id) const {
    return clip_id == trapping.clip_id;
  }
  const GoldDef* FindGold(const std::string& clip_id) const;
  // Clips that produce votes: everything but trapping and gold.
  std::vector<std::string> RatingClips() const;

  bool operator==(const TaskManifest&) const = default;
};

// Rating clips per task: 10 for single talk, 12 for double talk.
size_t DefaultTaskSize(Scenario scenario);
double DefaultPayUsd(Scenario scenario);

struct BuildConfig {
  Scenario scenario = Scenario::kNearEndSingleTalk;
  size_t votes_target = 10;
  // Rating clips per task; 0 selects DefaultTaskSize(scenario).
  size_t task_size = 0;
  size_t gold_per_task = 1;
  QuestionLayout layout = QuestionLayout::kTwoQuestion;
  std::optional<double> pay_usd;
  std::string task_id_prefix = "task";
};

// Assigns every stimulus to at least votes_target distinct tasks. Rating
// clips are dealt from votes_target concatenated seeded permutations of the
// corpus; a clip that would repeat inside a task is deferred to the next one.
// Gold clips go to uniform positions, then the trapping clip to a uniform
// position other than the first. Output depends only on the arguments.
absl::StatusOr<std::vector<TaskManifest>> BuildTasks(
    std::span<const std::string> stimuli,
    std::span<const TrappingDef> trapping_pool,
    std::span<const GoldDef> gold_pool, const BuildConfig& config,
    uint64_t seed);

// Uniform permutation of `scales` determined by task_seed.
std::vector<Scale> RandomizeScaleOrder(std::vector<Scale> scales,
                                       uint64_t task_seed);

struct SessionState {
  std::string worker_id;
  std::optional<Timestamp> qualification_passed;
  std::optional<Timestamp> last_setup_pass;
  std::optional<Timestamp> last_training_pass;
  bool operator==(const SessionState&) const = default;
};

struct SectionConfig {
  std::chrono::seconds setup_period = std::chrono::minutes(30);
  std::chrono::seconds training_period = std::chrono::minutes(60);
};

// Qualification until first passed; setup and training again once their
// period has elapsed (boundary inclusive).
SectionFlags ScheduleSections(const SessionState& state, Timestamp now,
                              const SectionConfig& config);

}  // namespace aecmos

#endif  // AECMOS_TEST_BUILDER_H_
