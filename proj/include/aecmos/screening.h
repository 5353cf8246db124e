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

#ifndef AECMOS_SCREENING_H_
#define AECMOS_SCREENING_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "aecmos/corpus.h"
#include "aecmos/metrics.h"
#include "aecmos/test_builder.h"

namespace aecmos {

struct ClipAnswer {
  std::string clip_id;
  Scale scale = Scale::kOverall;
  int score = kMinScore;
  bool playback_complete = true;
  double listen_duration_s = 0.0;
  bool operator==(const ClipAnswer&) const = default;
};

// One environment-check trial: which of the pair (0 or 1) the participant
// picked as the degraded sample.
struct EnvironmentTrial {
  int degraded = 0;
  int picked = 0;
  bool operator==(const EnvironmentTrial&) const = default;
};

struct Submission {
  std::string worker_id;
  std::string task_id;
  std::vector<ClipAnswer> answers;
  // Present only when the corresponding section was shown.
  std::optional<std::vector<std::string>> qualification_answers;
  std::optional<std::vector<int>> setup_picks;
  bool training_completed = false;
  Timestamp client_started{};
  Timestamp client_finished{};
  // Server receive time; stamped on the emitted votes.
  Timestamp submitted_at{};
  bool operator==(const Submission&) const = default;
};

enum class RejectReason {
  kTrappingFailed,
  kGoldOutOfTolerance,
  kHearingFailed,
  kEnvironmentFailed,
  kIncompletePlayback,
  kMissingAnswers,
};

std::string_view RejectReasonName(RejectReason reason);

struct Verdict {
  // Empty means accepted.
  std::vector<RejectReason> reasons;
  bool accepted() const { return reasons.empty(); }
  bool Has(RejectReason r) const;
};

struct ScreeningConfig {
  // Digit-triplet hearing test.
  std::vector<std::string> triplet_truth;
  double hearing_threshold = 0.8;
  // Environment check: index of the degraded sample per trial.
  std::vector<int> environment_truth;
  // Allowed wrong picks; the default of 1 means all-but-one must be right.
  int environment_allowed_misses = 1;
  // Overrides the gold tolerance of every gold clip when set.
  std::optional<int> gold_tolerance;
  // Answers listened to for less than this count as incomplete; 0 = off.
  double min_listen_s = 0.0;
  int ban_after_trapping_failures = 2;
};

struct HearingResult {
  bool passed = false;
  double fraction_correct = 0.0;
};

// A triplet is correct iff all three digits match; pass iff the fraction
// correct reaches `threshold`.
absl::StatusOr<HearingResult> ScoreDigitTriplet(
    std::span<const std::string> answers, std::span<const std::string> truth,
    double threshold = 0.8);

absl::StatusOr<bool> ScoreEnvironmentCheck(
    std::span<const EnvironmentTrial> trials, int allowed_misses = 1);

struct ScreeningResult {
  Verdict verdict;
  std::vector<VoteRecord> votes;
};

// Applies every gate to one submission. On acceptance emits one vote per
// rating clip and scale; trapping and gold answers never become votes.
absl::StatusOr<ScreeningResult> ScreenSubmission(const Submission& sub,
                                                 const TaskManifest& manifest,
                                                 const Corpus& corpus,
                                                 const ScreeningConfig& config);

struct SubmissionVerdict {
  std::string worker_id;
  std::string task_id;
  Verdict verdict;
};

struct ScreeningReport {
  // Sorted by (worker_id, task_id).
  std::vector<SubmissionVerdict> verdicts;
  std::map<RejectReason, int> reason_totals;
  int accepted = 0;
  int rejected = 0;
  // Workers at or over the trapping-failure limit.
  std::set<std::string> banned_workers;
  // Accepted votes, sorted by (worker, clip, scale).
  std::vector<VoteRecord> votes;
};

// Screens a batch. The result does not depend on submission order.
absl::StatusOr<ScreeningReport> ScreenCampaign(
    std::span<const Submission> submissions,
    std::span<const TaskManifest> manifests, const Corpus& corpus,
    const ScreeningConfig& config);

}  // namespace aecmos

#endif  // AECMOS_SCREENING_H_
