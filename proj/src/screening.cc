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

#include "aecmos/screening.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <tuple>

#include "aecmos/status.h"

namespace aecmos {

namespace {

bool IsTriplet(const std::string& s) {
  return s.size() == 3 && std::ranges::all_of(s, [](unsigned char c) {
           return std::isdigit(c) != 0;
         });
}

}  // namespace

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kTrappingFailed:
      return "TrappingFailed";
    case RejectReason::kGoldOutOfTolerance:
      return "GoldOutOfTolerance";
    case RejectReason::kHearingFailed:
      return "HearingFailed";
    case RejectReason::kEnvironmentFailed:
      return "EnvironmentFailed";
    case RejectReason::kIncompletePlayback:
      return "IncompletePlayback";
    case RejectReason::kMissingAnswers:
      return "MissingAnswers";
  }
  return "";
}

bool Verdict::Has(RejectReason r) const {
  return std::ranges::find(reasons, r) != reasons.end();
}

absl::StatusOr<HearingResult> ScoreDigitTriplet(
    std::span<const std::string> answers, std::span<const std::string> truth,
    double threshold) {
  if (answers.size() != truth.size()) {
    return MakeError(ErrorKind::kCountMismatch,
                     std::to_string(answers.size()) + " answers for " +
                         std::to_string(truth.size()) + " triplets");
  }
  if (truth.empty()) {
    return MakeError(ErrorKind::kNoTrials, "no digit triplets");
  }
  size_t correct = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    if (!IsTriplet(truth[i])) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "reference '" + truth[i] + "' is not a digit triplet");
    }
    if (answers[i] == truth[i]) ++correct;
  }
  HearingResult r;
  r.fraction_correct =
      static_cast<double>(correct) / static_cast<double>(truth.size());
  r.passed = r.fraction_correct >= threshold;
  return r;
}

absl::StatusOr<bool> ScoreEnvironmentCheck(
    std::span<const EnvironmentTrial> trials, int allowed_misses) {
  if (trials.empty()) {
    return MakeError(ErrorKind::kNoTrials, "no environment-check trials");
  }
  const auto correct = std::ranges::count_if(
      trials, [](const EnvironmentTrial& t) { return t.picked == t.degraded; });
  const auto n = static_cast<std::ptrdiff_t>(trials.size());
  const std::ptrdiff_t required =
      std::max<std::ptrdiff_t>(1, n - std::max(0, allowed_misses));
  return correct >= required;
}

absl::StatusOr<ScreeningResult> ScreenSubmission(
    const Submission& sub, const TaskManifest& manifest, const Corpus& corpus,
    const ScreeningConfig& config) {
  if (sub.task_id != manifest.task_id) {
    return MakeError(ErrorKind::kManifestMismatch,
                     "submission for " + sub.task_id + ", manifest " +
                         manifest.task_id);
  }
  const std::set<std::string> in_task(manifest.clips.begin(),
                                      manifest.clips.end());
  std::map<std::pair<std::string, Scale>, const ClipAnswer*> by_slot;
  for (const ClipAnswer& a : sub.answers) {
    if (!in_task.contains(a.clip_id)) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "answer for clip " + a.clip_id + " not in task " +
                           manifest.task_id);
    }
    if (!IsValidScore(a.score)) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "score " + std::to_string(a.score) + " outside 1..5");
    }
    if (std::ranges::find(manifest.scales, a.scale) == manifest.scales.end()) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "scale " + std::string(ScaleToken(a.scale)) +
                           " not used by task " + manifest.task_id);
    }
    if (!by_slot.emplace(std::pair{a.clip_id, a.scale}, &a).second) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "duplicate answer for " + a.clip_id);
    }
  }
  const auto answer = [&](const std::string& clip,
                          Scale scale) -> const ClipAnswer* {
    auto it = by_slot.find({clip, scale});
    return it == by_slot.end() ? nullptr : it->second;
  };

  ScreeningResult result;
  auto& reasons = result.verdict.reasons;
  const auto reject = [&](RejectReason r) {
    if (!result.verdict.Has(r)) reasons.push_back(r);
  };

  // Completeness: every rating clip on every scale, trapping and gold on
  // their designated scale.
  const std::vector<std::string> rating = manifest.RatingClips();
  for (const std::string& clip : rating) {
    for (Scale s : manifest.scales) {
      if (answer(clip, s) == nullptr) reject(RejectReason::kMissingAnswers);
    }
  }

  if (const ClipAnswer* a = answer(manifest.trapping.clip_id,
                                   manifest.trapping.expected.scale)) {
    if (a->score != manifest.trapping.expected.score) {
      reject(RejectReason::kTrappingFailed);
    }
  } else {
    reject(RejectReason::kMissingAnswers);
  }

  for (const GoldDef& g : manifest.gold) {
    const int tolerance = config.gold_tolerance.value_or(g.tolerance);
    if (const ClipAnswer* a = answer(g.clip_id, g.expected.scale)) {
      if (std::abs(a->score - g.expected.score) > tolerance) {
        reject(RejectReason::kGoldOutOfTolerance);
      }
    } else {
      reject(RejectReason::kMissingAnswers);
    }
  }

  if (sub.qualification_answers.has_value()) {
    auto hearing = ScoreDigitTriplet(*sub.qualification_answers,
                                     config.triplet_truth,
                                     config.hearing_threshold);
    if (!hearing.ok() || !hearing->passed) reject(RejectReason::kHearingFailed);
  }

  if (sub.setup_picks.has_value()) {
    bool passed = false;
    if (sub.setup_picks->size() == config.environment_truth.size()) {
      std::vector<EnvironmentTrial> trials;
      for (size_t i = 0; i < config.environment_truth.size(); ++i) {
        trials.push_back({config.environment_truth[i], (*sub.setup_picks)[i]});
      }
      auto env =
          ScoreEnvironmentCheck(trials, config.environment_allowed_misses);
      passed = env.ok() && *env;
    }
    if (!passed) reject(RejectReason::kEnvironmentFailed);
  }

  for (const ClipAnswer& a : sub.answers) {
    if (!a.playback_complete ||
        (config.min_listen_s > 0.0 && a.listen_duration_s < config.min_listen_s)) {
      reject(RejectReason::kIncompletePlayback);
    }
  }

  std::ranges::sort(reasons);
  if (!result.verdict.accepted()) return result;

  for (const std::string& clip : rating) {
    const CorpusClip* info = corpus.Find(clip);
    if (info == nullptr) {
      return MakeError(ErrorKind::kNotFound,
                       "clip " + clip + " missing from the corpus");
    }
    for (Scale s : manifest.scales) {
      const ClipAnswer* a = answer(clip, s);
      result.votes.push_back({sub.worker_id, clip, info->condition_id,
                              info->scenario, s, a->score,
                              sub.submitted_at.time_since_epoch().count()});
    }
  }
  return result;
}

absl::StatusOr<ScreeningReport> ScreenCampaign(
    std::span<const Submission> submissions,
    std::span<const TaskManifest> manifests, const Corpus& corpus,
    const ScreeningConfig& config) {
  std::map<std::string, const TaskManifest*> by_task;
  for (const TaskManifest& m : manifests) by_task[m.task_id] = &m;

  std::vector<const Submission*> ordered;
  ordered.reserve(submissions.size());
  for (const Submission& s : submissions) ordered.push_back(&s);
  std::ranges::sort(ordered, [](const Submission* a, const Submission* b) {
    return std::tie(a->worker_id, a->task_id) <
           std::tie(b->worker_id, b->task_id);
  });

  ScreeningReport report;
  std::map<std::string, int> trapping_failures;
  for (const Submission* sub : ordered) {
    auto it = by_task.find(sub->task_id);
    if (it == by_task.end()) {
      return MakeError(ErrorKind::kManifestMismatch,
                       "no manifest for task " + sub->task_id);
    }
    AECMOS_ASSIGN_OR_RETURN(ScreeningResult r,
                            ScreenSubmission(*sub, *it->second, corpus, config));
    for (RejectReason reason : r.verdict.reasons) ++report.reason_totals[reason];
    if (r.verdict.Has(RejectReason::kTrappingFailed)) {
      ++trapping_failures[sub->worker_id];
    }
    if (r.verdict.accepted()) {
      ++report.accepted;
    } else {
      ++report.rejected;
    }
    report.votes.insert(report.votes.end(), r.votes.begin(), r.votes.end());
    report.verdicts.push_back(
        {sub->worker_id, sub->task_id, std::move(r.verdict)});
  }
  for (const auto& [worker, failures] : trapping_failures) {
    if (failures >= config.ban_after_trapping_failures) {
      report.banned_workers.insert(worker);
    }
  }
  std::ranges::sort(report.votes, [](const VoteRecord& a, const VoteRecord& b) {
    return std::tie(a.worker_id, a.clip_id, a.scale, a.score, a.accepted_at) <
           std::tie(b.worker_id, b.clip_id, b.scale, b.score, b.accepted_at);
  });
  return report;
}

}  // namespace aecmos
