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

#ifndef AECMOS_IO_H_
#define AECMOS_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aecmos/analysis.h"
#include "aecmos/metrics.h"
#include "aecmos/screening.h"
#include "aecmos/test_builder.h"
#include "json.hpp"

namespace aecmos {

using Json = nlohmann::json;

// Manifest documents use the field names task_id, scenario, clips[],
// trapping{clip_id, scale, expected}, gold[{clip_id, scale, expected,
// tolerance}], scales[], seed, pay_usd.
Json ManifestToJson(const TaskManifest& m);
absl::StatusOr<TaskManifest> ManifestFromJson(const Json& j);

// Line-delimited manifests, one object per line.
absl::Status WriteManifests(const std::filesystem::path& path,
                            std::span<const TaskManifest> manifests);
absl::StatusOr<std::vector<TaskManifest>> ReadManifests(
    const std::filesystem::path& path);

// Submission documents:
//   {worker_id, task_id,
//    answers: [{clip_id, scale, score, playback_complete, listen_duration_s}],
//    qualification?: [ "123", ... ], setup?: [0|1, ...],
//    training_completed?, client_started?, client_finished?, submitted_at?}
// Validation failures are SchemaInvalid.
Json SubmissionToJson(const Submission& s);
absl::StatusOr<Submission> SubmissionFromJson(const Json& j);

absl::Status WriteSubmissions(const std::filesystem::path& path,
                              std::span<const Submission> submissions);
absl::StatusOr<std::vector<Submission>> ReadSubmissions(
    const std::filesystem::path& path);

Json SessionToJson(const SessionState& s);
absl::StatusOr<SessionState> SessionFromJson(const Json& j);

// Accepted-votes CSV: worker_id,clip_id,condition,scenario,scale,score.
absl::Status WriteVotesCsv(const std::filesystem::path& path,
                           std::span<const VoteRecord> votes);
absl::StatusOr<std::vector<VoteRecord>> ReadVotesCsv(
    const std::filesystem::path& path);

// Objective scores CSV: clip_id,metric_name,value.
absl::StatusOr<std::vector<ObjectiveScore>> ReadObjectiveCsv(
    const std::filesystem::path& path);

std::string ConditionScoresCsv(std::span<const ConditionScore> scores);
Json ConditionScoresToJson(std::span<const ConditionScore> scores);
Json ScreeningReportToJson(const ScreeningReport& report);

absl::StatusOr<Json> ReadJsonFile(const std::filesystem::path& path);
absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view text);

}  // namespace aecmos

#endif  // AECMOS_IO_H_
