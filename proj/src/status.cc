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

#include "aecmos/status.h"

#include <string>

#include "absl/strings/cord.h"

namespace aecmos {

namespace {

constexpr std::string_view kPayloadUrl = "aecmos/error-kind";

struct KindEntry {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr KindEntry kKinds[] = {
    {ErrorKind::kMalformedWav, "MalformedWav", absl::StatusCode::kDataLoss},
    {ErrorKind::kUnsupportedFormat, "UnsupportedFormat",
     absl::StatusCode::kUnimplemented},
    {ErrorKind::kNotMono, "NotMono", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kSampleRateMismatch, "SampleRateMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kWrongScenario, "WrongScenario",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kPromptTooLong, "PromptTooLong",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kOffsetOutOfRange, "OffsetOutOfRange",
     absl::StatusCode::kOutOfRange},
    {ErrorKind::kLengthMismatch, "LengthMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kEmptySignal, "EmptySignal",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kDegenerateInput, "DegenerateInput",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kEmptyGroup, "EmptyGroup", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kInsufficientTrappingPool, "InsufficientTrappingPool",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kEmptyCorpus, "EmptyCorpus",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kCountMismatch, "CountMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kNoTrials, "NoTrials", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kManifestMismatch, "ManifestMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kTooFewPairs, "TooFewPairs",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kConditionMismatch, "ConditionMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kMissingTruth, "MissingTruth",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kNoTasksAvailable, "NoTasksAvailable",
     absl::StatusCode::kResourceExhausted},
    {ErrorKind::kWorkerBanned, "WorkerBanned",
     absl::StatusCode::kPermissionDenied},
    {ErrorKind::kSchemaInvalid, "SchemaInvalid",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kLeaseExpired, "LeaseExpired",
     absl::StatusCode::kDeadlineExceeded},
    {ErrorKind::kNotFound, "NotFound", absl::StatusCode::kNotFound},
    {ErrorKind::kIo, "Io", absl::StatusCode::kUnavailable},
};

const KindEntry& Entry(ErrorKind kind) {
  for (const KindEntry& e : kKinds) {
    if (e.kind == kind) return e;
  }
  return kKinds[0];
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Entry(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindEntry& e = Entry(kind);
  absl::Status status(e.code,
                      std::string(e.name) + ": " + std::string(message));
  status.SetPayload(std::string(kPayloadUrl), absl::Cord(std::string(e.name)));
  return status;
}

std::optional<ErrorKind> KindOf(const absl::Status& status) {
  if (status.ok()) return std::nullopt;
  auto payload = status.GetPayload(std::string(kPayloadUrl));
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const KindEntry& e : kKinds) {
    if (e.name == name) return e.kind;
  }
  return std::nullopt;
}

}  // namespace aecmos
