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

#ifndef AECMOS_STATUS_H_
#define AECMOS_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"

namespace aecmos {

// Every failure returned by this library carries one of these kinds as a
// status payload, so callers can branch on the precise condition while the
// canonical absl code stays meaningful for logging.
enum class ErrorKind {
  kMalformedWav,
  kUnsupportedFormat,
  kNotMono,
  kSampleRateMismatch,
  kWrongScenario,
  kPromptTooLong,
  kOffsetOutOfRange,
  kLengthMismatch,
  kEmptySignal,
  kDegenerateInput,
  kEmptyGroup,
  kInsufficientTrappingPool,
  kEmptyCorpus,
  kCountMismatch,
  kNoTrials,
  kManifestMismatch,
  kTooFewPairs,
  kConditionMismatch,
  kMissingTruth,
  kNoTasksAvailable,
  kWorkerBanned,
  kSchemaInvalid,
  kLeaseExpired,
  kNotFound,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the kind attached by MakeError, or nullopt for OK or foreign
// statuses.
std::optional<ErrorKind> KindOf(const absl::Status& status);

inline bool IsKind(const absl::Status& status, ErrorKind kind) {
  return KindOf(status) == kind;
}

}  // namespace aecmos

#define AECMOS_RETURN_IF_ERROR(expr)    \
  do {                                  \
    const absl::Status _st = (expr);    \
    if (!_st.ok()) return _st;          \
  } while (0)

#define AECMOS_CONCAT_INNER(a, b) a##b
#define AECMOS_CONCAT(a, b) AECMOS_CONCAT_INNER(a, b)
#define AECMOS_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                                 \
  if (!tmp.ok()) return tmp.status();                \
  lhs = std::move(*tmp)
#define AECMOS_ASSIGN_OR_RETURN(lhs, expr) \
  AECMOS_ASSIGN_OR_RETURN_IMPL(AECMOS_CONCAT(_statusor_, __LINE__), lhs, expr)

#endif  // AECMOS_STATUS_H_
