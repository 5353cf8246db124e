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

#ifndef AECMOS_ANALYSIS_H_
#define AECMOS_ANALYSIS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "aecmos/metrics.h"

namespace aecmos {

// ---------------------------------------------------------------------------
// Challenge ranking.

struct RankingRow {
  std::string model_id;
  double st_ne_mos = 0.0;
  double st_fe_echo_dmos = 0.0;
  double dt_echo_dmos = 0.0;
  double dt_other_dmos = 0.0;
  double overall = 0.0;  // unweighted mean of the four columns above
};

struct IncompleteModel {
  std::string model_id;
  std::vector<std::string> missing;  // column names
};

struct RankingTable {
  // Descending by overall; ties keep first-appearance order of the models.
  std::vector<RankingRow> rows;
  // Models lacking one or more of the four metrics, in first-appearance
  // order. They are listed here instead of being ranked.
  std::vector<IncompleteModel> incomplete;
};

// Builds the table from condition scores whose condition_id is the model id.
// Columns: (ne_st, overall), (fe_st, echo), (dt, echo), (dt, other).
RankingTable ChallengeTable(std::span<const ConditionScore> scores);

std::string RankingCsv(const RankingTable& table);
// Aligned plain-text rendering with an incomplete-models footer.
std::string RankingText(const RankingTable& table);

// ---------------------------------------------------------------------------
// Correlation reports.

struct CorrelationReport {
  std::string name;
  size_t n = 0;
  double pcc = 0.0;
  double srcc = 0.0;
  // Keys present on only one side of the join.
  size_t excluded_x = 0;
  size_t excluded_y = 0;
};

// Inner-joins two keyed series and correlates the matched pairs.
absl::StatusOr<CorrelationReport> CorrelateKeyed(
    std::string name, const std::map<std::string, double>& x,
    const std::map<std::string, double>& y);

struct ObjectiveScore {
  std::string clip_id;
  std::string metric_name;
  double value = 0.0;
};

// Clip-level mode: per-clip subjective means on `scale` against per-clip
// values of `metric`.
absl::StatusOr<CorrelationReport> SubjectiveObjectiveCorrelation(
    std::span<const ClipScore> subjective, Scale scale,
    std::span<const ObjectiveScore> objective, const std::string& metric);

// Condition-level mode: condition means on `scale` against the per-condition
// mean of the objective metric (clips mapped to conditions through the
// subjective clip scores).
absl::StatusOr<CorrelationReport> ConditionObjectiveCorrelation(
    std::span<const ClipScore> subjective,
    std::span<const ConditionScore> conditions, Scale scale,
    std::span<const ObjectiveScore> objective, const std::string& metric);

// One report per subset label plus one named "all". Keys without a label
// join only "all". Subsets with fewer than 3 pairs are skipped.
absl::StatusOr<std::vector<CorrelationReport>> SubsetCorrelations(
    const std::map<std::string, double>& x,
    const std::map<std::string, double>& y,
    const std::map<std::string, std::string>& subset_of);

// ---------------------------------------------------------------------------
// Run-to-run reproducibility.

struct RunPair {
  size_t a = 0;
  size_t b = 0;
  CorrelationReport report;
};

struct ReproducibilityReport {
  // All unordered pairs a < b.
  std::vector<RunPair> pairs;
  size_t runs = 0;
  size_t conditions = 0;

  // Symmetric lookup: Pair(i, j) == Pair(j, i).
  const CorrelationReport& Pair(size_t i, size_t j) const;
};

// Correlates condition-mean vectors for every pair of runs, aligned by
// (condition, scenario, scale). With `scale` set only that scale is used.
// Every run must cover the same conditions.
absl::StatusOr<ReproducibilityReport> CrossRunReproducibility(
    std::span<const std::vector<ConditionScore>> runs,
    std::optional<Scale> scale = std::nullopt);

std::string CorrelationCsv(std::span<const CorrelationReport> reports);

}  // namespace aecmos

#endif  // AECMOS_ANALYSIS_H_
