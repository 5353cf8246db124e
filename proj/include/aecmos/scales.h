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

#ifndef AECMOS_SCALES_H_
#define AECMOS_SCALES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aecmos {

enum class Scenario { kNearEndSingleTalk, kFarEndSingleTalk, kDoubleTalk };

// Rating dimensions. kOverall is the 5-point ACR quality scale (MOS); kEcho
// and kOther use the 5-point degradation category scale (DMOS).
enum class Scale { kOverall, kEcho, kOther };

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;
inline constexpr int kScalePoints = kMaxScore - kMinScore + 1;

// Short tokens used in files and on the wire: ne_st / fe_st / dt and
// overall / echo / other.
std::string_view ScenarioToken(Scenario scenario);
std::optional<Scenario> ParseScenario(std::string_view token);
std::string_view ScaleToken(Scale scale);
std::optional<Scale> ParseScale(std::string_view token);

bool IsValidScore(int score);

// Category label of a score on the given scale, e.g. (kEcho, 1) ->
// "Very annoying", (kOverall, 5) -> "Excellent".
std::string_view ScoreLabel(Scale scale, int score);
std::optional<int> ScoreFromLabel(Scale scale, std::string_view label);

// Question shown to raters for a scale in a scenario.
std::string_view QuestionText(Scenario scenario, Scale scale);

// Two-question layout separates echo from other degradations; the
// single-question layout asks about echo only.
enum class QuestionLayout { kTwoQuestion, kSingleQuestion };

std::vector<Scale> ScenarioScales(
    Scenario scenario, QuestionLayout layout = QuestionLayout::kTwoQuestion);

// A specific point on a specific scale, e.g. the answer a trapping prompt
// announces.
struct ScaleAnswer {
  Scale scale = Scale::kOverall;
  int score = kMinScore;

  std::string_view label() const { return ScoreLabel(scale, score); }
  bool operator==(const ScaleAnswer&) const = default;
};

}  // namespace aecmos

#endif  // AECMOS_SCALES_H_
