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

#include "aecmos/scales.h"

#include <array>

namespace aecmos {

namespace {

constexpr std::array<std::string_view, kScalePoints> kAcrLabels = {
    "Bad", "Poor", "Fair", "Good", "Excellent"};

constexpr std::array<std::string_view, kScalePoints> kDcrLabels = {
    "Very annoying", "Annoying", "Slightly annoying",
    "Perceptible but not annoying", "Imperceptible"};

const std::array<std::string_view, kScalePoints>& Labels(Scale scale) {
  return scale == Scale::kOverall ? kAcrLabels : kDcrLabels;
}

}  // namespace

std::string_view ScenarioToken(Scenario scenario) {
  switch (scenario) {
    case Scenario::kNearEndSingleTalk:
      return "ne_st";
    case Scenario::kFarEndSingleTalk:
      return "fe_st";
    case Scenario::kDoubleTalk:
      return "dt";
  }
  return "";
}

std::optional<Scenario> ParseScenario(std::string_view token) {
  if (token == "ne_st") return Scenario::kNearEndSingleTalk;
  if (token == "fe_st") return Scenario::kFarEndSingleTalk;
  if (token == "dt") return Scenario::kDoubleTalk;
  return std::nullopt;
}

std::string_view ScaleToken(Scale scale) {
  switch (scale) {
    case Scale::kOverall:
      return "overall";
    case Scale::kEcho:
      return "echo";
    case Scale::kOther:
      return "other";
  }
  return "";
}

std::optional<Scale> ParseScale(std::string_view token) {
  if (token == "overall") return Scale::kOverall;
  if (token == "echo") return Scale::kEcho;
  if (token == "other") return Scale::kOther;
  return std::nullopt;
}

bool IsValidScore(int score) {
  return score >= kMinScore && score <= kMaxScore;
}

std::string_view ScoreLabel(Scale scale, int score) {
  if (!IsValidScore(score)) return "";
  return Labels(scale)[score - kMinScore];
}

std::optional<int> ScoreFromLabel(Scale scale, std::string_view label) {
  const auto& labels = Labels(scale);
  for (int i = 0; i < kScalePoints; ++i) {
    if (labels[i] == label) return i + kMinScore;
  }
  return std::nullopt;
}

std::string_view QuestionText(Scenario scenario, Scale scale) {
  if (scale == Scale::kOverall) {
    return "How would you rate the overall quality of this speech sample?";
  }
  if (scenario == Scenario::kDoubleTalk) {
    return scale == Scale::kEcho
               ? "How would you judge the degradation from the echo of "
                 "Person 1's voice?"
               : "How would you judge degradations (missing audio, "
                 "distortions, cut-outs) of Person 2's voice?";
  }
  return scale == Scale::kEcho
             ? "How would you rate the degradation from acoustic echo in "
               "this speech sample?"
             : "How would you judge other degradations (noise, distortions, "
               "etc.) of this speech sample?";
}

std::vector<Scale> ScenarioScales(Scenario scenario, QuestionLayout layout) {
  if (scenario == Scenario::kNearEndSingleTalk) return {Scale::kOverall};
  if (layout == QuestionLayout::kSingleQuestion) return {Scale::kEcho};
  return {Scale::kEcho, Scale::kOther};
}

}  // namespace aecmos
