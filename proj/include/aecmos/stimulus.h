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

#ifndef AECMOS_STIMULUS_H_
#define AECMOS_STIMULUS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "aecmos/audio.h"
#include "aecmos/scales.h"

namespace aecmos {

inline constexpr double kDefaultEchoDelayS = 0.6;

// Only these playback rates are accepted for stimuli; there is no resampling.
bool IsSupportedStimulusRate(int sample_rate);

// Signals captured around the canceller under test. r_in is the far-end
// (loopback) signal, s_out the canceller's send output.
struct ScenarioInputs {
  std::string clip_id;
  std::string condition_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  AudioBuffer r_in;
  AudioBuffer s_out;
};

struct Stimulus {
  std::string id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  std::string condition_id;
  AudioBuffer audio;
  // Smallest gain applied to any channel; channel_gains holds each one.
  double applied_gain = 1.0;
  std::vector<double> channel_gains;
  double delay_ms = 0.0;
};

enum class Ear { kLeft, kRight };

// Near-end single talk: the send output as recorded.
absl::StatusOr<Stimulus> PrepareNearEndSingleTalk(const ScenarioInputs& in);

// Far-end single talk: r_in plus the send output delayed by delay_s, so the
// listener hears the echo of "their own" speech.
absl::StatusOr<Stimulus> PrepareFarEndSingleTalk(
    const ScenarioInputs& in, double delay_s = kDefaultEchoDelayS);

// Double talk: r_in in the loopback ear, the delayed send output in the
// other ear. Each channel is peak-normalized only if it clips.
absl::StatusOr<Stimulus> PrepareDoubleTalk(const ScenarioInputs& in,
                                           double delay_s = kDefaultEchoDelayS,
                                           Ear loopback_ear = Ear::kLeft);

// Dispatches on in.scenario.
absl::StatusOr<Stimulus> PrepareStimulus(const ScenarioInputs& in,
                                         double delay_s = kDefaultEchoDelayS,
                                         Ear loopback_ear = Ear::kLeft);

struct TrappingStimulus {
  Stimulus stimulus;
  ScaleAnswer expected_answer;
  // Label of expected_answer as announced by the prompt.
  std::string expected_label;
  double prompt_insert_offset_s = 0.0;
};

// Replaces [offset, offset + len(prompt)) of the base audio with the prompt
// (on every channel). Length is unchanged.
absl::StatusOr<TrappingStimulus> MakeTrappingStimulus(
    const Stimulus& base, const AudioBuffer& prompt,
    const ScaleAnswer& expected_answer, double insert_offset_s);

}  // namespace aecmos

#endif  // AECMOS_STIMULUS_H_
