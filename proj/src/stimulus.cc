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

#include "aecmos/stimulus.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aecmos/status.h"

namespace aecmos {

namespace {

absl::Status CheckInputs(const ScenarioInputs& in, Scenario expected,
                         bool needs_r_in) {
  if (in.scenario != expected) {
    return MakeError(ErrorKind::kWrongScenario,
                     "inputs are for " +
                         std::string(ScenarioToken(in.scenario)) +
                         ", expected " + std::string(ScenarioToken(expected)));
  }
  if (!in.s_out.is_mono() || (needs_r_in && !in.r_in.is_mono())) {
    return MakeError(ErrorKind::kNotMono, "scenario inputs must be mono");
  }
  if (!IsSupportedStimulusRate(in.s_out.sample_rate())) {
    return MakeError(ErrorKind::kUnsupportedFormat,
                     "unsupported sample rate " +
                         std::to_string(in.s_out.sample_rate()));
  }
  if (needs_r_in && in.r_in.sample_rate() != in.s_out.sample_rate()) {
    return MakeError(ErrorKind::kSampleRateMismatch,
                     "r_in at " + std::to_string(in.r_in.sample_rate()) +
                         " Hz, s_out at " +
                         std::to_string(in.s_out.sample_rate()) + " Hz");
  }
  return absl::OkStatus();
}

Stimulus BaseStimulus(const ScenarioInputs& in) {
  Stimulus s;
  s.id = in.clip_id;
  s.scenario = in.scenario;
  s.condition_id = in.condition_id;
  return s;
}

}  // namespace

bool IsSupportedStimulusRate(int sample_rate) {
  return sample_rate == 16000 || sample_rate == 48000;
}

absl::StatusOr<Stimulus> PrepareNearEndSingleTalk(const ScenarioInputs& in) {
  AECMOS_RETURN_IF_ERROR(
      CheckInputs(in, Scenario::kNearEndSingleTalk, /*needs_r_in=*/false));
  Stimulus s = BaseStimulus(in);
  s.audio = in.s_out;
  s.channel_gains = {1.0};
  return s;
}

absl::StatusOr<Stimulus> PrepareFarEndSingleTalk(const ScenarioInputs& in,
                                                 double delay_s) {
  AECMOS_RETURN_IF_ERROR(
      CheckInputs(in, Scenario::kFarEndSingleTalk, /*needs_r_in=*/true));
  AECMOS_ASSIGN_OR_RETURN(AudioBuffer echo, Delay(in.s_out, delay_s));
  AECMOS_ASSIGN_OR_RETURN(MixResult mixed, Mix(in.r_in, echo));
  Stimulus s = BaseStimulus(in);
  s.audio = std::move(mixed.audio);
  s.applied_gain = mixed.applied_gain;
  s.channel_gains = {mixed.applied_gain};
  s.delay_ms = delay_s * 1000.0;
  return s;
}

absl::StatusOr<Stimulus> PrepareDoubleTalk(const ScenarioInputs& in,
                                           double delay_s, Ear loopback_ear) {
  AECMOS_RETURN_IF_ERROR(
      CheckInputs(in, Scenario::kDoubleTalk, /*needs_r_in=*/true));
  AECMOS_ASSIGN_OR_RETURN(AudioBuffer echo, Delay(in.s_out, delay_s));
  const bool left_is_loopback = loopback_ear == Ear::kLeft;
  AECMOS_ASSIGN_OR_RETURN(
      AudioBuffer stereo,
      InterleaveStereo(left_is_loopback ? in.r_in : echo,
                       left_is_loopback ? echo : in.r_in));
  Stimulus s = BaseStimulus(in);
  s.channel_gains = {NormalizePeak(stereo.mutable_channel(0)),
                     NormalizePeak(stereo.mutable_channel(1))};
  s.applied_gain = std::min(s.channel_gains[0], s.channel_gains[1]);
  s.audio = std::move(stereo);
  s.delay_ms = delay_s * 1000.0;
  return s;
}

absl::StatusOr<Stimulus> PrepareStimulus(const ScenarioInputs& in,
                                         double delay_s, Ear loopback_ear) {
  switch (in.scenario) {
    case Scenario::kNearEndSingleTalk:
      return PrepareNearEndSingleTalk(in);
    case Scenario::kFarEndSingleTalk:
      return PrepareFarEndSingleTalk(in, delay_s);
    case Scenario::kDoubleTalk:
      return PrepareDoubleTalk(in, delay_s, loopback_ear);
  }
  return MakeError(ErrorKind::kWrongScenario, "unknown scenario");
}

absl::StatusOr<TrappingStimulus> MakeTrappingStimulus(
    const Stimulus& base, const AudioBuffer& prompt,
    const ScaleAnswer& expected_answer, double insert_offset_s) {
  if (!IsValidScore(expected_answer.score)) {
    return MakeError(ErrorKind::kSchemaInvalid,
                     "expected answer is not a point on the scale");
  }
  if (prompt.sample_rate() != base.audio.sample_rate()) {
    return MakeError(ErrorKind::kSampleRateMismatch,
                     "prompt and base clip rates differ");
  }
  if (!prompt.is_mono()) {
    return MakeError(ErrorKind::kNotMono, "prompt must be mono");
  }
  const size_t frames = base.audio.num_frames();
  if (!(insert_offset_s >= 0.0) || insert_offset_s > base.audio.duration_s()) {
    return MakeError(ErrorKind::kOffsetOutOfRange,
                     "offset outside the base clip");
  }
  const size_t offset = DelaySamples(insert_offset_s, base.audio.sample_rate());
  if (offset > frames || prompt.num_frames() > frames - offset) {
    return MakeError(ErrorKind::kPromptTooLong,
                     "prompt does not fit after the offset");
  }
  TrappingStimulus trap;
  trap.stimulus = base;
  for (size_t c = 0; c < trap.stimulus.audio.num_channels(); ++c) {
    std::ranges::copy(prompt.channel(0),
                      trap.stimulus.audio.mutable_channel(c).begin() + offset);
  }
  trap.expected_answer = expected_answer;
  trap.expected_label = std::string(expected_answer.label());
  trap.prompt_insert_offset_s = insert_offset_s;
  return trap;
}

}  // namespace aecmos
