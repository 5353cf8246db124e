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

#ifndef AECMOS_AUDIO_H_
#define AECMOS_AUDIO_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace aecmos {

// Sampled audio, one or two channels of equal length, amplitudes nominally
// in [-1, 1]. Samples are stored planar (one vector per channel).
class AudioBuffer {
 public:
  AudioBuffer() = default;

  // Validates sample_rate > 0, 1..2 channels of equal length and finite
  // samples.
  static absl::StatusOr<AudioBuffer> Create(
      int sample_rate, std::vector<std::vector<float>> channels);

  static AudioBuffer Mono(int sample_rate, std::vector<float> samples);
  static AudioBuffer Zeros(int sample_rate, size_t frames);

  int sample_rate() const { return sample_rate_; }
  size_t num_channels() const { return channels_.size(); }
  size_t num_frames() const {
    return channels_.empty() ? 0 : channels_.front().size();
  }
  bool is_mono() const { return channels_.size() == 1; }
  double duration_s() const {
    return static_cast<double>(num_frames()) / sample_rate_;
  }

  std::span<const float> channel(size_t c) const { return channels_[c]; }
  std::span<float> mutable_channel(size_t c) { return channels_[c]; }

  // Largest absolute sample over all channels.
  double Peak() const;

  bool operator==(const AudioBuffer&) const = default;

 private:
  AudioBuffer(int sample_rate, std::vector<std::vector<float>> channels)
      : sample_rate_(sample_rate), channels_(std::move(channels)) {}

  int sample_rate_ = 0;
  std::vector<std::vector<float>> channels_;
};

// Number of samples a delay of `seconds` occupies: round-to-nearest of
// seconds * rate.
size_t DelaySamples(double seconds, int sample_rate);

// Prepends round(seconds * rate) zeros to a mono buffer.
absl::StatusOr<AudioBuffer> Delay(const AudioBuffer& buf, double seconds);

struct MixResult {
  AudioBuffer audio;
  // 1.0 unless the raw sum peaked above full scale, then 1 / peak.
  double applied_gain = 1.0;
};

// Sample-wise sum of two mono buffers; the shorter one is zero-padded. If the
// sum exceeds full scale the whole mix is rescaled by 1 / peak.
absl::StatusOr<MixResult> Mix(const AudioBuffer& a, const AudioBuffer& b);

// Rescales a single channel in place when its peak exceeds 1.0 and returns
// the gain applied.
double NormalizePeak(std::span<float> samples);

absl::StatusOr<AudioBuffer> InterleaveStereo(const AudioBuffer& left,
                                             const AudioBuffer& right);

// Copies one channel out as a mono buffer.
AudioBuffer ExtractChannel(const AudioBuffer& buf, size_t channel);

}  // namespace aecmos

#endif  // AECMOS_AUDIO_H_
