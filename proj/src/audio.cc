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

#include "aecmos/audio.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aecmos/status.h"

namespace aecmos {

absl::StatusOr<AudioBuffer> AudioBuffer::Create(
    int sample_rate, std::vector<std::vector<float>> channels) {
  if (sample_rate <= 0) {
    return MakeError(ErrorKind::kUnsupportedFormat,
                     "sample rate must be positive");
  }
  if (channels.empty() || channels.size() > 2) {
    return MakeError(ErrorKind::kUnsupportedFormat,
                     "expected 1 or 2 channels, got " +
                         std::to_string(channels.size()));
  }
  if (channels.size() == 2 && channels[0].size() != channels[1].size()) {
    return MakeError(ErrorKind::kLengthMismatch,
                     "stereo channels differ in length");
  }
  for (const auto& ch : channels) {
    for (float s : ch) {
      if (!std::isfinite(s)) {
        return MakeError(ErrorKind::kMalformedWav, "non-finite sample");
      }
    }
  }
  return AudioBuffer(sample_rate, std::move(channels));
}

AudioBuffer AudioBuffer::Mono(int sample_rate, std::vector<float> samples) {
  std::vector<std::vector<float>> channels;
  channels.push_back(std::move(samples));
  return AudioBuffer(sample_rate, std::move(channels));
}

AudioBuffer AudioBuffer::Zeros(int sample_rate, size_t frames) {
  return Mono(sample_rate, std::vector<float>(frames, 0.0f));
}

double AudioBuffer::Peak() const {
  double peak = 0.0;
  for (const auto& ch : channels_) {
    for (float s : ch) peak = std::max(peak, std::fabs(double{s}));
  }
  return peak;
}

size_t DelaySamples(double seconds, int sample_rate) {
  return static_cast<size_t>(std::llround(seconds * sample_rate));
}

absl::StatusOr<AudioBuffer> Delay(const AudioBuffer& buf, double seconds) {
  if (!buf.is_mono()) {
    return MakeError(ErrorKind::kNotMono, "delay expects a mono buffer");
  }
  if (!(seconds >= 0.0)) {
    return MakeError(ErrorKind::kOffsetOutOfRange,
                     "delay must be non-negative");
  }
  const size_t lead = DelaySamples(seconds, buf.sample_rate());
  std::vector<float> out(lead + buf.num_frames(), 0.0f);
  std::ranges::copy(buf.channel(0), out.begin() + lead);
  return AudioBuffer::Mono(buf.sample_rate(), std::move(out));
}

double NormalizePeak(std::span<float> samples) {
  double peak = 0.0;
  for (float s : samples) peak = std::max(peak, std::fabs(double{s}));
  if (peak <= 1.0) return 1.0;
  const double gain = 1.0 / peak;
  for (float& s : samples) {
    s = static_cast<float>(s * gain);
  }
  return gain;
}

absl::StatusOr<MixResult> Mix(const AudioBuffer& a, const AudioBuffer& b) {
  if (a.sample_rate() != b.sample_rate()) {
    return MakeError(ErrorKind::kSampleRateMismatch,
                     std::to_string(a.sample_rate()) + " vs " +
                         std::to_string(b.sample_rate()));
  }
  if (!a.is_mono() || !b.is_mono()) {
    return MakeError(ErrorKind::kNotMono, "mix expects mono inputs");
  }
  const size_t n = std::max(a.num_frames(), b.num_frames());
  // Sum in double so the peak test sees the exact sum of the two floats.
  std::vector<double> sum(n, 0.0);
  for (size_t i = 0; i < a.num_frames(); ++i) sum[i] += a.channel(0)[i];
  for (size_t i = 0; i < b.num_frames(); ++i) sum[i] += b.channel(0)[i];
  double peak = 0.0;
  for (double s : sum) peak = std::max(peak, std::fabs(s));
  MixResult result;
  result.applied_gain = peak > 1.0 ? 1.0 / peak : 1.0;
  std::vector<float> out(n);
  for (size_t i = 0; i < n; ++i) {
    float v = static_cast<float>(sum[i] * result.applied_gain);
    out[i] = std::clamp(v, -1.0f, 1.0f);
  }
  result.audio = AudioBuffer::Mono(a.sample_rate(), std::move(out));
  return result;
}

absl::StatusOr<AudioBuffer> InterleaveStereo(const AudioBuffer& left,
                                             const AudioBuffer& right) {
  if (left.sample_rate() != right.sample_rate()) {
    return MakeError(ErrorKind::kSampleRateMismatch,
                     std::to_string(left.sample_rate()) + " vs " +
                         std::to_string(right.sample_rate()));
  }
  if (!left.is_mono() || !right.is_mono()) {
    return MakeError(ErrorKind::kNotMono, "stereo assembly expects mono inputs");
  }
  const size_t n = std::max(left.num_frames(), right.num_frames());
  std::vector<std::vector<float>> channels(2, std::vector<float>(n, 0.0f));
  std::ranges::copy(left.channel(0), channels[0].begin());
  std::ranges::copy(right.channel(0), channels[1].begin());
  return AudioBuffer::Create(left.sample_rate(), std::move(channels));
}

AudioBuffer ExtractChannel(const AudioBuffer& buf, size_t channel) {
  std::span<const float> ch = buf.channel(channel);
  return AudioBuffer::Mono(buf.sample_rate(),
                           std::vector<float>(ch.begin(), ch.end()));
}

}  // namespace aecmos
