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

#ifndef AECMOS_WAV_H_
#define AECMOS_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aecmos/audio.h"

namespace aecmos {

enum class SampleFormat { kPcm16, kFloat32 };

// Parses a RIFF/WAVE image. Accepts linear PCM 16-bit and IEEE float 32-bit
// (plain or WAVE_FORMAT_EXTENSIBLE), one or two channels. 16-bit samples are
// scaled by 1/32768.
absl::StatusOr<AudioBuffer> DecodeWav(std::span<const uint8_t> bytes);
absl::StatusOr<AudioBuffer> ReadWav(const std::filesystem::path& path);

// 16-bit encoding rounds x * 32768 to nearest and saturates to int16.
std::vector<uint8_t> EncodeWav(const AudioBuffer& buf, SampleFormat format);
absl::Status WriteWav(const std::filesystem::path& path, const AudioBuffer& buf,
                      SampleFormat format);

absl::StatusOr<std::vector<uint8_t>> ReadFileBytes(
    const std::filesystem::path& path);

}  // namespace aecmos

#endif  // AECMOS_WAV_H_
