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

#include "aecmos/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "aecmos/status.h"

namespace aecmos {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t Le16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}
uint32_t Le32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void Put16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
void Put32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t block_align = 0;
  uint16_t bits_per_sample = 0;
};

absl::StatusOr<FmtChunk> ParseFmt(std::span<const uint8_t> body) {
  if (body.size() < 16) {
    return MakeError(ErrorKind::kMalformedWav, "fmt chunk shorter than 16");
  }
  FmtChunk fmt;
  fmt.format = Le16(&body[0]);
  fmt.channels = Le16(&body[2]);
  fmt.sample_rate = Le32(&body[4]);
  fmt.block_align = Le16(&body[12]);
  fmt.bits_per_sample = Le16(&body[14]);
  if (fmt.format == kFormatExtensible) {
    if (body.size() < 40) {
      return MakeError(ErrorKind::kMalformedWav,
                       "extensible fmt chunk shorter than 40");
    }
    // The first two bytes of the sub-format GUID carry the format tag.
    fmt.format = Le16(&body[24]);
  }
  return fmt;
}

}  // namespace

absl::StatusOr<AudioBuffer> DecodeWav(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    return MakeError(ErrorKind::kMalformedWav, "missing RIFF/WAVE header");
  }
  std::optional<FmtChunk> fmt;
  std::optional<std::span<const uint8_t>> data;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* head = bytes.data() + pos;
    const uint32_t size = Le32(head + 4);
    const size_t body_start = pos + 8;
    if (size > bytes.size() - body_start) {
      return MakeError(ErrorKind::kMalformedWav,
                       "chunk '" + std::string(head, head + 4) +
                           "' runs past end of file");
    }
    std::span<const uint8_t> body = bytes.subspan(body_start, size);
    if (std::memcmp(head, "fmt ", 4) == 0) {
      AECMOS_ASSIGN_OR_RETURN(fmt, ParseFmt(body));
    } else if (std::memcmp(head, "data", 4) == 0) {
      data = body;
    }
    pos = body_start + size + (size & 1u);
  }
  if (!fmt.has_value()) {
    return MakeError(ErrorKind::kMalformedWav, "no fmt chunk");
  }
  if (!data.has_value()) {
    return MakeError(ErrorKind::kMalformedWav, "no data chunk");
  }
  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits_per_sample == 16;
  const bool float32 =
      fmt->format == kFormatFloat && fmt->bits_per_sample == 32;
  if (!pcm16 && !float32) {
    return MakeError(ErrorKind::kUnsupportedFormat,
                     "format tag " + std::to_string(fmt->format) + " with " +
                         std::to_string(fmt->bits_per_sample) +
                         " bits per sample");
  }
  if (fmt->channels < 1 || fmt->channels > 2) {
    return MakeError(ErrorKind::kUnsupportedFormat,
                     std::to_string(fmt->channels) + " channels");
  }
  if (fmt->sample_rate == 0) {
    return MakeError(ErrorKind::kMalformedWav, "zero sample rate");
  }
  const size_t bytes_per_sample = fmt->bits_per_sample / 8;
  const size_t frame_bytes = bytes_per_sample * fmt->channels;
  if (fmt->block_align != frame_bytes) {
    return MakeError(ErrorKind::kMalformedWav, "block_align inconsistent");
  }
  if (data->size() % frame_bytes != 0) {
    return MakeError(ErrorKind::kMalformedWav, "truncated sample frame");
  }
  const size_t frames = data->size() / frame_bytes;
  std::vector<std::vector<float>> channels(fmt->channels,
                                           std::vector<float>(frames));
  const uint8_t* p = data->data();
  for (size_t i = 0; i < frames; ++i) {
    for (size_t c = 0; c < fmt->channels; ++c, p += bytes_per_sample) {
      if (pcm16) {
        const auto v = static_cast<int16_t>(Le16(p));
        channels[c][i] = static_cast<float>(v) / 32768.0f;
      } else {
        channels[c][i] = std::bit_cast<float>(Le32(p));
      }
    }
  }
  return AudioBuffer::Create(static_cast<int>(fmt->sample_rate),
                             std::move(channels));
}

absl::StatusOr<std::vector<uint8_t>> ReadFileBytes(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIo, "cannot open " + path.string());
  }
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

absl::StatusOr<AudioBuffer> ReadWav(const std::filesystem::path& path) {
  AECMOS_ASSIGN_OR_RETURN(std::vector<uint8_t> bytes, ReadFileBytes(path));
  return DecodeWav(bytes);
}

std::vector<uint8_t> EncodeWav(const AudioBuffer& buf, SampleFormat format) {
  const uint16_t channels = static_cast<uint16_t>(buf.num_channels());
  const uint16_t bits = format == SampleFormat::kPcm16 ? 16 : 32;
  const uint16_t block_align = static_cast<uint16_t>(channels * bits / 8);
  const uint32_t data_bytes =
      static_cast<uint32_t>(buf.num_frames() * block_align);

  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  Put32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  Put32(out, 16);
  Put16(out, format == SampleFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  Put16(out, channels);
  Put32(out, static_cast<uint32_t>(buf.sample_rate()));
  Put32(out, static_cast<uint32_t>(buf.sample_rate()) * block_align);
  Put16(out, block_align);
  Put16(out, bits);
  PutTag(out, "data");
  Put32(out, data_bytes);
  for (size_t i = 0; i < buf.num_frames(); ++i) {
    for (size_t c = 0; c < channels; ++c) {
      const float s = buf.channel(c)[i];
      if (format == SampleFormat::kPcm16) {
        const double scaled = std::nearbyint(double{s} * 32768.0);
        const auto v =
            static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
        Put16(out, static_cast<uint16_t>(v));
      } else {
        Put32(out, std::bit_cast<uint32_t>(s));
      }
    }
  }
  return out;
}

absl::Status WriteWav(const std::filesystem::path& path, const AudioBuffer& buf,
                      SampleFormat format) {
  const std::vector<uint8_t> bytes = EncodeWav(buf, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIo, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    return MakeError(ErrorKind::kIo, "short write to " + path.string());
  }
  return absl::OkStatus();
}

}  // namespace aecmos
