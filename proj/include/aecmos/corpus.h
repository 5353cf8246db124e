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

#ifndef AECMOS_CORPUS_H_
#define AECMOS_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aecmos/scales.h"
#include "aecmos/test_builder.h"

namespace aecmos {

enum class ClipKind { kRating, kTrapping, kGold };

// One row of a stimulus manifest (corpus.csv).
struct CorpusClip {
  std::string clip_id;
  std::string condition_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  std::filesystem::path path;
  ClipKind kind = ClipKind::kRating;
  // Trapping and gold clips only.
  std::optional<ScaleAnswer> expected;
  int tolerance = 1;
  double gain = 1.0;
  double delay_ms = 0.0;
};

// Stimulus catalog of a campaign. Columns:
//   clip_id,condition_id,scenario,path,kind,scale,expected,tolerance,gain,
//   delay_ms
// Only the first four are required; kind defaults to "rating". Relative
// paths resolve against the CSV's directory.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusClip> clips);

  static absl::StatusOr<Corpus> Load(const std::filesystem::path& csv);
  absl::Status Save(const std::filesystem::path& csv) const;

  const std::vector<CorpusClip>& clips() const { return clips_; }
  const CorpusClip* Find(const std::string& clip_id) const;
  void Add(CorpusClip clip);

  std::vector<std::string> RatingClipIds() const;
  std::vector<TrappingDef> TrappingPool() const;
  std::vector<GoldDef> GoldPool() const;

 private:
  std::vector<CorpusClip> clips_;
  std::map<std::string, size_t> index_;
};

std::string_view ClipKindToken(ClipKind kind);
std::optional<ClipKind> ParseClipKind(std::string_view token);

}  // namespace aecmos

#endif  // AECMOS_CORPUS_H_
