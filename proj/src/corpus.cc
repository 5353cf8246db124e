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

#include "aecmos/corpus.h"

#include <charconv>
#include <fstream>

#include "aecmos/csv.h"
#include "aecmos/status.h"

namespace aecmos {

namespace {

template <typename T>
absl::StatusOr<T> ParseNumber(const std::string& text, std::string_view what) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    return MakeError(ErrorKind::kSchemaInvalid,
                     "bad " + std::string(what) + " '" + text + "'");
  }
  return value;
}

}  // namespace

std::string_view ClipKindToken(ClipKind kind) {
  switch (kind) {
    case ClipKind::kRating:
      return "rating";
    case ClipKind::kTrapping:
      return "trapping";
    case ClipKind::kGold:
      return "gold";
  }
  return "";
}

std::optional<ClipKind> ParseClipKind(std::string_view token) {
  if (token.empty() || token == "rating") return ClipKind::kRating;
  if (token == "trapping") return ClipKind::kTrapping;
  if (token == "gold") return ClipKind::kGold;
  return std::nullopt;
}

Corpus::Corpus(std::vector<CorpusClip> clips) {
  for (CorpusClip& c : clips) Add(std::move(c));
}

void Corpus::Add(CorpusClip clip) {
  auto it = index_.find(clip.clip_id);
  if (it != index_.end()) {
    clips_[it->second] = std::move(clip);
    return;
  }
  index_[clip.clip_id] = clips_.size();
  clips_.push_back(std::move(clip));
}

const CorpusClip* Corpus::Find(const std::string& clip_id) const {
  auto it = index_.find(clip_id);
  return it == index_.end() ? nullptr : &clips_[it->second];
}

std::vector<std::string> Corpus::RatingClipIds() const {
  std::vector<std::string> out;
  for (const CorpusClip& c : clips_) {
    if (c.kind == ClipKind::kRating) out.push_back(c.clip_id);
  }
  return out;
}

std::vector<TrappingDef> Corpus::TrappingPool() const {
  std::vector<TrappingDef> out;
  for (const CorpusClip& c : clips_) {
    if (c.kind == ClipKind::kTrapping && c.expected) {
      out.push_back({c.clip_id, *c.expected});
    }
  }
  return out;
}

std::vector<GoldDef> Corpus::GoldPool() const {
  std::vector<GoldDef> out;
  for (const CorpusClip& c : clips_) {
    if (c.kind == ClipKind::kGold && c.expected) {
      out.push_back({c.clip_id, *c.expected, c.tolerance});
    }
  }
  return out;
}

absl::StatusOr<Corpus> Corpus::Load(const std::filesystem::path& csv) {
  AECMOS_ASSIGN_OR_RETURN(CsvTable table, CsvTable::Read(csv));
  AECMOS_ASSIGN_OR_RETURN(size_t c_id, table.RequireColumn("clip_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_cond, table.RequireColumn("condition_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_scen, table.RequireColumn("scenario"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_path, table.RequireColumn("path"));
  const auto c_kind = table.Column("kind");
  const auto c_scale = table.Column("scale");
  const auto c_expected = table.Column("expected");
  const auto c_tol = table.Column("tolerance");
  const auto c_gain = table.Column("gain");
  const auto c_delay = table.Column("delay_ms");
  const std::filesystem::path base = csv.parent_path();

  Corpus corpus;
  for (const auto& row : table.rows()) {
    CorpusClip clip;
    clip.clip_id = row[c_id];
    clip.condition_id = row[c_cond];
    auto scenario = ParseScenario(row[c_scen]);
    if (!scenario) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "unknown scenario '" + row[c_scen] + "'");
    }
    clip.scenario = *scenario;
    clip.path = row[c_path];
    if (clip.path.is_relative()) clip.path = base / clip.path;
    if (c_kind) {
      auto kind = ParseClipKind(row[*c_kind]);
      if (!kind) {
        return MakeError(ErrorKind::kSchemaInvalid,
                         "unknown clip kind '" + row[*c_kind] + "'");
      }
      clip.kind = *kind;
    }
    if (clip.kind != ClipKind::kRating) {
      if (!c_scale || !c_expected) {
        return MakeError(ErrorKind::kSchemaInvalid,
                         "trapping/gold rows need scale and expected columns");
      }
      auto scale = ParseScale(row[*c_scale]);
      if (!scale) {
        return MakeError(ErrorKind::kSchemaInvalid,
                         "unknown scale '" + row[*c_scale] + "'");
      }
      // The expected answer may be given as a score or as a category label.
      std::optional<int> score = ScoreFromLabel(*scale, row[*c_expected]);
      if (!score) {
        AECMOS_ASSIGN_OR_RETURN(score,
                                ParseNumber<int>(row[*c_expected], "expected"));
      }
      if (!IsValidScore(*score)) {
        return MakeError(ErrorKind::kSchemaInvalid,
                         "expected answer outside 1..5 for " + clip.clip_id);
      }
      clip.expected = ScaleAnswer{*scale, *score};
      if (c_tol && !row[*c_tol].empty()) {
        AECMOS_ASSIGN_OR_RETURN(clip.tolerance,
                                ParseNumber<int>(row[*c_tol], "tolerance"));
      }
    }
    if (c_gain && !row[*c_gain].empty()) {
      AECMOS_ASSIGN_OR_RETURN(clip.gain,
                              ParseNumber<double>(row[*c_gain], "gain"));
    }
    if (c_delay && !row[*c_delay].empty()) {
      AECMOS_ASSIGN_OR_RETURN(clip.delay_ms,
                              ParseNumber<double>(row[*c_delay], "delay_ms"));
    }
    if (corpus.Find(clip.clip_id) != nullptr) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "duplicate clip id " + clip.clip_id);
    }
    corpus.Add(std::move(clip));
  }
  return corpus;
}

absl::Status Corpus::Save(const std::filesystem::path& csv) const {
  std::ofstream out(csv, std::ios::trunc);
  if (!out) return MakeError(ErrorKind::kIo, "cannot write " + csv.string());
  WriteCsvRow(out, {"clip_id", "condition_id", "scenario", "path", "kind",
                    "scale", "expected", "tolerance", "gain", "delay_ms"});
  for (const CorpusClip& c : clips_) {
    WriteCsvRow(
        out, {c.clip_id, c.condition_id, std::string(ScenarioToken(c.scenario)),
              c.path.string(), std::string(ClipKindToken(c.kind)),
              c.expected ? std::string(ScaleToken(c.expected->scale)) : "",
              c.expected ? std::to_string(c.expected->score) : "",
              c.expected ? std::to_string(c.tolerance) : "",
              FormatDouble(c.gain), FormatDouble(c.delay_ms)});
  }
  return out ? absl::OkStatus()
             : MakeError(ErrorKind::kIo, "short write to " + csv.string());
}

}  // namespace aecmos
