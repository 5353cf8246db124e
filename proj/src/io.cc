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

#include "aecmos/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "aecmos/csv.h"
#include "aecmos/status.h"

namespace aecmos {

namespace {

absl::Status Invalid(const std::string& what) {
  return MakeError(ErrorKind::kSchemaInvalid, what);
}

absl::StatusOr<Scale> ScaleField(const Json& j) {
  if (!j.is_string()) return Invalid("scale must be a string");
  auto s = ParseScale(j.get<std::string>());
  if (!s) return Invalid("unknown scale '" + j.get<std::string>() + "'");
  return *s;
}

absl::StatusOr<Scenario> ScenarioField(const Json& j) {
  if (!j.is_string()) return Invalid("scenario must be a string");
  auto s = ParseScenario(j.get<std::string>());
  if (!s) return Invalid("unknown scenario '" + j.get<std::string>() + "'");
  return *s;
}

absl::StatusOr<int> ScoreField(const Json& j) {
  if (!j.is_number_integer()) return Invalid("score must be an integer");
  const auto v = j.get<int64_t>();
  if (v < kMinScore || v > kMaxScore) {
    return Invalid("score " + std::to_string(v) + " outside 1..5");
  }
  return static_cast<int>(v);
}

Json AnswerJson(const ScaleAnswer& a) {
  return {{"scale", ScaleToken(a.scale)}, {"expected", a.score}};
}

Json TimestampJson(Timestamp t) { return t.time_since_epoch().count(); }

Timestamp TimestampFrom(const Json& j) {
  return Timestamp(std::chrono::seconds(j.get<int64_t>()));
}

template <typename T>
using Parser = absl::StatusOr<T> (*)(const Json&);

template <typename T>
absl::StatusOr<std::vector<T>> ReadJsonLines(const std::filesystem::path& path,
                                             Parser<T> parse) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      return Invalid(path.string() + ":" + std::to_string(line_no) +
                     ": not valid JSON");
    }
    AECMOS_ASSIGN_OR_RETURN(T value, parse(j));
    out.push_back(std::move(value));
  }
  return out;
}

}  // namespace

Json ManifestToJson(const TaskManifest& m) {
  Json j;
  j["task_id"] = m.task_id;
  j["scenario"] = ScenarioToken(m.scenario);
  j["clips"] = m.clips;
  Json trap = AnswerJson(m.trapping.expected);
  trap["clip_id"] = m.trapping.clip_id;
  j["trapping"] = trap;
  j["gold"] = Json::array();
  for (const GoldDef& g : m.gold) {
    Json gj = AnswerJson(g.expected);
    gj["clip_id"] = g.clip_id;
    gj["tolerance"] = g.tolerance;
    j["gold"].push_back(gj);
  }
  j["scales"] = Json::array();
  for (Scale s : m.scales) j["scales"].push_back(ScaleToken(s));
  j["seed"] = m.seed;
  j["pay_usd"] = m.pay_usd;
  return j;
}

absl::StatusOr<TaskManifest> ManifestFromJson(const Json& j) {
  try {
    TaskManifest m;
    m.task_id = j.at("task_id").get<std::string>();
    AECMOS_ASSIGN_OR_RETURN(m.scenario, ScenarioField(j.at("scenario")));
    m.clips = j.at("clips").get<std::vector<std::string>>();
    const Json& trap = j.at("trapping");
    m.trapping.clip_id = trap.at("clip_id").get<std::string>();
    AECMOS_ASSIGN_OR_RETURN(m.trapping.expected.scale,
                            ScaleField(trap.at("scale")));
    AECMOS_ASSIGN_OR_RETURN(m.trapping.expected.score,
                            ScoreField(trap.at("expected")));
    for (const Json& gj : j.value("gold", Json::array())) {
      GoldDef g;
      g.clip_id = gj.at("clip_id").get<std::string>();
      AECMOS_ASSIGN_OR_RETURN(g.expected.scale, ScaleField(gj.at("scale")));
      AECMOS_ASSIGN_OR_RETURN(g.expected.score, ScoreField(gj.at("expected")));
      g.tolerance = gj.value("tolerance", 1);
      m.gold.push_back(std::move(g));
    }
    for (const Json& s : j.at("scales")) {
      AECMOS_ASSIGN_OR_RETURN(Scale scale, ScaleField(s));
      m.scales.push_back(scale);
    }
    m.seed = j.at("seed").get<uint64_t>();
    m.pay_usd = j.value("pay_usd", 0.0);
    return m;
  } catch (const Json::exception& e) {
    return Invalid(std::string("manifest: ") + e.what());
  }
}

absl::Status WriteManifests(const std::filesystem::path& path,
                            std::span<const TaskManifest> manifests) {
  std::ostringstream out;
  for (const TaskManifest& m : manifests) out << ManifestToJson(m).dump() << '\n';
  return WriteTextFile(path, out.str());
}

absl::StatusOr<std::vector<TaskManifest>> ReadManifests(
    const std::filesystem::path& path) {
  return ReadJsonLines<TaskManifest>(path, &ManifestFromJson);
}

Json SubmissionToJson(const Submission& s) {
  Json j;
  j["worker_id"] = s.worker_id;
  j["task_id"] = s.task_id;
  j["answers"] = Json::array();
  for (const ClipAnswer& a : s.answers) {
    j["answers"].push_back({{"clip_id", a.clip_id},
                            {"scale", ScaleToken(a.scale)},
                            {"score", a.score},
                            {"playback_complete", a.playback_complete},
                            {"listen_duration_s", a.listen_duration_s}});
  }
  if (s.qualification_answers) j["qualification"] = *s.qualification_answers;
  if (s.setup_picks) j["setup"] = *s.setup_picks;
  j["training_completed"] = s.training_completed;
  j["client_started"] = TimestampJson(s.client_started);
  j["client_finished"] = TimestampJson(s.client_finished);
  j["submitted_at"] = TimestampJson(s.submitted_at);
  return j;
}

absl::StatusOr<Submission> SubmissionFromJson(const Json& j) {
  if (!j.is_object()) return Invalid("submission must be an object");
  try {
    Submission s;
    s.worker_id = j.at("worker_id").get<std::string>();
    s.task_id = j.at("task_id").get<std::string>();
    if (s.worker_id.empty() || s.task_id.empty()) {
      return Invalid("worker_id and task_id must be non-empty");
    }
    const Json& answers = j.at("answers");
    if (!answers.is_array()) return Invalid("answers must be an array");
    for (const Json& aj : answers) {
      ClipAnswer a;
      a.clip_id = aj.at("clip_id").get<std::string>();
      AECMOS_ASSIGN_OR_RETURN(a.scale, ScaleField(aj.at("scale")));
      AECMOS_ASSIGN_OR_RETURN(a.score, ScoreField(aj.at("score")));
      a.playback_complete = aj.value("playback_complete", false);
      a.listen_duration_s = aj.value("listen_duration_s", 0.0);
      s.answers.push_back(std::move(a));
    }
    if (j.contains("qualification")) {
      s.qualification_answers =
          j.at("qualification").get<std::vector<std::string>>();
    }
    if (j.contains("setup")) {
      s.setup_picks = j.at("setup").get<std::vector<int>>();
    }
    s.training_completed = j.value("training_completed", false);
    if (j.contains("client_started")) {
      s.client_started = TimestampFrom(j.at("client_started"));
    }
    if (j.contains("client_finished")) {
      s.client_finished = TimestampFrom(j.at("client_finished"));
    }
    if (j.contains("submitted_at")) {
      s.submitted_at = TimestampFrom(j.at("submitted_at"));
    }
    return s;
  } catch (const Json::exception& e) {
    return Invalid(std::string("submission: ") + e.what());
  }
}

absl::Status WriteSubmissions(const std::filesystem::path& path,
                              std::span<const Submission> submissions) {
  std::ostringstream out;
  for (const Submission& s : submissions) {
    out << SubmissionToJson(s).dump() << '\n';
  }
  return WriteTextFile(path, out.str());
}

absl::StatusOr<std::vector<Submission>> ReadSubmissions(
    const std::filesystem::path& path) {
  return ReadJsonLines<Submission>(path, &SubmissionFromJson);
}

Json SessionToJson(const SessionState& s) {
  Json j;
  j["worker_id"] = s.worker_id;
  const auto put = [&](const char* key, const std::optional<Timestamp>& t) {
    j[key] = t ? TimestampJson(*t) : Json(nullptr);
  };
  put("qualification_passed", s.qualification_passed);
  put("last_setup_pass", s.last_setup_pass);
  put("last_training_pass", s.last_training_pass);
  return j;
}

absl::StatusOr<SessionState> SessionFromJson(const Json& j) {
  try {
    SessionState s;
    s.worker_id = j.at("worker_id").get<std::string>();
    const auto get = [&](const char* key) -> std::optional<Timestamp> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return TimestampFrom(j.at(key));
    };
    s.qualification_passed = get("qualification_passed");
    s.last_setup_pass = get("last_setup_pass");
    s.last_training_pass = get("last_training_pass");
    return s;
  } catch (const Json::exception& e) {
    return Invalid(std::string("session: ") + e.what());
  }
}

absl::Status WriteVotesCsv(const std::filesystem::path& path,
                           std::span<const VoteRecord> votes) {
  std::ostringstream out;
  WriteCsvRow(out, {"worker_id", "clip_id", "condition", "scenario", "scale",
                    "score"});
  for (const VoteRecord& v : votes) {
    WriteCsvRow(out, {v.worker_id, v.clip_id, v.condition_id,
                      std::string(ScenarioToken(v.scenario)),
                      std::string(ScaleToken(v.scale)),
                      std::to_string(v.score)});
  }
  return WriteTextFile(path, out.str());
}

absl::StatusOr<std::vector<VoteRecord>> ReadVotesCsv(
    const std::filesystem::path& path) {
  AECMOS_ASSIGN_OR_RETURN(CsvTable table, CsvTable::Read(path));
  AECMOS_ASSIGN_OR_RETURN(size_t c_worker, table.RequireColumn("worker_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_clip, table.RequireColumn("clip_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_cond, table.RequireColumn("condition"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_scen, table.RequireColumn("scenario"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_scale, table.RequireColumn("scale"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_score, table.RequireColumn("score"));
  std::vector<VoteRecord> votes;
  votes.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    VoteRecord v;
    v.worker_id = row[c_worker];
    v.clip_id = row[c_clip];
    v.condition_id = row[c_cond];
    auto scenario = ParseScenario(row[c_scen]);
    auto scale = ParseScale(row[c_scale]);
    if (!scenario || !scale) {
      return Invalid("bad scenario/scale in votes row for " + v.clip_id);
    }
    v.scenario = *scenario;
    v.scale = *scale;
    const std::string& s = row[c_score];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v.score);
    if (ec != std::errc() || ptr != s.data() + s.size() ||
        !IsValidScore(v.score)) {
      return Invalid("bad score '" + s + "'");
    }
    votes.push_back(std::move(v));
  }
  return votes;
}

absl::StatusOr<std::vector<ObjectiveScore>> ReadObjectiveCsv(
    const std::filesystem::path& path) {
  AECMOS_ASSIGN_OR_RETURN(CsvTable table, CsvTable::Read(path));
  AECMOS_ASSIGN_OR_RETURN(size_t c_clip, table.RequireColumn("clip_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_metric, table.RequireColumn("metric_name"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_value, table.RequireColumn("value"));
  std::vector<ObjectiveScore> out;
  for (const auto& row : table.rows()) {
    ObjectiveScore o{row[c_clip], row[c_metric], 0.0};
    const std::string& s = row[c_value];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), o.value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      return Invalid("bad metric value '" + s + "' for " + o.clip_id);
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::string ConditionScoresCsv(std::span<const ConditionScore> scores) {
  std::ostringstream out;
  WriteCsvRow(out, {"condition", "scenario", "scale", "mean", "n_votes",
                    "stddev", "ci95"});
  for (const ConditionScore& c : scores) {
    WriteCsvRow(out, {c.condition_id, std::string(ScenarioToken(c.scenario)),
                      std::string(ScaleToken(c.scale)), FormatDouble(c.mean),
                      std::to_string(c.n_votes), FormatDouble(c.stddev),
                      FormatDouble(c.ci95)});
  }
  return out.str();
}

Json ConditionScoresToJson(std::span<const ConditionScore> scores) {
  Json arr = Json::array();
  for (const ConditionScore& c : scores) {
    arr.push_back({{"condition", c.condition_id},
                   {"scenario", ScenarioToken(c.scenario)},
                   {"scale", ScaleToken(c.scale)},
                   {"mean", c.mean},
                   {"n_votes", c.n_votes},
                   {"stddev", c.stddev},
                   {"ci95", c.ci95}});
  }
  return arr;
}

Json ScreeningReportToJson(const ScreeningReport& report) {
  Json j;
  j["accepted"] = report.accepted;
  j["rejected"] = report.rejected;
  j["reason_totals"] = Json::object();
  for (const auto& [reason, n] : report.reason_totals) {
    j["reason_totals"][std::string(RejectReasonName(reason))] = n;
  }
  j["banned_workers"] = report.banned_workers;
  j["submissions"] = Json::array();
  for (const SubmissionVerdict& v : report.verdicts) {
    Json reasons = Json::array();
    for (RejectReason r : v.verdict.reasons) {
      reasons.push_back(RejectReasonName(r));
    }
    j["submissions"].push_back({{"worker_id", v.worker_id},
                                {"task_id", v.task_id},
                                {"verdict", v.verdict.accepted() ? "Accepted"
                                                                 : "Rejected"},
                                {"reasons", reasons}});
  }
  return j;
}

absl::StatusOr<Json> ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIo, "cannot open " + path.string());
  Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return Invalid(path.string() + ": not valid JSON");
  return j;
}

absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return MakeError(ErrorKind::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  return out ? absl::OkStatus()
             : MakeError(ErrorKind::kIo, "short write to " + path.string());
}

}  // namespace aecmos
