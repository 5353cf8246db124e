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

#include "aecmos/campaign.h"

#include <cstdio>

#include "aecmos/status.h"
#include "aecmos/wav.h"

namespace aecmos {

namespace {

constexpr char kStoreLog[] = "store.log";
constexpr char kSnapshot[] = "snapshot.json";

int64_t Seconds(Timestamp t) { return t.time_since_epoch().count(); }
Timestamp FromSeconds(int64_t s) { return Timestamp(std::chrono::seconds(s)); }

Json FlagsJson(const SectionFlags& f) {
  return {{"qualification", f.qualification},
          {"setup", f.setup},
          {"training", f.training}};
}

SectionFlags FlagsFrom(const Json& j) {
  return {j.at("qualification").get<bool>(), j.at("setup").get<bool>(),
          j.at("training").get<bool>()};
}

Json StateToJson(const CampaignState& s) {
  Json j;
  j["events"] = s.events;
  j["leases"] = Json::array();
  for (const auto& [task, lease] : s.leases) {
    j["leases"].push_back({{"task_id", task},
                           {"worker_id", lease.worker_id},
                           {"at", Seconds(lease.leased_at)},
                           {"expires", Seconds(lease.expires)},
                           {"flags", FlagsJson(lease.flags)}});
  }
  j["expired"] = s.expired;
  j["submissions"] = Json::array();
  for (const Submission& sub : s.submissions) {
    j["submissions"].push_back(SubmissionToJson(sub));
  }
  j["sessions"] = Json::array();
  for (const auto& [worker, session] : s.sessions) {
    j["sessions"].push_back(SessionToJson(session));
  }
  j["trapping_failures"] = s.trapping_failures;
  return j;
}

absl::StatusOr<CampaignState> StateFromJson(const Json& j) {
  try {
    CampaignState s;
    s.events = j.at("events").get<uint64_t>();
    for (const Json& l : j.at("leases")) {
      s.leases[l.at("task_id").get<std::string>()] =
          Lease{l.at("worker_id").get<std::string>(),
                FromSeconds(l.at("at").get<int64_t>()),
                FromSeconds(l.at("expires").get<int64_t>()),
                FlagsFrom(l.at("flags"))};
    }
    s.expired =
        j.at("expired").get<std::vector<std::pair<std::string, std::string>>>();
    for (const Json& sj : j.at("submissions")) {
      AECMOS_ASSIGN_OR_RETURN(Submission sub, SubmissionFromJson(sj));
      s.submitted[{sub.worker_id, sub.task_id}] = s.submissions.size();
      s.done_tasks.insert(sub.task_id);
      s.submissions.push_back(std::move(sub));
    }
    for (const Json& sj : j.at("sessions")) {
      AECMOS_ASSIGN_OR_RETURN(SessionState session, SessionFromJson(sj));
      s.sessions[session.worker_id] = std::move(session);
    }
    s.trapping_failures =
        j.at("trapping_failures").get<std::map<std::string, int>>();
    return s;
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kSchemaInvalid,
                     std::string("snapshot: ") + e.what());
  }
}

}  // namespace

Json CampaignConfigToJson(const CampaignConfig& c) {
  Json j;
  j["scenario"] = ScenarioToken(c.scenario);
  j["salt"] = c.salt;
  j["lease_timeout_min"] = c.lease_timeout.count() / 60.0;
  j["setup_period_min"] = c.sections.setup_period.count() / 60.0;
  j["training_period_min"] = c.sections.training_period.count() / 60.0;
  j["snapshot_every"] = c.snapshot_every;
  const ScreeningConfig& s = c.screening;
  j["screening"] = {
      {"triplet_truth", s.triplet_truth},
      {"hearing_threshold", s.hearing_threshold},
      {"environment_truth", s.environment_truth},
      {"environment_allowed_misses", s.environment_allowed_misses},
      {"min_listen_s", s.min_listen_s},
      {"ban_after_trapping_failures", s.ban_after_trapping_failures}};
  if (s.gold_tolerance) j["screening"]["gold_tolerance"] = *s.gold_tolerance;
  return j;
}

absl::StatusOr<CampaignConfig> CampaignConfigFromJson(const Json& j) {
  try {
    CampaignConfig c;
    auto scenario = ParseScenario(j.at("scenario").get<std::string>());
    if (!scenario) {
      return MakeError(ErrorKind::kSchemaInvalid, "unknown scenario");
    }
    c.scenario = *scenario;
    c.salt = j.value("salt", c.salt);
    const auto minutes = [&](const char* key, std::chrono::seconds dflt) {
      if (!j.contains(key)) return dflt;
      return std::chrono::seconds(
          static_cast<int64_t>(j.at(key).get<double>() * 60.0));
    };
    c.lease_timeout = minutes("lease_timeout_min", c.lease_timeout);
    c.sections.setup_period =
        minutes("setup_period_min", c.sections.setup_period);
    c.sections.training_period =
        minutes("training_period_min", c.sections.training_period);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    if (j.contains("screening")) {
      const Json& s = j.at("screening");
      ScreeningConfig& sc = c.screening;
      sc.triplet_truth =
          s.value("triplet_truth", std::vector<std::string>{});
      sc.hearing_threshold = s.value("hearing_threshold", sc.hearing_threshold);
      sc.environment_truth = s.value("environment_truth", std::vector<int>{});
      sc.environment_allowed_misses =
          s.value("environment_allowed_misses", sc.environment_allowed_misses);
      sc.min_listen_s = s.value("min_listen_s", sc.min_listen_s);
      sc.ban_after_trapping_failures = s.value(
          "ban_after_trapping_failures", sc.ban_after_trapping_failures);
      if (s.contains("gold_tolerance")) {
        sc.gold_tolerance = s.at("gold_tolerance").get<int>();
      }
    }
    return c;
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kSchemaInvalid,
                     std::string("campaign config: ") + e.what());
  }
}

std::string BlindClipId(const std::string& salt, const std::string& clip_id) {
  uint64_t h = 0xCBF29CE484222325ULL;
  const auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001B3ULL;
  };
  for (unsigned char c : salt) mix(c);
  mix(0);
  for (unsigned char c : clip_id) mix(c);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Json ServedTaskToJson(const ServedTask& t) {
  Json scales = Json::array();
  for (Scale s : t.scales) scales.push_back(ScaleToken(s));
  return {{"task_id", t.task_id},
          {"scenario", ScenarioToken(t.scenario)},
          {"clips", t.clips},
          {"scales", scales},
          {"section_flags", FlagsJson(t.section_flags)},
          {"lease_expires", Seconds(t.lease_expires)},
          {"pay_usd", t.pay_usd}};
}

Json SubmitAckToJson(const SubmitAck& a) {
  return {{"accepted_for_processing", true},
          {"worker_id", a.worker_id},
          {"task_id", a.task_id},
          {"received_at", Seconds(a.received_at)},
          {"sequence", a.sequence},
          {"duplicate", a.duplicate}};
}

Campaign::Campaign(CampaignConfig config, Corpus corpus,
                   std::vector<TaskManifest> manifests,
                   std::filesystem::path store_dir)
    : config_(std::move(config)),
      corpus_(std::move(corpus)),
      manifests_(std::move(manifests)),
      store_dir_(std::move(store_dir)) {}

absl::StatusOr<std::unique_ptr<Campaign>> Campaign::Open(
    const std::filesystem::path& dir) {
  AECMOS_ASSIGN_OR_RETURN(Json cfg_json, ReadJsonFile(dir / "campaign.json"));
  AECMOS_ASSIGN_OR_RETURN(CampaignConfig config,
                          CampaignConfigFromJson(cfg_json));
  AECMOS_ASSIGN_OR_RETURN(Corpus corpus, Corpus::Load(dir / "corpus.csv"));
  AECMOS_ASSIGN_OR_RETURN(std::vector<TaskManifest> manifests,
                          ReadManifests(dir / "tasks.jsonl"));
  return Create(std::move(config), std::move(corpus), std::move(manifests),
                dir);
}

absl::StatusOr<std::unique_ptr<Campaign>> Campaign::Create(
    CampaignConfig config, Corpus corpus, std::vector<TaskManifest> manifests,
    const std::filesystem::path& store_dir) {
  std::unique_ptr<Campaign> c(new Campaign(
      std::move(config), std::move(corpus), std::move(manifests), store_dir));
  for (size_t i = 0; i < c->manifests_.size(); ++i) {
    const TaskManifest& m = c->manifests_[i];
    if (!c->task_index_.emplace(m.task_id, i).second) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "duplicate task id " + m.task_id);
    }
    for (const std::string& clip : m.clips) {
      if (c->corpus_.Find(clip) == nullptr) {
        return MakeError(ErrorKind::kNotFound,
                         "task " + m.task_id + " uses unknown clip " + clip);
      }
    }
  }
  for (const CorpusClip& clip : c->corpus_.clips()) {
    const std::string blind = BlindClipId(c->config_.salt, clip.clip_id);
    if (!c->blind_to_clip_.emplace(blind, clip.clip_id).second) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "blinded id collision for " + clip.clip_id);
    }
    c->clip_to_blind_[clip.clip_id] = blind;
  }
  if (!store_dir.empty()) {
    AECMOS_RETURN_IF_ERROR(c->Replay());
    c->log_.open(store_dir / kStoreLog, std::ios::app);
    if (!c->log_) {
      return MakeError(ErrorKind::kIo, "cannot open store log in " +
                                           store_dir.string());
    }
  }
  return c;
}

absl::Status Campaign::Replay() {
  uint64_t skip = 0;
  if (std::filesystem::exists(store_dir_ / kSnapshot)) {
    AECMOS_ASSIGN_OR_RETURN(Json snap, ReadJsonFile(store_dir_ / kSnapshot));
    AECMOS_ASSIGN_OR_RETURN(state_, StateFromJson(snap));
    skip = state_.events;
  }
  std::ifstream in(store_dir_ / kStoreLog);
  if (!in) return absl::OkStatus();
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line_no++ < skip) continue;
    Json event = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (event.is_discarded()) {
      // A torn final line from a crash mid-write; everything before it is
      // intact.
      break;
    }
    Apply(event);
  }
  return absl::OkStatus();
}

absl::Status Campaign::Record(const Json& event) {
  if (log_.is_open()) {
    log_ << event.dump() << '\n';
    log_.flush();
    if (!log_) return MakeError(ErrorKind::kIo, "store log write failed");
  }
  Apply(event);
  if (config_.snapshot_every > 0 && log_.is_open() &&
      state_.events % config_.snapshot_every == 0) {
    const std::filesystem::path tmp = store_dir_ / "snapshot.json.tmp";
    AECMOS_RETURN_IF_ERROR(WriteTextFile(tmp, StateToJson(state_).dump()));
    std::filesystem::rename(tmp, store_dir_ / kSnapshot);
  }
  return absl::OkStatus();
}

void Campaign::Apply(const Json& event) {
  ++state_.events;
  const std::string type = event.at("type").get<std::string>();
  if (type == "lease") {
    const std::string worker = event.at("worker_id").get<std::string>();
    state_.leases[event.at("task_id").get<std::string>()] =
        Lease{worker, FromSeconds(event.at("at").get<int64_t>()),
              FromSeconds(event.at("expires").get<int64_t>()),
              FlagsFrom(event.at("flags"))};
    state_.sessions.try_emplace(worker, SessionState{worker, {}, {}, {}});
  } else if (type == "expire") {
    const std::string task = event.at("task_id").get<std::string>();
    state_.leases.erase(task);
    state_.expired.emplace_back(task, event.at("worker_id").get<std::string>());
  } else if (type == "submit") {
    absl::StatusOr<Submission> parsed =
        SubmissionFromJson(event.at("submission"));
    if (!parsed.ok()) return;
    Submission sub = *std::move(parsed);
    state_.submitted[{sub.worker_id, sub.task_id}] = state_.submissions.size();
    state_.done_tasks.insert(sub.task_id);
    state_.leases.erase(sub.task_id);

    SessionState& session = state_.sessions[sub.worker_id];
    session.worker_id = sub.worker_id;
    const ScreeningConfig& sc = config_.screening;
    if (sub.qualification_answers) {
      auto r = ScoreDigitTriplet(*sub.qualification_answers, sc.triplet_truth,
                                 sc.hearing_threshold);
      if (r.ok() && r->passed && !session.qualification_passed) {
        session.qualification_passed = sub.submitted_at;
      }
    }
    if (sub.setup_picks &&
        sub.setup_picks->size() == sc.environment_truth.size()) {
      std::vector<EnvironmentTrial> trials;
      for (size_t i = 0; i < sc.environment_truth.size(); ++i) {
        trials.push_back({sc.environment_truth[i], (*sub.setup_picks)[i]});
      }
      auto r = ScoreEnvironmentCheck(trials, sc.environment_allowed_misses);
      if (r.ok() && *r) session.last_setup_pass = sub.submitted_at;
    }
    if (sub.training_completed) session.last_training_pass = sub.submitted_at;

    const TaskManifest& m = manifests_[task_index_.at(sub.task_id)];
    for (const ClipAnswer& a : sub.answers) {
      if (a.clip_id == m.trapping.clip_id &&
          a.scale == m.trapping.expected.scale &&
          a.score != m.trapping.expected.score) {
        ++state_.trapping_failures[sub.worker_id];
      }
    }
    state_.submissions.push_back(std::move(sub));
  }
}

void Campaign::ExpireLeases(Timestamp now) {
  std::vector<std::pair<std::string, std::string>> due;
  for (const auto& [task, lease] : state_.leases) {
    if (lease.expires <= now) due.emplace_back(task, lease.worker_id);
  }
  for (const auto& [task, worker] : due) {
    (void)Record({{"type", "expire"},
                  {"task_id", task},
                  {"worker_id", worker},
                  {"at", Seconds(now)}});
  }
}

bool Campaign::IsBannedLocked(const std::string& worker_id) const {
  auto it = state_.trapping_failures.find(worker_id);
  return it != state_.trapping_failures.end() &&
         it->second >= config_.screening.ban_after_trapping_failures;
}

bool Campaign::IsBanned(const std::string& worker_id) const {
  std::lock_guard lock(mu_);
  return IsBannedLocked(worker_id);
}

absl::StatusOr<ServedTask> Campaign::NextTask(const std::string& worker_id,
                                              Timestamp now) {
  if (worker_id.empty()) {
    return MakeError(ErrorKind::kSchemaInvalid, "worker id required");
  }
  std::lock_guard lock(mu_);
  if (IsBannedLocked(worker_id)) {
    return MakeError(ErrorKind::kWorkerBanned, worker_id);
  }
  ExpireLeases(now);

  const auto serve = [&](const TaskManifest& m, const Lease& lease) {
    ServedTask t;
    t.task_id = m.task_id;
    t.scenario = m.scenario;
    for (const std::string& clip : m.clips) {
      t.clips.push_back(clip_to_blind_.at(clip));
    }
    t.scales = m.scales;
    t.section_flags = lease.flags;
    t.lease_expires = lease.expires;
    t.pay_usd = m.pay_usd;
    return t;
  };

  for (const auto& [task, lease] : state_.leases) {
    if (lease.worker_id == worker_id) {
      return serve(manifests_[task_index_.at(task)], lease);
    }
  }
  for (const TaskManifest& m : manifests_) {
    if (state_.done_tasks.contains(m.task_id) ||
        state_.leases.contains(m.task_id)) {
      continue;
    }
    SessionState session{worker_id, {}, {}, {}};
    if (auto it = state_.sessions.find(worker_id); it != state_.sessions.end()) {
      session = it->second;
    }
    const SectionFlags flags = ScheduleSections(session, now, config_.sections);
    AECMOS_RETURN_IF_ERROR(Record({{"type", "lease"},
                                   {"task_id", m.task_id},
                                   {"worker_id", worker_id},
                                   {"at", Seconds(now)},
                                   {"expires", Seconds(now + config_.lease_timeout)},
                                   {"flags", FlagsJson(flags)}}));
    return serve(m, state_.leases.at(m.task_id));
  }
  return MakeError(ErrorKind::kNoTasksAvailable, "no unassigned tasks left");
}

absl::StatusOr<SubmitAck> Campaign::Submit(const Json& document,
                                           Timestamp now) {
  AECMOS_ASSIGN_OR_RETURN(Submission sub, SubmissionFromJson(document));
  for (ClipAnswer& a : sub.answers) {
    auto it = blind_to_clip_.find(a.clip_id);
    if (it == blind_to_clip_.end()) {
      return MakeError(ErrorKind::kSchemaInvalid, "unknown clip " + a.clip_id);
    }
    a.clip_id = it->second;
  }

  std::lock_guard lock(mu_);
  if (auto it = state_.submitted.find({sub.worker_id, sub.task_id});
      it != state_.submitted.end()) {
    const Submission& original = state_.submissions[it->second];
    return SubmitAck{original.worker_id, original.task_id,
                     original.submitted_at, it->second, /*duplicate=*/true};
  }
  auto task_it = task_index_.find(sub.task_id);
  if (task_it == task_index_.end()) {
    return MakeError(ErrorKind::kSchemaInvalid, "unknown task " + sub.task_id);
  }
  auto lease_it = state_.leases.find(sub.task_id);
  if (lease_it == state_.leases.end() ||
      lease_it->second.worker_id != sub.worker_id) {
    return MakeError(ErrorKind::kLeaseExpired,
                     "task " + sub.task_id + " is not leased to " +
                         sub.worker_id);
  }
  const Lease lease = lease_it->second;
  if (lease.expires <= now) {
    ExpireLeases(now);
    return MakeError(ErrorKind::kLeaseExpired,
                     "lease on " + sub.task_id + " expired");
  }

  const TaskManifest& m = manifests_[task_it->second];
  const std::set<std::string> in_task(m.clips.begin(), m.clips.end());
  for (const ClipAnswer& a : sub.answers) {
    if (!in_task.contains(a.clip_id) ||
        std::ranges::find(m.scales, a.scale) == m.scales.end()) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "answer does not match the task's clips and scales");
    }
  }
  if (lease.flags.qualification && !sub.qualification_answers) {
    return MakeError(ErrorKind::kSchemaInvalid,
                     "qualification section answers missing");
  }
  if (lease.flags.setup && !sub.setup_picks) {
    return MakeError(ErrorKind::kSchemaInvalid, "setup section answers missing");
  }
  if (lease.flags.training && !sub.training_completed) {
    return MakeError(ErrorKind::kSchemaInvalid, "training section not completed");
  }

  sub.submitted_at = now;
  const uint64_t sequence = state_.submissions.size();
  AECMOS_RETURN_IF_ERROR(
      Record({{"type", "submit"}, {"submission", SubmissionToJson(sub)}}));
  return SubmitAck{sub.worker_id, sub.task_id, now, sequence, false};
}

absl::StatusOr<std::vector<uint8_t>> Campaign::GetClip(
    const std::string& blind_id) const {
  auto it = blind_to_clip_.find(blind_id);
  if (it == blind_to_clip_.end()) {
    return MakeError(ErrorKind::kNotFound, "no clip " + blind_id);
  }
  const CorpusClip* clip = corpus_.Find(it->second);
  absl::StatusOr<std::vector<uint8_t>> bytes = ReadFileBytes(clip->path);
  if (!bytes.ok()) {
    return MakeError(ErrorKind::kNotFound,
                     "audio for " + blind_id + " unavailable");
  }
  return bytes;
}

absl::StatusOr<Json> Campaign::Results() const {
  std::vector<Submission> submissions;
  {
    std::lock_guard lock(mu_);
    submissions = state_.submissions;
  }
  AECMOS_ASSIGN_OR_RETURN(
      ScreeningReport report,
      ScreenCampaign(submissions, manifests_, corpus_, config_.screening));
  Json j;
  j["screening"] = ScreeningReportToJson(report);
  j["screening"].erase("submissions");
  if (report.votes.empty()) {
    j["conditions"] = Json::array();
  } else {
    AECMOS_ASSIGN_OR_RETURN(Aggregation agg, AggregateConditions(report.votes));
    j["conditions"] = ConditionScoresToJson(agg.conditions);
  }
  return j;
}

absl::Status Campaign::WriteSnapshot() {
  std::lock_guard lock(mu_);
  if (store_dir_.empty()) return absl::OkStatus();
  const std::filesystem::path tmp = store_dir_ / "snapshot.json.tmp";
  AECMOS_RETURN_IF_ERROR(WriteTextFile(tmp, StateToJson(state_).dump()));
  std::filesystem::rename(tmp, store_dir_ / kSnapshot);
  return absl::OkStatus();
}

CampaignState Campaign::State() const {
  std::lock_guard lock(mu_);
  return state_;
}

}  // namespace aecmos
