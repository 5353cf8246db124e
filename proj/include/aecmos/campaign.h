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

#ifndef AECMOS_CAMPAIGN_H_
#define AECMOS_CAMPAIGN_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aecmos/corpus.h"
#include "aecmos/io.h"
#include "aecmos/screening.h"
#include "aecmos/test_builder.h"

namespace aecmos {

struct CampaignConfig {
  Scenario scenario = Scenario::kNearEndSingleTalk;
  // Salt for the client-facing clip ids.
  std::string salt = "aecmos";
  std::chrono::seconds lease_timeout = std::chrono::minutes(30);
  SectionConfig sections;
  ScreeningConfig screening;
  // Write a snapshot after this many logged events; 0 disables.
  size_t snapshot_every = 1000;
};

Json CampaignConfigToJson(const CampaignConfig& c);
absl::StatusOr<CampaignConfig> CampaignConfigFromJson(const Json& j);

// Opaque client-facing id of a clip: 16 hex digits of FNV-1a/64 over
// salt, a NUL byte and the clip id. Trapping, gold and rating clips are
// indistinguishable by id.
std::string BlindClipId(const std::string& salt, const std::string& clip_id);

// What a rater's client receives. Carries no trapping or gold markers and no
// condition ids.
struct ServedTask {
  std::string task_id;
  Scenario scenario = Scenario::kNearEndSingleTalk;
  std::vector<std::string> clips;  // blinded ids, presentation order
  std::vector<Scale> scales;       // presentation order
  SectionFlags section_flags;
  Timestamp lease_expires{};
  double pay_usd = 0.0;
};

Json ServedTaskToJson(const ServedTask& t);

struct SubmitAck {
  std::string worker_id;
  std::string task_id;
  Timestamp received_at{};
  uint64_t sequence = 0;  // position in the submission store
  bool duplicate = false;
};

Json SubmitAckToJson(const SubmitAck& a);

struct Lease {
  std::string worker_id;
  Timestamp leased_at{};
  Timestamp expires{};
  SectionFlags flags;
  bool operator==(const Lease&) const = default;
};

// Everything that replaying the store must reproduce.
struct CampaignState {
  std::map<std::string, Lease> leases;  // live, by task id
  std::vector<std::pair<std::string, std::string>> expired;  // (task, worker)
  std::vector<Submission> submissions;                       // append-only
  std::map<std::pair<std::string, std::string>, uint64_t> submitted;  // (worker, task) -> index
  std::set<std::string> done_tasks;
  std::map<std::string, SessionState> sessions;
  std::map<std::string, int> trapping_failures;
  uint64_t events = 0;

  bool operator==(const CampaignState&) const = default;
};

// A served campaign: manifests, stimulus catalog and an event-sourced store.
// Every state change is appended to store.log as one JSON line before it is
// applied; opening a campaign directory replays the snapshot plus the log.
// All public methods are thread-safe.
class Campaign {
 public:
  // Directory layout: campaign.json, corpus.csv, tasks.jsonl, and the
  // store files store.log / snapshot.json created on demand.
  static absl::StatusOr<std::unique_ptr<Campaign>> Open(
      const std::filesystem::path& dir);

  // `store_dir` empty keeps the store in memory only.
  static absl::StatusOr<std::unique_ptr<Campaign>> Create(
      CampaignConfig config, Corpus corpus,
      std::vector<TaskManifest> manifests,
      const std::filesystem::path& store_dir = {});

  absl::StatusOr<ServedTask> NextTask(const std::string& worker_id,
                                      Timestamp now);

  // Parses, validates and stores a submission document. Clip ids in the
  // document are the blinded ones the client received.
  absl::StatusOr<SubmitAck> Submit(const Json& document, Timestamp now);

  absl::StatusOr<std::vector<uint8_t>> GetClip(const std::string& blind_id) const;

  // Screens all stored submissions and aggregates accepted votes.
  absl::StatusOr<Json> Results() const;

  absl::Status WriteSnapshot();

  CampaignState State() const;
  const CampaignConfig& config() const { return config_; }
  const std::vector<TaskManifest>& manifests() const { return manifests_; }
  const Corpus& corpus() const { return corpus_; }
  bool IsBanned(const std::string& worker_id) const;

 private:
  Campaign(CampaignConfig config, Corpus corpus,
           std::vector<TaskManifest> manifests, std::filesystem::path store_dir);

  absl::Status Replay();
  absl::Status Record(const Json& event);
  void Apply(const Json& event);
  void ExpireLeases(Timestamp now);
  bool IsBannedLocked(const std::string& worker_id) const;

  const CampaignConfig config_;
  const Corpus corpus_;
  const std::vector<TaskManifest> manifests_;
  std::map<std::string, size_t> task_index_;
  std::map<std::string, std::string> blind_to_clip_;
  std::map<std::string, std::string> clip_to_blind_;
  const std::filesystem::path store_dir_;

  mutable std::mutex mu_;
  CampaignState state_;
  std::ofstream log_;
};

}  // namespace aecmos

#endif  // AECMOS_CAMPAIGN_H_
