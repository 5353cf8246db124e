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

#include <chrono>
#include <filesystem>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "aecmos/wav.h"
#include "campaign_fixture.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace aecmos {
namespace {

using std::chrono::minutes;
using ::aecmos::testing::Answer;
using ::aecmos::testing::kT0;
using ::aecmos::testing::World;

TEST(Campaign, FreshWorkerGetsAllSections) {
  World w;
  auto c = w.Make(false);
  ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
  EXPECT_EQ(t.section_flags, (SectionFlags{true, true, true}));
  EXPECT_EQ(t.lease_expires, kT0 + minutes(30));
  EXPECT_EQ(t.clips.size(), 6u);
  // Asking again returns the same live lease.
  ASSERT_OK_AND_ASSIGN(ServedTask again, c->NextTask("alice", kT0 + minutes(1)));
  EXPECT_EQ(again.task_id, t.task_id);
}

TEST(Campaign, SectionsRecurOnSchedule) {
  World w;
  auto c = w.Make(false);
  ASSERT_OK_AND_ASSIGN(ServedTask t1, c->NextTask("alice", kT0));
  ASSERT_OK(c->Submit(Answer(w, "alice", t1), kT0 + minutes(5)));
  ASSERT_OK_AND_ASSIGN(ServedTask t2, c->NextTask("alice", kT0 + minutes(10)));
  EXPECT_EQ(t2.section_flags, (SectionFlags{false, false, false}));
  ASSERT_OK(c->Submit(Answer(w, "alice", t2), kT0 + minutes(12)));
  ASSERT_OK_AND_ASSIGN(ServedTask t3, c->NextTask("alice", kT0 + minutes(35)));
  EXPECT_EQ(t3.section_flags, (SectionFlags{false, true, false}));
  ASSERT_OK(c->Submit(Answer(w, "alice", t3), kT0 + minutes(36)));
  ASSERT_OK_AND_ASSIGN(ServedTask t4, c->NextTask("alice", kT0 + minutes(66)));
  EXPECT_EQ(t4.section_flags, (SectionFlags{false, true, true}));
}

TEST(Campaign, SubmittedTaskNeverServedAgain) {
  World w;
  auto c = w.Make(false);
  std::set<std::string> seen;
  for (size_t i = 0; i < w.manifests.size(); ++i) {
    ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0 + minutes(i)));
    EXPECT_TRUE(seen.insert(t.task_id).second) << t.task_id;
    ASSERT_OK(c->Submit(Answer(w, "alice", t), kT0 + minutes(i)));
  }
  EXPECT_KIND(c->NextTask("alice", kT0 + minutes(100)), kNoTasksAvailable);
  EXPECT_KIND(c->NextTask("bob", kT0 + minutes(100)), kNoTasksAvailable);
}

TEST(Campaign, SubmitIsIdempotent) {
  World w;
  auto c = w.Make(false);
  ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
  const Json doc = Answer(w, "alice", t);
  ASSERT_OK_AND_ASSIGN(SubmitAck first, c->Submit(doc, kT0 + minutes(1)));
  EXPECT_FALSE(first.duplicate);
  EXPECT_EQ(c->State().submissions.size(), 1u);
  ASSERT_OK_AND_ASSIGN(SubmitAck second, c->Submit(doc, kT0 + minutes(2)));
  EXPECT_TRUE(second.duplicate);
  EXPECT_EQ(second.sequence, first.sequence);
  EXPECT_EQ(second.received_at, first.received_at);
  EXPECT_EQ(c->State().submissions.size(), 1u);
  const Json ack = SubmitAckToJson(first);
  EXPECT_EQ(ack["accepted_for_processing"], true);
}

TEST(Campaign, SubmitValidation) {
  World w;
  auto c = w.Make(false);
  ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
  Json bad = Answer(w, "alice", t);
  bad["answers"][0]["score"] = 7;
  EXPECT_KIND(c->Submit(bad, kT0), kSchemaInvalid);
  bad = Answer(w, "alice", t);
  bad["answers"][0]["clip_id"] = "ffffffffffffffff";
  EXPECT_KIND(c->Submit(bad, kT0), kSchemaInvalid);
  bad = Answer(w, "alice", t);
  bad["answers"][0]["clip_id"] = "clip0";  // raw ids are not accepted
  EXPECT_KIND(c->Submit(bad, kT0), kSchemaInvalid);
  bad = Answer(w, "alice", t);
  bad.erase("qualification");
  EXPECT_KIND(c->Submit(bad, kT0), kSchemaInvalid);
  bad = Answer(w, "alice", t);
  bad["task_id"] = "nope";
  EXPECT_KIND(c->Submit(bad, kT0), kSchemaInvalid);
  EXPECT_KIND(c->Submit(Json::array(), kT0), kSchemaInvalid);
  // Another worker cannot submit a task leased to alice.
  EXPECT_KIND(c->Submit(Answer(w, "mallory", t), kT0), kLeaseExpired);
  EXPECT_TRUE(c->State().submissions.empty());
}

TEST(Campaign, LeaseExpiryReturnsTaskOnce) {
  World w;
  auto c = w.Make(false);
  ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
  EXPECT_KIND(c->Submit(Answer(w, "alice", t), kT0 + minutes(30)), kLeaseExpired);
  ASSERT_OK_AND_ASSIGN(ServedTask b, c->NextTask("bob", kT0 + minutes(31)));
  EXPECT_EQ(b.task_id, t.task_id);
  const CampaignState s = c->State();
  ASSERT_EQ(s.expired.size(), 1u);
  EXPECT_EQ(s.expired[0], (std::pair<std::string, std::string>{t.task_id, "alice"}));
  EXPECT_EQ(s.leases.at(t.task_id).worker_id, "bob");
  EXPECT_KIND(c->Submit(Answer(w, "alice", t), kT0 + minutes(32)), kLeaseExpired);
  ASSERT_OK(c->Submit(Answer(w, "bob", b), kT0 + minutes(32)));
}

TEST(Campaign, ConcurrentLeasesAreDisjoint) {
  World w(400, 4);
  auto c = w.Make(true);
  ASSERT_GE(w.manifests.size(), 100u);
  std::vector<std::string> got(100);
  std::vector<std::thread> threads;
  for (int i = 0; i < 100; ++i) {
    threads.emplace_back([&, i] {
      auto t = c->NextTask("w" + std::to_string(i), kT0);
      got[i] = t.ok() ? t->task_id : "";
    });
  }
  for (auto& t : threads) t.join();
  std::set<std::string> distinct(got.begin(), got.end());
  EXPECT_EQ(distinct.size(), 100u);
  EXPECT_FALSE(distinct.contains(""));
  EXPECT_EQ(c->State().leases.size(), 100u);
}

TEST(Campaign, ReplayReproducesState) {
  World w(40, 4);
  w.config.snapshot_every = 7;
  CampaignState before;
  {
    auto c = w.Make(true);
    for (int i = 0; i < 8; ++i) {
      const std::string worker = "w" + std::to_string(i % 3);
      ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask(worker, kT0 + minutes(i)));
      if (i % 4 != 3) {
        ASSERT_OK(c->Submit(Answer(w, worker, t, i == 2 ? 5 : 1), kT0 + minutes(i)));
      }
    }
    // Let the unsubmitted leases lapse, then lease again.
    ASSERT_OK(c->NextTask("late", kT0 + minutes(200)).status());
    before = c->State();
    EXPECT_FALSE(before.expired.empty());
    EXPECT_EQ(before.trapping_failures.at("w2"), 1);
  }
  EXPECT_TRUE(std::filesystem::exists(w.store() / "snapshot.json"));
  auto reopened = w.Make(true);
  EXPECT_EQ(reopened->State(), before);

  // Without the snapshot the full log gives the same state.
  std::filesystem::remove(w.store() / "snapshot.json");
  auto from_log = w.Make(true);
  EXPECT_EQ(from_log->State(), before);
}

TEST(Campaign, TornLogTailIgnored) {
  World w;
  CampaignState before;
  {
    auto c = w.Make(true);
    ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
    ASSERT_OK(c->Submit(Answer(w, "alice", t), kT0));
    before = c->State();
  }
  {
    std::ofstream log(w.store() / "store.log", std::ios::app);
    log << "{\"type\":\"sub";
  }
  auto c = w.Make(true);
  EXPECT_EQ(c->State(), before);
}

TEST(Campaign, BansAfterRepeatedTrappingFailures) {
  World w;
  auto c = w.Make(false);
  for (int i = 0; i < 2; ++i) {
    ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("spam", kT0 + minutes(i)));
    ASSERT_OK(c->Submit(Answer(w, "spam", t, 4), kT0 + minutes(i)));
  }
  EXPECT_TRUE(c->IsBanned("spam"));
  EXPECT_KIND(c->NextTask("spam", kT0 + minutes(3)), kWorkerBanned);
}

TEST(Campaign, ClipsBlindedAndServedVerbatim) {
  World w;
  auto c = w.Make(false);
  ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
  const TaskManifest& m = w.Manifest(t.task_id);
  const Json doc = ServedTaskToJson(t);
  const std::string text = doc.dump();
  for (const std::string& clip : m.clips) {
    EXPECT_EQ(text.find(clip), std::string::npos) << clip;
  }
  EXPECT_EQ(text.find("trap"), std::string::npos);
  EXPECT_EQ(text.find("gold"), std::string::npos);
  EXPECT_FALSE(doc.contains("trapping"));
  for (size_t i = 0; i < t.clips.size(); ++i) {
    EXPECT_EQ(t.clips[i].size(), 16u);
    EXPECT_EQ(t.clips[i], BlindClipId(w.config.salt, m.clips[i]));
    ASSERT_OK_AND_ASSIGN(auto bytes, c->GetClip(t.clips[i]));
    ASSERT_OK_AND_ASSIGN(auto disk, ReadFileBytes(w.corpus.Find(m.clips[i])->path));
    EXPECT_EQ(bytes, disk);
  }
  EXPECT_KIND(c->GetClip("0123456789abcdef"), kNotFound);
  EXPECT_KIND(c->GetClip("clip0"), kNotFound);
}

TEST(Campaign, ResultsAggregateAcceptedVotes) {
  World w;
  auto c = w.Make(false);
  for (int i = 0; i < 3; ++i) {
    ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0 + minutes(i)));
    ASSERT_OK(c->Submit(Answer(w, "alice", t, i == 1 ? 2 : 1), kT0 + minutes(i)));
  }
  ASSERT_OK_AND_ASSIGN(Json r, c->Results());
  EXPECT_EQ(r["screening"]["accepted"], 2);
  EXPECT_EQ(r["screening"]["rejected"], 1);
  ASSERT_TRUE(r["conditions"].is_array());
  int64_t votes = 0;
  for (const auto& cond : r["conditions"]) votes += cond["n_votes"].get<int64_t>();
  EXPECT_EQ(votes, 2 * 4 * 2);
}

TEST(Campaign, OpenDirectory) {
  World w;
  const auto dir = w.dir.path() / "camp";
  std::filesystem::create_directories(dir);
  ASSERT_OK(WriteTextFile(dir / "campaign.json", CampaignConfigToJson(w.config).dump()));
  ASSERT_OK(w.corpus.Save(dir / "corpus.csv"));
  ASSERT_OK(WriteManifests(dir / "tasks.jsonl", w.manifests));
  {
    ASSERT_OK_AND_ASSIGN(auto c, Campaign::Open(dir));
    EXPECT_EQ(c->manifests(), w.manifests);
    ASSERT_OK_AND_ASSIGN(ServedTask t, c->NextTask("alice", kT0));
    ASSERT_OK(c->Submit(Answer(w, "alice", t), kT0));
  }
  ASSERT_OK_AND_ASSIGN(auto c, Campaign::Open(dir));
  EXPECT_EQ(c->State().submissions.size(), 1u);
  EXPECT_EQ(c->config().screening.triplet_truth, w.config.screening.triplet_truth);
  EXPECT_KIND(Campaign::Open(w.dir.path() / "missing"), kIo);
}

}  // namespace
}  // namespace aecmos
