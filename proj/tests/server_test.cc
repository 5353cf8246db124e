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

#include "aecmos/server.h"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

#include "campaign_fixture.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "test_util.h"

namespace aecmos {
namespace {

using ::aecmos::testing::Answer;
using ::aecmos::testing::kT0;
using ::aecmos::testing::World;

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    campaign_ = world_.Make(false);
    server_ = std::make_unique<TaskServer>(*campaign_, [this] { return now_.load(); });
    port_ = server_->Bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->Listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->Stop();
    if (thread_.joinable()) thread_.join();
  }

  ServedTask Next(const std::string& worker) {
    auto res = client_->Get("/api/task/next?worker=" + worker);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 200) << res->body;
    const Json j = Json::parse(res->body);
    ServedTask t;
    t.task_id = j.at("task_id");
    t.clips = j.at("clips").get<std::vector<std::string>>();
    t.section_flags = {j["section_flags"]["qualification"], j["section_flags"]["setup"],
                       j["section_flags"]["training"]};
    return t;
  }

  World world_;
  std::unique_ptr<Campaign> campaign_;
  std::atomic<Timestamp> now_{kT0};
  std::unique_ptr<TaskServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServerTest, LeaseSubmitAndResults) {
  auto res = client_->Get("/api/task/next?worker=alice");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  const Json task = Json::parse(res->body);
  for (const char* key : {"task_id", "scenario", "clips", "scales", "section_flags",
                          "lease_expires", "pay_usd"}) {
    EXPECT_TRUE(task.contains(key)) << key;
  }
  EXPECT_EQ(task["scenario"], "fe_st");
  EXPECT_EQ(task["section_flags"]["qualification"], true);

  const ServedTask t = Next("alice");
  const std::string doc = Answer(world_, "alice", t).dump();
  auto ack = client_->Post("/api/submission", doc, "application/json");
  ASSERT_TRUE(ack);
  ASSERT_EQ(ack->status, 200) << ack->body;
  const Json a = Json::parse(ack->body);
  EXPECT_EQ(a["accepted_for_processing"], true);
  EXPECT_EQ(a["duplicate"], false);
  EXPECT_EQ(a["sequence"], 0);

  auto again = client_->Post("/api/submission", doc, "application/json");
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 200);
  EXPECT_EQ(Json::parse(again->body)["duplicate"], true);
  EXPECT_EQ(campaign_->State().submissions.size(), 1u);

  auto results = client_->Get("/api/admin/results");
  ASSERT_TRUE(results);
  ASSERT_EQ(results->status, 200);
  const Json r = Json::parse(results->body);
  EXPECT_EQ(r["screening"]["accepted"], 1);
  EXPECT_EQ(r["conditions"].size(), 4u);
}

TEST_F(ServerTest, ErrorMapping) {
  auto missing_worker = client_->Get("/api/task/next");
  ASSERT_TRUE(missing_worker);
  EXPECT_EQ(missing_worker->status, 400);
  EXPECT_EQ(Json::parse(missing_worker->body)["error"], "SchemaInvalid");

  auto garbage = client_->Post("/api/submission", "{not json", "application/json");
  ASSERT_TRUE(garbage);
  EXPECT_EQ(garbage->status, 400);

  const ServedTask t = Next("alice");
  Json bad = Answer(world_, "alice", t);
  bad["answers"][0]["score"] = 7;
  auto score = client_->Post("/api/submission", bad.dump(), "application/json");
  ASSERT_TRUE(score);
  EXPECT_EQ(score->status, 400);
  EXPECT_EQ(Json::parse(score->body)["error"], "SchemaInvalid");

  now_ = kT0 + std::chrono::hours(1);
  auto late = client_->Post("/api/submission", Answer(world_, "alice", t).dump(),
                            "application/json");
  ASSERT_TRUE(late);
  EXPECT_EQ(late->status, 409);
  EXPECT_EQ(Json::parse(late->body)["error"], "LeaseExpired");

  auto unknown = client_->Get("/api/clip/0123456789abcdef");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(Json::parse(unknown->body)["error"], "NotFound");
}

TEST_F(ServerTest, BannedAndExhausted) {
  for (int i = 0; i < 2; ++i) {
    const ServedTask t = Next("spam");
    auto ack = client_->Post("/api/submission", Answer(world_, "spam", t, 3).dump(),
                             "application/json");
    ASSERT_TRUE(ack);
    ASSERT_EQ(ack->status, 200);
  }
  auto banned = client_->Get("/api/task/next?worker=spam");
  ASSERT_TRUE(banned);
  EXPECT_EQ(banned->status, 403);
  EXPECT_EQ(Json::parse(banned->body)["error"], "WorkerBanned");

  for (size_t i = 2; i < world_.manifests.size(); ++i) Next("w" + std::to_string(i));
  auto none = client_->Get("/api/task/next?worker=last");
  ASSERT_TRUE(none);
  EXPECT_EQ(none->status, 503);
  EXPECT_EQ(Json::parse(none->body)["error"], "NoTasksAvailable");
}

TEST_F(ServerTest, ClipBytesMatchFiles) {
  const ServedTask t = Next("alice");
  const TaskManifest& m = world_.Manifest(t.task_id);
  for (size_t i = 0; i < t.clips.size(); ++i) {
    auto res = client_->Get("/api/clip/" + t.clips[i]);
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "audio/wav");
    ASSERT_OK_AND_ASSIGN(auto disk, ReadFileBytes(world_.corpus.Find(m.clips[i])->path));
    EXPECT_EQ(res->body, std::string(disk.begin(), disk.end())) << m.clips[i];
  }
}

TEST(PortFromEnv, Override) {
  ::unsetenv("AECMOS_PORT");
  EXPECT_EQ(PortFromEnv(8080), 8080);
  ::setenv("AECMOS_PORT", "9123", 1);
  EXPECT_EQ(PortFromEnv(8080), 9123);
  ::setenv("AECMOS_PORT", "nope", 1);
  EXPECT_EQ(PortFromEnv(8080), 8080);
  ::unsetenv("AECMOS_PORT");
}

}  // namespace
}  // namespace aecmos
