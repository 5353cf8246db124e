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

#include <cstdlib>

#include "aecmos/status.h"
#include "httplib.h"

namespace aecmos {

namespace {

int HttpStatusFor(const absl::Status& status) {
  switch (KindOf(status).value_or(ErrorKind::kIo)) {
    case ErrorKind::kSchemaInvalid:
      return 400;
    case ErrorKind::kWorkerBanned:
      return 403;
    case ErrorKind::kNotFound:
      return 404;
    case ErrorKind::kLeaseExpired:
      return 409;
    case ErrorKind::kNoTasksAvailable:
      return 503;
    default:
      return 500;
  }
}

void SendError(httplib::Response& res, const absl::Status& status) {
  const auto kind = KindOf(status);
  Json body = {{"error", kind ? std::string(ErrorKindName(*kind)) : "Internal"},
               {"message", std::string(status.message())}};
  res.status = HttpStatusFor(status);
  res.set_content(body.dump(), "application/json");
}

void SendJson(httplib::Response& res, const Json& body) {
  res.status = 200;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

Timestamp SystemNow() {
  return std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());
}

int PortFromEnv(int fallback) {
  const char* env = std::getenv("AECMOS_PORT");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long port = std::strtol(env, &end, 10);
  if (*end != '\0' || port < 0 || port > 65535) return fallback;
  return static_cast<int>(port);
}

TaskServer::TaskServer(Campaign& campaign, Clock clock)
    : campaign_(campaign),
      clock_(std::move(clock)),
      http_(std::make_unique<httplib::Server>()) {
  http_->Get("/api/task/next",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string worker = req.get_param_value("worker");
               if (worker.empty()) {
                 SendError(res, MakeError(ErrorKind::kSchemaInvalid,
                                          "worker parameter required"));
                 return;
               }
               auto task = campaign_.NextTask(worker, clock_());
               if (!task.ok()) {
                 SendError(res, task.status());
                 return;
               }
               SendJson(res, ServedTaskToJson(*task));
             });

  http_->Post("/api/submission",
              [this](const httplib::Request& req, httplib::Response& res) {
                Json doc = Json::parse(req.body, nullptr, false);
                if (doc.is_discarded()) {
                  SendError(res, MakeError(ErrorKind::kSchemaInvalid,
                                           "body is not JSON"));
                  return;
                }
                auto ack = campaign_.Submit(doc, clock_());
                if (!ack.ok()) {
                  SendError(res, ack.status());
                  return;
                }
                SendJson(res, SubmitAckToJson(*ack));
              });

  http_->Get(R"(/api/clip/([0-9A-Za-z]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               auto bytes = campaign_.GetClip(req.matches[1]);
               if (!bytes.ok()) {
                 SendError(res, bytes.status());
                 return;
               }
               res.status = 200;
               res.set_content(
                   std::string(bytes->begin(), bytes->end()), "audio/wav");
             });

  http_->Get("/api/admin/results",
             [this](const httplib::Request&, httplib::Response& res) {
               auto results = campaign_.Results();
               if (!results.ok()) {
                 SendError(res, results.status());
                 return;
               }
               SendJson(res, *results);
             });
}

TaskServer::~TaskServer() { Stop(); }

int TaskServer::Bind(const std::string& host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

bool TaskServer::Listen() { return http_->listen_after_bind(); }

void TaskServer::Stop() {
  if (http_) http_->stop();
}

}  // namespace aecmos
