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

#ifndef AECMOS_SERVER_H_
#define AECMOS_SERVER_H_

#include <functional>
#include <memory>
#include <string>

#include "aecmos/campaign.h"

namespace httplib {
class Server;
}

namespace aecmos {

using Clock = std::function<Timestamp()>;

Timestamp SystemNow();

// HTTP front end of a Campaign:
//   GET  /api/task/next?worker=ID  -> served task document
//   POST /api/submission           -> ack
//   GET  /api/clip/{id}            -> audio/wav
//   GET  /api/admin/results        -> screened, aggregated scores
// Errors are JSON {"error": <kind>, "message": ...} with a matching status.
class TaskServer {
 public:
  explicit TaskServer(Campaign& campaign, Clock clock = SystemNow);
  ~TaskServer();

  TaskServer(const TaskServer&) = delete;
  TaskServer& operator=(const TaskServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or -1.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool Listen();
  void Stop();

 private:
  Campaign& campaign_;
  Clock clock_;
  std::unique_ptr<httplib::Server> http_;
};

// Port from the AECMOS_PORT environment variable when set, else `fallback`.
int PortFromEnv(int fallback);

}  // namespace aecmos

#endif  // AECMOS_SERVER_H_
