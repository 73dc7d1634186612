// Copyright 2026 The wikirec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WIKIREC_SERVICE_H_
#define WIKIREC_SERVICE_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "wikirec/store.h"

namespace httplib {
class Server;
}

namespace wikirec {

struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "data";
  std::optional<std::string> token;  // guards mutating endpoints when set
};

// WIKIREC_PORT, WIKIREC_DATA_DIR and WIKIREC_TOKEN override `base`.
ApiConfig ApplyEnvironment(ApiConfig base);

struct HttpRequest {
  std::string method;
  std::string path;  // percent-decoded
  std::map<std::string, std::string> query;
  std::string body;
  std::string authorization;  // raw Authorization header
};

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

// The JSON API over one data directory. Reads run concurrently; mutations
// take an exclusive lock and go through DataStore's all-or-nothing appends.
class Service {
 public:
  Service(DataStore store, std::optional<std::string> token);
  ~Service();

  HttpResponse Handle(const HttpRequest& request);

  // Binds and serves until Stop(). Port 0 picks a free port; the bound port
  // is available from port() once ready() is true.
  void Listen(const std::string& host, int port);
  void Stop();
  bool ready() const { return ready_.load(); }
  int port() const { return port_.load(); }

 private:
  HttpResponse GetProjects() const;
  HttpResponse GetProjectBatches(const std::string& project_id) const;
  HttpResponse GetBatch(const std::string& batch_id) const;
  HttpResponse GetMetrics() const;
  HttpResponse GetImpact(const HttpRequest& request) const;
  HttpResponse PostDecisions(const std::string& batch_id, const std::string& body);
  HttpResponse PostGenerate(const HttpRequest& request);
  bool Authorized(const HttpRequest& request) const;

  DataStore store_;
  std::optional<std::string> token_;
  mutable std::shared_mutex mutex_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> ready_{false};
  std::atomic<int> port_{0};
};

}  // namespace wikirec

#endif  // WIKIREC_SERVICE_H_
