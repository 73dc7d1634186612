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

#include "wikirec/service.h"

#include <cstdlib>
#include <mutex>
#include <regex>

#include <fmt/format.h>

#include "httplib.h"
#include "wikirec/profiling.h"

namespace wikirec {
namespace {

HttpResponse JsonResponse(int status, const Json& body) {
  return {status, body.dump()};
}

HttpResponse Error(int status, const std::string& message, const std::string& field = {}) {
  Json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  return JsonResponse(status, body);
}

// Parses one decision object posted for `batch`.
FeedbackRecord ParseDecision(const Json& obj, const Batch& batch) {
  if (!obj.is_object()) throw RecordError({}, "each decision must be a JSON object");
  FeedbackRecord r;
  r.batch_id = batch.batch_id;
  r.project_id = batch.project_id;
  if (auto it = obj.find("project_id"); it != obj.end()) {
    r.project_id = RequireString(obj, "project_id");
  }
  r.editor_id = RequireString(obj, "editor_id");
  const std::string& alg = RequireString(obj, "algorithm");
  auto a = ParseAlgorithm(alg);
  if (!a) throw RecordError("algorithm", "unknown algorithm \"" + alg + "\"");
  r.algorithm = *a;
  const std::string& pool = RequireString(obj, "pool");
  auto t = ParseTier(pool);
  if (!t || *t == ExperienceTier::kHighlyExperienced) {
    throw RecordError("pool", "unknown pool \"" + pool + "\"");
  }
  r.pool = *t;
  r.invited = RequireBool(obj, "invited");
  if (auto it = obj.find("rating"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw RecordError("rating", "rating must be an integer 1-5");
    const auto v = it->get<std::int64_t>();
    if (v < 1 || v > 5) {
      throw RecordError("rating", "rating must be between 1 and 5 (got " +
                                      std::to_string(v) + ")");
    }
    r.rating = static_cast<int>(v);
  }
  // Decisions are stamped with the batch instant unless the client says
  // otherwise, so that responses never depend on the wall clock.
  r.decided_at = batch.as_of;
  if (auto it = obj.find("decided_at"); it != obj.end() && !it->is_null()) {
    r.decided_at = RequireInstant(obj, "decided_at");
  }
  if (auto it = obj.find("joined"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw RecordError("joined", "joined must be a boolean");
    r.joined = it->get<bool>();
  }
  return r;
}

}  // namespace

ApiConfig ApplyEnvironment(ApiConfig base) {
  if (const char* v = std::getenv("WIKIREC_PORT"); v && *v) {
    char* end = nullptr;
    const long port = std::strtol(v, &end, 10);
    if (*end != '\0' || port < 0 || port > 65535) {
      throw std::invalid_argument(fmt::format("WIKIREC_PORT is not a port: {}", v));
    }
    base.port = static_cast<int>(port);
  }
  if (const char* v = std::getenv("WIKIREC_DATA_DIR"); v && *v) base.data_dir = v;
  if (const char* v = std::getenv("WIKIREC_TOKEN"); v && *v) base.token = v;
  return base;
}

Service::Service(DataStore store, std::optional<std::string> token)
    : store_(std::move(store)),
      token_(std::move(token)),
      server_(std::make_unique<httplib::Server>()) {}

Service::~Service() { Stop(); }

bool Service::Authorized(const HttpRequest& request) const {
  if (!token_) return true;
  return request.authorization == "Bearer " + *token_;
}

HttpResponse Service::Handle(const HttpRequest& request) {
  static const std::regex kProjectBatches("/projects/(.+)/batches");
  static const std::regex kBatchDecisions("/batches/(.+)/decisions");
  static const std::regex kBatch("/batches/(.+)");
  std::smatch m;
  const std::string& path = request.path;
  try {
    if (request.method == "GET") {
      std::shared_lock lock(mutex_);
      if (path == "/projects") return GetProjects();
      if (std::regex_match(path, m, kProjectBatches)) return GetProjectBatches(m[1]);
      if (std::regex_match(path, m, kBatch)) return GetBatch(m[1]);
      if (path == "/metrics") return GetMetrics();
      if (path == "/impact") return GetImpact(request);
    } else if (request.method == "POST") {
      const bool decisions = std::regex_match(path, m, kBatchDecisions);
      if (!decisions && path != "/admin/generate") return Error(404, "no route for " + path);
      if (!Authorized(request)) return Error(401, "missing or invalid token");
      std::unique_lock lock(mutex_);
      if (decisions) return PostDecisions(m[1], request.body);
      return PostGenerate(request);
    }
    return Error(404, fmt::format("no route for {} {}", request.method, path));
  } catch (const std::exception& e) {
    return Error(500, e.what());
  }
}

HttpResponse Service::GetProjects() const {
  Json out = Json::array();
  std::map<std::string, std::size_t> batch_counts;
  for (const auto& b : store_.batches()) ++batch_counts[b.project_id];
  for (const auto& p : store_.corpus().projects()) {
    out.push_back({{"project_id", p.id},
                   {"name", p.name},
                   {"member_count", p.members.size()},
                   {"organizer_count", p.organizers.size()},
                   {"scope_size", p.scope.size()},
                   {"batch_count", batch_counts[p.id]}});
  }
  return JsonResponse(200, {{"projects", out}});
}

HttpResponse Service::GetProjectBatches(const std::string& project_id) const {
  if (!store_.corpus().FindProject(project_id)) {
    return Error(404, "unknown project " + project_id);
  }
  Json out = Json::array();
  for (const Batch* b : store_.BatchesOf(project_id)) {
    std::size_t candidates = 0;
    for (const auto& cell : b->cells) candidates += cell.candidates.size();
    std::size_t decided = 0;
    for (const auto& f : store_.feedback()) {
      if (f.batch_id == b->batch_id) ++decided;
    }
    out.push_back({{"batch_id", b->batch_id},
                   {"as_of", FormatInstant(b->as_of)},
                   {"candidate_count", candidates},
                   {"decision_count", decided}});
  }
  return JsonResponse(200, {{"project_id", project_id}, {"batches", out}});
}

HttpResponse Service::GetBatch(const std::string& batch_id) const {
  const Batch* batch = store_.FindBatch(batch_id);
  if (!batch) return Error(404, "unknown batch " + batch_id);
  const Corpus& corpus = store_.corpus();
  const Config config = ApplyConfig(Config{}, batch->config_snapshot);
  const ProjectIndex project = corpus.ProjectIndexOf(batch->project_id);

  Json out = BatchToJson(*batch);
  Json profiles = Json::object();
  for (const auto& cell : batch->cells) {
    for (const auto& c : cell.candidates) {
      if (profiles.contains(c.editor_id)) continue;
      const EditorProfile profile =
          ProfileEditor(corpus.EditorIndexOf(c.editor_id), corpus, batch->as_of, config);
      auto recent = profile.recent_in_scope_edits.find(project);
      profiles[c.editor_id] = {
          {"tier", std::string(TierName(profile.tier))},
          {"total_edits", profile.total_edits},
          {"recent_in_scope_edits",
           recent == profile.recent_in_scope_edits.end() ? 0 : recent->second},
          {"quality_score", profile.quality_score}};
    }
  }
  out["profiles"] = std::move(profiles);
  Json decisions = Json::array();
  for (const auto& f : store_.feedback()) {
    if (f.batch_id == batch_id) decisions.push_back(FeedbackToJson(f));
  }
  out["decisions"] = std::move(decisions);
  return JsonResponse(200, out);
}

HttpResponse Service::GetMetrics() const {
  return JsonResponse(200, MetricsToJson(ComputeMetrics(store_.feedback())));
}

HttpResponse Service::GetImpact(const HttpRequest& request) const {
  JoinSignal signal = JoinSignal::kInvited;
  if (auto it = request.query.find("join_signal"); it != request.query.end()) {
    if (it->second == "joined") {
      signal = JoinSignal::kJoined;
    } else if (it->second != "invited") {
      return Error(400, "join_signal must be \"invited\" or \"joined\"", "join_signal");
    }
  }
  std::int64_t window = store_.config().impact_window_days;
  if (auto it = request.query.find("window_days"); it != request.query.end()) {
    try {
      std::size_t used = 0;
      window = std::stoll(it->second, &used);
      if (used != it->second.size() || window < 1) throw std::invalid_argument("range");
    } catch (const std::exception&) {
      return Error(400, "window_days must be a positive integer", "window_days");
    }
  }
  const ImpactReport report =
      ImpactAnalysis(store_.feedback(), store_.corpus(), window, signal, store_.config());
  return JsonResponse(200, ImpactToJson(report));
}

HttpResponse Service::PostDecisions(const std::string& batch_id, const std::string& body) {
  const Batch* batch = store_.FindBatch(batch_id);
  if (!batch) return Error(404, "unknown batch " + batch_id);
  const Json parsed = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) return Error(400, "request body is not JSON");
  std::vector<Json> items;
  if (parsed.is_array()) {
    items.assign(parsed.begin(), parsed.end());
  } else if (parsed.is_object() && parsed.contains("decisions")) {
    const Json& list = parsed["decisions"];
    if (!list.is_array()) return Error(400, "decisions must be an array", "decisions");
    items.assign(list.begin(), list.end());
  } else {
    items.push_back(parsed);
  }
  if (items.empty()) return Error(400, "no decisions in request", "decisions");

  std::vector<FeedbackRecord> records;
  try {
    for (const auto& item : items) records.push_back(ParseDecision(item, *batch));
  } catch (const RecordError& e) {
    return Error(400, e.what(), e.field());
  }
  try {
    store_.CommitFeedback(records);
  } catch (const DecisionError& e) {
    switch (e.kind()) {
      case DecisionError::Kind::kUnknownBatch:
        return Error(404, e.what(), e.field());
      case DecisionError::Kind::kDuplicate:
        return Error(409, e.what(), e.field());
      default:
        return Error(400, e.what(), e.field());
    }
  }
  return JsonResponse(200, {{"recorded", records.size()}, {"batch_id", batch_id}});
}

HttpResponse Service::PostGenerate(const HttpRequest& request) {
  auto it = request.query.find("as_of");
  if (it == request.query.end()) return Error(400, "as_of is required", "as_of");
  Instant as_of;
  try {
    as_of = ParseInstant(it->second);
  } catch (const std::invalid_argument& e) {
    return Error(400, e.what(), "as_of");
  }
  const Corpus& corpus = store_.corpus();
  if (as_of > corpus.as_of()) {
    return Error(400, "as_of is after the corpus as_of " + FormatInstant(corpus.as_of()),
                 "as_of");
  }
  RecommendationLedger ledger = store_.ledger();
  const ProfileSnapshot snapshot = ProfileSnapshot::Build(corpus, as_of, store_.config());
  std::vector<Batch> batches = GenerateAllBatches(corpus, snapshot, ledger, store_.config());
  Json ids = Json::array();
  for (const auto& b : batches) ids.push_back(b.batch_id);
  store_.CommitBatches(std::move(batches), std::move(ledger));
  return JsonResponse(200, {{"as_of", FormatInstant(as_of)}, {"batches", ids}});
}

void Service::Listen(const std::string& host, int port) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    request.body = req.body;
    request.authorization = req.get_header_value("Authorization");
    const HttpResponse response = Handle(request);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  port_ = bound;
  ready_ = true;
  server_->listen_after_bind();
  ready_ = false;
}

void Service::Stop() {
  if (server_) server_->stop();
}

}  // namespace wikirec
