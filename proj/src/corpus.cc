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

#include "wikirec/corpus.h"

#include <algorithm>
#include <numeric>
#include <utility>

namespace wikirec {
namespace {

template <typename Record, typename KeyFn>
std::optional<std::uint32_t> FindSorted(const std::vector<Record>& records,
                                        std::string_view id, KeyFn key) {
  auto it = std::lower_bound(
      records.begin(), records.end(), id,
      [&](const Record& r, std::string_view v) { return key(r) < v; });
  if (it == records.end() || key(*it) != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - records.begin());
}

void SortUnique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

CorpusError Dangling(std::string_view file, std::size_t record,
                     std::string_view field, std::string_view what,
                     std::string_view id) {
  return CorpusError(CorpusError::Kind::kDanglingReference,
                     std::string(file) + " record " + std::to_string(record) +
                         ": " + std::string(field) + " references unknown " +
                         std::string(what) + " \"" + std::string(id) + "\"",
                     std::string(file), record, std::string(field));
}

// CSR build: offsets[k]..offsets[k+1] lists the positions whose key is k.
template <typename KeysOf>
void BuildCsr(std::size_t buckets, std::size_t items, KeysOf keys_of,
              std::vector<std::uint32_t>& offsets,
              std::vector<std::uint32_t>& index) {
  offsets.assign(buckets + 1, 0);
  for (std::size_t i = 0; i < items; ++i) {
    keys_of(i, [&](std::uint32_t k) { ++offsets[k + 1]; });
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  index.assign(offsets.back(), 0);
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < items; ++i) {
    keys_of(i, [&](std::uint32_t k) {
      index[cursor[k]++] = static_cast<std::uint32_t>(i);
    });
  }
}

}  // namespace

std::string_view InteractionKindName(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::kTalkMessage:
      return "talk_message";
    case InteractionKind::kCoEdit:
      return "co_edit";
    case InteractionKind::kThanks:
      return "thanks";
  }
  return "talk_message";
}

std::optional<InteractionKind> ParseInteractionKind(std::string_view name) {
  if (name == "talk_message") return InteractionKind::kTalkMessage;
  if (name == "co_edit") return InteractionKind::kCoEdit;
  if (name == "thanks") return InteractionKind::kThanks;
  return std::nullopt;
}

CorpusError::CorpusError(Kind kind, std::string message, std::string file,
                         std::size_t line, std::string field)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

UnknownIdError::UnknownIdError(std::string_view what_kind, std::string_view id)
    : std::out_of_range("unknown " + std::string(what_kind) + " \"" +
                        std::string(id) + "\""),
      id_(id) {}

Corpus Corpus::FromRecords(CorpusRecords records, Instant as_of) {
  using Kind = CorpusError::Kind;
  Corpus c;
  c.as_of_ = as_of;

  // Editors.
  c.editors_.reserve(records.editors.size());
  for (std::size_t i = 0; i < records.editors.size(); ++i) {
    auto& r = records.editors[i];
    if (r.editor_id.empty()) {
      throw CorpusError(Kind::kMalformed,
                        "editors.jsonl record " + std::to_string(i + 1) +
                            ": empty editor_id",
                        "editors.jsonl", i + 1, "editor_id");
    }
    c.editors_.push_back({std::move(r.editor_id), r.registered_at});
  }
  std::stable_sort(c.editors_.begin(), c.editors_.end(),
                   [](const Editor& a, const Editor& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < c.editors_.size(); ++i) {
    if (c.editors_[i].id == c.editors_[i - 1].id) {
      throw CorpusError(Kind::kDuplicate,
                        "duplicate editor_id \"" + c.editors_[i].id + "\"",
                        "editors.jsonl", 0, "editor_id");
    }
  }

  // Projects (ids first, so articles can resolve in_scope_of).
  std::vector<std::size_t> project_order(records.projects.size());
  std::iota(project_order.begin(), project_order.end(), 0);
  std::stable_sort(project_order.begin(), project_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return records.projects[a].project_id <
                            records.projects[b].project_id;
                   });
  for (std::size_t pos = 0; pos < project_order.size(); ++pos) {
    const std::size_t i = project_order[pos];
    auto& r = records.projects[i];
    if (r.project_id.empty()) {
      throw CorpusError(Kind::kMalformed,
                        "projects.jsonl record " + std::to_string(i + 1) +
                            ": empty project_id",
                        "projects.jsonl", i + 1, "project_id");
    }
    if (!c.projects_.empty() && c.projects_.back().id == r.project_id) {
      throw CorpusError(Kind::kDuplicate,
                        "duplicate project_id \"" + r.project_id + "\"",
                        "projects.jsonl", i + 1, "project_id");
    }
    Project p;
    p.id = r.project_id;
    p.name = std::move(r.name);
    for (const auto& m : r.members) {
      auto e = FindSorted(c.editors_, m, [](const Editor& x) -> const std::string& { return x.id; });
      if (!e) throw Dangling("projects.jsonl", i + 1, "members", "editor", m);
      p.members.push_back(*e);
    }
    SortUnique(p.members);
    for (const auto& o : r.organizers) {
      auto e = FindSorted(c.editors_, o, [](const Editor& x) -> const std::string& { return x.id; });
      if (!e) throw Dangling("projects.jsonl", i + 1, "organizers", "editor", o);
      if (!std::binary_search(p.members.begin(), p.members.end(), *e)) {
        throw CorpusError(Kind::kIntegrity,
                          "projects.jsonl record " + std::to_string(i + 1) +
                              ": organizer \"" + o + "\" of project \"" +
                              p.id + "\" is not a member",
                          "projects.jsonl", i + 1, "organizers");
      }
      p.organizers.push_back(*e);
    }
    SortUnique(p.organizers);
    c.projects_.push_back(std::move(p));
  }

  // Categories.
  for (const auto& a : records.articles) {
    for (const auto& label : a.categories) c.categories_.push_back(label);
  }
  std::sort(c.categories_.begin(), c.categories_.end());
  c.categories_.erase(std::unique(c.categories_.begin(), c.categories_.end()),
                      c.categories_.end());
  if (!c.categories_.empty() && c.categories_.front().empty()) {
    throw CorpusError(Kind::kMalformed, "articles.jsonl: empty category label",
                      "articles.jsonl", 0, "categories");
  }

  // Articles.
  std::vector<std::size_t> article_order(records.articles.size());
  std::iota(article_order.begin(), article_order.end(), 0);
  std::stable_sort(article_order.begin(), article_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return records.articles[a].article_id <
                            records.articles[b].article_id;
                   });
  c.articles_.reserve(records.articles.size());
  for (std::size_t pos = 0; pos < article_order.size(); ++pos) {
    const std::size_t i = article_order[pos];
    auto& r = records.articles[i];
    if (r.article_id.empty()) {
      throw CorpusError(Kind::kMalformed,
                        "articles.jsonl record " + std::to_string(i + 1) +
                            ": empty article_id",
                        "articles.jsonl", i + 1, "article_id");
    }
    if (!c.articles_.empty() && c.articles_.back().id == r.article_id) {
      throw CorpusError(Kind::kDuplicate,
                        "duplicate article_id \"" + r.article_id + "\"",
                        "articles.jsonl", i + 1, "article_id");
    }
    Article a;
    a.id = std::move(r.article_id);
    for (const auto& label : r.categories) {
      a.categories.push_back(static_cast<CategoryIndex>(
          std::lower_bound(c.categories_.begin(), c.categories_.end(), label) -
          c.categories_.begin()));
    }
    SortUnique(a.categories);
    for (const auto& pid : r.in_scope_of) {
      auto p = FindSorted(c.projects_, pid, [](const Project& x) -> const std::string& { return x.id; });
      if (!p) throw Dangling("articles.jsonl", i + 1, "in_scope_of", "project", pid);
      a.in_scope_of.push_back(*p);
    }
    SortUnique(a.in_scope_of);
    c.articles_.push_back(std::move(a));
  }
  for (ArticleIndex ai = 0; ai < c.articles_.size(); ++ai) {
    for (ProjectIndex p : c.articles_[ai].in_scope_of) {
      c.projects_[p].scope.push_back(ai);
    }
  }

  auto editor_key = [](const Editor& x) -> const std::string& { return x.id; };
  auto article_key = [](const Article& x) -> const std::string& { return x.id; };

  // Edits.
  c.edits_.reserve(records.edits.size());
  for (std::size_t i = 0; i < records.edits.size(); ++i) {
    const auto& r = records.edits[i];
    if (r.editor_id.empty() || r.article_id.empty()) {
      throw CorpusError(Kind::kMalformed,
                        "edits.jsonl record " + std::to_string(i + 1) +
                            ": empty " +
                            (r.editor_id.empty() ? "editor_id" : "article_id"),
                        "edits.jsonl", i + 1,
                        r.editor_id.empty() ? "editor_id" : "article_id");
    }
    auto e = FindSorted(c.editors_, r.editor_id, editor_key);
    if (!e) throw Dangling("edits.jsonl", i + 1, "editor_id", "editor", r.editor_id);
    auto a = FindSorted(c.articles_, r.article_id, article_key);
    if (!a) throw Dangling("edits.jsonl", i + 1, "article_id", "article", r.article_id);
    if (r.timestamp > as_of) {
      throw CorpusError(Kind::kIntegrity,
                        "edits.jsonl record " + std::to_string(i + 1) +
                            ": timestamp " + FormatInstant(r.timestamp) +
                            " is after as_of " + FormatInstant(as_of),
                        "edits.jsonl", i + 1, "timestamp");
    }
    c.edits_.push_back({*e, *a, r.timestamp, r.reverted});
  }
  std::stable_sort(c.edits_.begin(), c.edits_.end(),
                   [](const Edit& x, const Edit& y) { return x.timestamp < y.timestamp; });

  // Interactions.
  c.interactions_.reserve(records.interactions.size());
  for (std::size_t i = 0; i < records.interactions.size(); ++i) {
    const auto& r = records.interactions[i];
    auto s = FindSorted(c.editors_, r.source, editor_key);
    if (!s) throw Dangling("interactions.jsonl", i + 1, "source", "editor", r.source);
    auto t = FindSorted(c.editors_, r.target, editor_key);
    if (!t) throw Dangling("interactions.jsonl", i + 1, "target", "editor", r.target);
    if (*s == *t) {
      throw CorpusError(Kind::kIntegrity,
                        "interactions.jsonl record " + std::to_string(i + 1) +
                            ": source equals target \"" + r.source + "\"",
                        "interactions.jsonl", i + 1, "target");
    }
    if (r.timestamp > as_of) {
      throw CorpusError(Kind::kIntegrity,
                        "interactions.jsonl record " + std::to_string(i + 1) +
                            ": timestamp is after as_of",
                        "interactions.jsonl", i + 1, "timestamp");
    }
    c.interactions_.push_back({*s, *t, r.timestamp, r.kind});
  }
  std::stable_sort(c.interactions_.begin(), c.interactions_.end(),
                   [](const Interaction& x, const Interaction& y) {
                     return x.timestamp < y.timestamp;
                   });

  c.BuildIndexes();
  return c;
}

void Corpus::BuildIndexes() {
  BuildCsr(
      editors_.size(), edits_.size(),
      [&](std::size_t i, auto emit) { emit(edits_[i].editor); }, edit_offsets_,
      edit_index_);
  BuildCsr(
      editors_.size(), interactions_.size(),
      [&](std::size_t i, auto emit) {
        emit(interactions_[i].source);
        emit(interactions_[i].target);
      },
      interaction_offsets_, interaction_index_);
}

CorpusRecords Corpus::ToRecords() const {
  CorpusRecords out;
  out.editors.reserve(editors_.size());
  for (const auto& e : editors_) out.editors.push_back({e.id, e.registered_at});
  for (const auto& a : articles_) {
    ArticleRecord r;
    r.article_id = a.id;
    for (CategoryIndex cat : a.categories) r.categories.push_back(categories_[cat]);
    for (ProjectIndex p : a.in_scope_of) r.in_scope_of.push_back(projects_[p].id);
    out.articles.push_back(std::move(r));
  }
  for (const auto& p : projects_) {
    ProjectRecord r;
    r.project_id = p.id;
    r.name = p.name;
    for (EditorIndex m : p.members) r.members.push_back(editors_[m].id);
    for (EditorIndex o : p.organizers) r.organizers.push_back(editors_[o].id);
    out.projects.push_back(std::move(r));
  }
  out.edits.reserve(edits_.size());
  for (const auto& e : edits_) {
    out.edits.push_back({editors_[e.editor].id, articles_[e.article].id,
                         e.timestamp, e.reverted});
  }
  for (const auto& x : interactions_) {
    out.interactions.push_back({editors_[x.source].id, editors_[x.target].id,
                                x.timestamp, x.kind});
  }
  return out;
}

CorpusCounts Corpus::counts() const {
  return {editors_.size(),  edits_.size(),        articles_.size(),
          projects_.size(), interactions_.size(), categories_.size()};
}

std::optional<EditorIndex> Corpus::FindEditor(std::string_view id) const {
  return FindSorted(editors_, id, [](const Editor& x) -> const std::string& { return x.id; });
}
std::optional<ArticleIndex> Corpus::FindArticle(std::string_view id) const {
  return FindSorted(articles_, id, [](const Article& x) -> const std::string& { return x.id; });
}
std::optional<ProjectIndex> Corpus::FindProject(std::string_view id) const {
  return FindSorted(projects_, id, [](const Project& x) -> const std::string& { return x.id; });
}
std::optional<CategoryIndex> Corpus::FindCategory(std::string_view label) const {
  return FindSorted(categories_, label, [](const std::string& x) -> const std::string& { return x; });
}

EditorIndex Corpus::EditorIndexOf(std::string_view id) const {
  auto e = FindEditor(id);
  if (!e) throw UnknownIdError("editor", id);
  return *e;
}

ProjectIndex Corpus::ProjectIndexOf(std::string_view id) const {
  auto p = FindProject(id);
  if (!p) throw UnknownIdError("project", id);
  return *p;
}

std::span<const std::uint32_t> Corpus::EditsOf(EditorIndex editor) const {
  return std::span<const std::uint32_t>(edit_index_)
      .subspan(edit_offsets_[editor],
               edit_offsets_[editor + 1] - edit_offsets_[editor]);
}

std::span<const std::uint32_t> Corpus::InteractionsOf(EditorIndex editor) const {
  return std::span<const std::uint32_t>(interaction_index_)
      .subspan(interaction_offsets_[editor],
               interaction_offsets_[editor + 1] - interaction_offsets_[editor]);
}

bool Corpus::IsMember(EditorIndex editor, ProjectIndex project) const {
  const auto& m = projects_[project].members;
  return std::binary_search(m.begin(), m.end(), editor);
}

Corpus Corpus::TruncatedAt(Instant cutoff) const {
  Corpus c;
  c.as_of_ = cutoff;
  c.categories_ = categories_;
  c.editors_ = editors_;
  c.articles_ = articles_;
  c.projects_ = projects_;
  for (const auto& e : edits_) {
    if (e.timestamp < cutoff) c.edits_.push_back(e);
  }
  for (const auto& x : interactions_) {
    if (x.timestamp < cutoff) c.interactions_.push_back(x);
  }
  c.BuildIndexes();
  return c;
}

bool Corpus::operator==(const Corpus& other) const {
  return as_of_ == other.as_of_ && categories_ == other.categories_ &&
         editors_ == other.editors_ && articles_ == other.articles_ &&
         projects_ == other.projects_ && edits_ == other.edits_ &&
         interactions_ == other.interactions_;
}

}  // namespace wikirec
