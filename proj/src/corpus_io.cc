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

#include <fstream>

#include "wikirec/corpus.h"
#include "wikirec/jsonl.h"

namespace wikirec {
namespace {

template <typename Fn>
void ReadFile(const std::filesystem::path& path, Fn per_record) {
  const std::string file = path.filename().string();
  if (!std::filesystem::exists(path)) {
    throw CorpusError(CorpusError::Kind::kIo, "missing trace file " + path.string(),
                      file);
  }
  std::size_t current_line = 0;
  try {
    ForEachJsonLine(path, [&](const Json& obj, std::size_t line) {
      current_line = line;
      per_record(obj);
    });
  } catch (const RecordError& e) {
    throw CorpusError(CorpusError::Kind::kMalformed, file + ": " + e.what(), file,
                      current_line, e.field());
  } catch (const CorpusError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw CorpusError(CorpusError::Kind::kIo, e.what(), file);
  }
}

void WriteLines(const std::filesystem::path& path,
                const std::function<void(std::ofstream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CorpusError(CorpusError::Kind::kIo, "cannot write " + path.string(),
                      path.filename().string());
  }
  body(out);
  out.flush();
  if (!out) {
    throw CorpusError(CorpusError::Kind::kIo, "write failed for " + path.string(),
                      path.filename().string());
  }
}

}  // namespace

CorpusPaths CorpusPaths::InDirectory(const std::filesystem::path& dir) {
  return {dir / "editors.jsonl", dir / "edits.jsonl", dir / "articles.jsonl",
          dir / "projects.jsonl", dir / "interactions.jsonl"};
}

CorpusRecords ReadCorpusRecords(const CorpusPaths& paths) {
  CorpusRecords r;
  ReadFile(paths.editors, [&](const Json& o) {
    r.editors.push_back(
        {RequireString(o, "editor_id"), RequireInstant(o, "registered_at")});
  });
  ReadFile(paths.edits, [&](const Json& o) {
    r.edits.push_back({RequireString(o, "editor_id"), RequireString(o, "article_id"),
                       RequireInstant(o, "timestamp"), RequireBool(o, "reverted")});
  });
  ReadFile(paths.articles, [&](const Json& o) {
    r.articles.push_back({RequireString(o, "article_id"),
                          RequireStringArray(o, "categories"),
                          RequireStringArray(o, "in_scope_of")});
  });
  ReadFile(paths.projects, [&](const Json& o) {
    r.projects.push_back({RequireString(o, "project_id"), RequireString(o, "name"),
                          RequireStringArray(o, "members"),
                          RequireStringArray(o, "organizers")});
  });
  ReadFile(paths.interactions, [&](const Json& o) {
    const std::string& kind_name = RequireString(o, "kind");
    auto kind = ParseInteractionKind(kind_name);
    if (!kind) {
      throw RecordError("kind", "field \"kind\" must be one of talk_message, "
                                "co_edit, thanks (got \"" + kind_name + "\")");
    }
    r.interactions.push_back({RequireString(o, "source"), RequireString(o, "target"),
                              RequireInstant(o, "timestamp"), *kind});
  });
  return r;
}

Corpus LoadCorpus(const CorpusPaths& paths, Instant as_of) {
  return Corpus::FromRecords(ReadCorpusRecords(paths), as_of);
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const CorpusPaths paths = CorpusPaths::InDirectory(dir);
  const auto& editors = corpus.editors();
  const auto& categories = corpus.categories();

  WriteLines(paths.editors, [&](std::ofstream& out) {
    for (const auto& e : editors) {
      out << ToJsonLine(Json{{"editor_id", e.id},
                             {"registered_at", FormatInstant(e.registered_at)}});
    }
  });
  WriteLines(paths.edits, [&](std::ofstream& out) {
    for (const auto& e : corpus.edits()) {
      out << ToJsonLine(Json{{"editor_id", editors[e.editor].id},
                             {"article_id", corpus.article(e.article).id},
                             {"timestamp", FormatInstant(e.timestamp)},
                             {"reverted", e.reverted}});
    }
  });
  WriteLines(paths.articles, [&](std::ofstream& out) {
    for (const auto& a : corpus.articles()) {
      Json cats = Json::array();
      for (CategoryIndex c : a.categories) cats.push_back(categories[c]);
      Json scope = Json::array();
      for (ProjectIndex p : a.in_scope_of) scope.push_back(corpus.project(p).id);
      out << ToJsonLine(
          Json{{"article_id", a.id}, {"categories", cats}, {"in_scope_of", scope}});
    }
  });
  WriteLines(paths.projects, [&](std::ofstream& out) {
    for (const auto& p : corpus.projects()) {
      Json members = Json::array();
      for (EditorIndex m : p.members) members.push_back(editors[m].id);
      Json organizers = Json::array();
      for (EditorIndex o : p.organizers) organizers.push_back(editors[o].id);
      out << ToJsonLine(Json{{"project_id", p.id},
                             {"name", p.name},
                             {"members", members},
                             {"organizers", organizers}});
    }
  });
  WriteLines(paths.interactions, [&](std::ofstream& out) {
    for (const auto& x : corpus.interactions()) {
      out << ToJsonLine(Json{{"source", editors[x.source].id},
                             {"target", editors[x.target].id},
                             {"timestamp", FormatInstant(x.timestamp)},
                             {"kind", std::string(InteractionKindName(x.kind))}});
    }
  });
}

}  // namespace wikirec
