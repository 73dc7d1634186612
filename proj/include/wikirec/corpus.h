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

#ifndef WIKIREC_CORPUS_H_
#define WIKIREC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wikirec/time.h"

namespace wikirec {

using EditorIndex = std::uint32_t;
using ArticleIndex = std::uint32_t;
using ProjectIndex = std::uint32_t;
using CategoryIndex = std::uint32_t;

enum class InteractionKind { kTalkMessage, kCoEdit, kThanks };

std::string_view InteractionKindName(InteractionKind kind);
std::optional<InteractionKind> ParseInteractionKind(std::string_view name);

// Line records, exactly as they appear in the trace files.
struct EditorRegistration {
  std::string editor_id;
  Instant registered_at;
};

struct EditEvent {
  std::string editor_id;
  std::string article_id;
  Instant timestamp;
  bool reverted = false;
};

struct ArticleRecord {
  std::string article_id;
  std::vector<std::string> categories;
  std::vector<std::string> in_scope_of;
};

struct ProjectRecord {
  std::string project_id;
  std::string name;
  std::vector<std::string> members;
  std::vector<std::string> organizers;
};

struct InteractionRecord {
  std::string source;
  std::string target;
  Instant timestamp;
  InteractionKind kind = InteractionKind::kTalkMessage;
};

struct CorpusRecords {
  std::vector<EditorRegistration> editors;
  std::vector<EditEvent> edits;
  std::vector<ArticleRecord> articles;
  std::vector<ProjectRecord> projects;
  std::vector<InteractionRecord> interactions;
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind { kIo, kMalformed, kDanglingReference, kIntegrity, kDuplicate };

  CorpusError(Kind kind, std::string message, std::string file = {},
              std::size_t line = 0, std::string field = {});

  Kind kind() const { return kind_; }
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string file_;
  std::size_t line_;
  std::string field_;
};

// Raised by id lookups that must succeed (unknown editor, project, ...).
class UnknownIdError : public std::out_of_range {
 public:
  UnknownIdError(std::string_view what_kind, std::string_view id);
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

struct CorpusCounts {
  std::size_t editors = 0;
  std::size_t edits = 0;
  std::size_t articles = 0;
  std::size_t projects = 0;
  std::size_t interactions = 0;
  std::size_t categories = 0;

  bool operator==(const CorpusCounts&) const = default;
};

// Immutable, validated, index-addressed view of a trace corpus.
//
// Editors, articles, projects and category labels are kept sorted by id, so a
// record's index is stable for a given set of ids. Edits and interactions are
// stably sorted by timestamp (ties keep file order).
class Corpus {
 public:
  struct Editor {
    std::string id;
    Instant registered_at;
    bool operator==(const Editor&) const = default;
  };
  struct Article {
    std::string id;
    std::vector<CategoryIndex> categories;   // sorted, unique
    std::vector<ProjectIndex> in_scope_of;   // sorted, unique
    bool operator==(const Article&) const = default;
  };
  struct Project {
    std::string id;
    std::string name;
    std::vector<EditorIndex> members;      // sorted, unique
    std::vector<EditorIndex> organizers;   // sorted, unique, subset of members
    std::vector<ArticleIndex> scope;       // in-scope articles, sorted
    bool operator==(const Project&) const = default;
  };
  struct Edit {
    EditorIndex editor;
    ArticleIndex article;
    Instant timestamp;
    bool reverted;
    bool operator==(const Edit&) const = default;
  };
  struct Interaction {
    EditorIndex source;
    EditorIndex target;
    Instant timestamp;
    InteractionKind kind;
    bool operator==(const Interaction&) const = default;
  };

  Corpus() = default;

  // Validates and indexes `records`. Throws CorpusError on dangling
  // references, duplicate ids, organizers outside members, self-interactions,
  // empty ids or records time-stamped after `as_of`.
  static Corpus FromRecords(CorpusRecords records, Instant as_of);

  // Records in normalized order (ids sorted, edits time-sorted).
  CorpusRecords ToRecords() const;

  Instant as_of() const { return as_of_; }
  CorpusCounts counts() const;

  std::span<const Editor> editors() const { return editors_; }
  std::span<const Article> articles() const { return articles_; }
  std::span<const Project> projects() const { return projects_; }
  std::span<const Edit> edits() const { return edits_; }
  std::span<const Interaction> interactions() const { return interactions_; }
  std::span<const std::string> categories() const { return categories_; }

  const Editor& editor(EditorIndex i) const { return editors_[i]; }
  const Article& article(ArticleIndex i) const { return articles_[i]; }
  const Project& project(ProjectIndex i) const { return projects_[i]; }

  std::optional<EditorIndex> FindEditor(std::string_view id) const;
  std::optional<ArticleIndex> FindArticle(std::string_view id) const;
  std::optional<ProjectIndex> FindProject(std::string_view id) const;
  std::optional<CategoryIndex> FindCategory(std::string_view label) const;

  // Throwing lookups (UnknownIdError).
  EditorIndex EditorIndexOf(std::string_view id) const;
  ProjectIndex ProjectIndexOf(std::string_view id) const;

  // Indices into edits() for one editor, ascending by timestamp.
  std::span<const std::uint32_t> EditsOf(EditorIndex editor) const;
  // Indices into interactions() where the editor is source or target.
  std::span<const std::uint32_t> InteractionsOf(EditorIndex editor) const;

  bool IsMember(EditorIndex editor, ProjectIndex project) const;

  // Same editors, articles and projects; only edits and interactions strictly
  // before `cutoff` survive, and as_of becomes `cutoff`.
  Corpus TruncatedAt(Instant cutoff) const;

  bool operator==(const Corpus& other) const;

 private:
  void BuildIndexes();

  Instant as_of_{};
  std::vector<std::string> categories_;
  std::vector<Editor> editors_;
  std::vector<Article> articles_;
  std::vector<Project> projects_;
  std::vector<Edit> edits_;
  std::vector<Interaction> interactions_;

  // CSR adjacency: editor -> edit indices / interaction indices.
  std::vector<std::uint32_t> edit_offsets_;
  std::vector<std::uint32_t> edit_index_;
  std::vector<std::uint32_t> interaction_offsets_;
  std::vector<std::uint32_t> interaction_index_;
};

// Locations of the five line-delimited trace files.
struct CorpusPaths {
  std::filesystem::path editors;
  std::filesystem::path edits;
  std::filesystem::path articles;
  std::filesystem::path projects;
  std::filesystem::path interactions;

  // <dir>/editors.jsonl, <dir>/edits.jsonl, ...
  static CorpusPaths InDirectory(const std::filesystem::path& dir);
};

// Parses the trace files. Malformed lines raise CorpusError naming the file,
// the 1-based line number and the offending field.
CorpusRecords ReadCorpusRecords(const CorpusPaths& paths);

Corpus LoadCorpus(const CorpusPaths& paths, Instant as_of);

// Writes the corpus in normalized order. Re-loading the output yields a
// Corpus equal to `corpus`.
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace wikirec

#endif  // WIKIREC_CORPUS_H_
