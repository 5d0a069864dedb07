// Copyright 2026 The SCST Authors.
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

#ifndef SCST_CORPUS_H_
#define SCST_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scst {

// One token row of a CoNLL-U sentence.
struct DepToken {
  int id = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  int head = 0;  // 0 marks the root
  std::string deprel;

  bool operator==(const DepToken&) const = default;
};

// Dependency parse of one sentence. Token i (1-based) lives at tokens[i - 1].
struct DepTree {
  std::string sent_id;
  std::vector<DepToken> tokens;

  const DepToken& token(int id) const { return tokens.at(id - 1); }
  int size() const { return static_cast<int>(tokens.size()); }
  int root() const;
  std::vector<int> children(int id) const;
  // Surface forms joined by single spaces.
  std::string text() const;

  bool operator==(const DepTree&) const = default;
};

// Checks ids, head references, the single root and acyclicity. Throws
// StructureError (graph defects) or ValidationError (token-level defects).
void ValidateTree(const DepTree& tree);

// CoNLL-U reading/writing. Multiword ranges ("1-2") and empty nodes ("1.1")
// are skipped.
std::vector<DepTree> ParseConllu(std::string_view content,
                                 const std::string& source = "<memory>");
std::vector<DepTree> LoadConllu(const std::filesystem::path& path);
std::string WriteConllu(const std::vector<DepTree>& trees);

struct ExternalTriplet {
  std::string sent_id;
  std::string head;
  std::string relation;
  std::string tail;
  std::string source = "external";

  bool operator==(const ExternalTriplet&) const = default;
};

std::vector<ExternalTriplet> ParseExternalTriplets(
    std::string_view content, const std::string& source = "<memory>");
std::vector<ExternalTriplet> LoadExternalTriplets(
    const std::filesystem::path& path);

enum class TaskKind { kSentiment, kQa };

std::string_view TaskKindName(TaskKind kind);
TaskKind ParseTaskKind(std::string_view name);

inline constexpr int kSentimentClasses = 2;

struct TaskSample {
  std::string id;
  std::vector<DepTree> text_trees;
  // Sentiment only.
  std::optional<int> label;
  // QA only.
  std::optional<DepTree> question_tree;
  std::string answer;
  std::vector<int> supporting_lines;
};

// Loads a sentiment TSV (text_id, label) or a bAbI-format QA file. Parses
// come from `conllu_path`, keyed by text_id (sentiment) or "story:line" (QA).
std::vector<TaskSample> LoadTaskDataset(const std::filesystem::path& path,
                                        TaskKind task,
                                        const std::filesystem::path& conllu_path);
std::vector<TaskSample> BuildTaskDataset(std::string_view content,
                                         TaskKind task,
                                         const std::vector<DepTree>& parses,
                                         const std::string& source = "<memory>");

// Placeholder ("@entity<digits>") to surface string.
struct RefTable {
  std::map<std::string, std::string> entries;

  bool empty() const { return entries.empty(); }
  const std::string* Find(const std::string& placeholder) const;
};

bool IsEntityPlaceholder(std::string_view token);

RefTable ParseRefTable(std::string_view content,
                       const std::string& source = "<memory>");
RefTable LoadRefTable(const std::filesystem::path& path);

// Whole-file read; throws IoError.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace scst

#endif  // SCST_CORPUS_H_
