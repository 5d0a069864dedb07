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

#include "scst/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "scst/error.h"

namespace scst {
namespace {

std::vector<std::string_view> SplitLines(std::string_view content) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < content.size()) lines.push_back(content.substr(start));
      break;
    }
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<int> ToInt(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string Where(const std::string& source, size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

}  // namespace

int DepTree::root() const {
  for (const DepToken& t : tokens) {
    if (t.head == 0) return t.id;
  }
  return 0;
}

std::vector<int> DepTree::children(int id) const {
  std::vector<int> out;
  for (const DepToken& t : tokens) {
    if (t.head == id) out.push_back(t.id);
  }
  return out;
}

std::string DepTree::text() const {
  std::string out;
  for (const DepToken& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.form;
  }
  return out;
}

void ValidateTree(const DepTree& tree) {
  const int n = tree.size();
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const DepToken& t = tree.tokens[i];
    if (t.id != i + 1) {
      throw ValidationError("sentence " + tree.sent_id + ": token ids must be " +
                            "consecutive from 1, found " + std::to_string(t.id));
    }
    if (t.upos.empty()) {
      throw ValidationError("sentence " + tree.sent_id + ": token " +
                            std::to_string(t.id) + " has an empty UPOS tag");
    }
    if (t.head < 0 || t.head > n) {
      throw StructureError("sentence " + tree.sent_id + ": token " +
                           std::to_string(t.id) + " points at missing head " +
                           std::to_string(t.head));
    }
    if (t.head == t.id) {
      throw StructureError("sentence " + tree.sent_id + ": token " +
                           std::to_string(t.id) + " is its own head");
    }
    if (t.head == 0) ++roots;
  }
  if (n > 0 && roots != 1) {
    throw StructureError("sentence " + tree.sent_id + ": expected exactly one " +
                         "root, found " + std::to_string(roots));
  }
  // Every head chain has to reach the root within n hops.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int hops = 0;
    while (cur != 0) {
      cur = tree.token(cur).head;
      if (++hops > n) {
        throw StructureError("sentence " + tree.sent_id +
                             ": cyclic heads through token " +
                             std::to_string(i));
      }
    }
  }
}

std::vector<DepTree> ParseConllu(std::string_view content,
                                 const std::string& source) {
  std::vector<DepTree> trees;
  DepTree current;
  bool open = false;
  auto flush = [&]() {
    if (open && !current.tokens.empty()) {
      if (current.sent_id.empty()) {
        current.sent_id = std::to_string(trees.size() + 1);
      }
      ValidateTree(current);
      trees.push_back(std::move(current));
    }
    current = DepTree{};
    open = false;
  };

  std::vector<std::string_view> lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    size_t line_no = i + 1;
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    open = true;
    if (line.front() == '#') {
      std::string_view body = Trim(line.substr(1));
      if (body.starts_with("sent_id")) {
        size_t eq = body.find('=');
        if (eq != std::string_view::npos) {
          current.sent_id = std::string(Trim(body.substr(eq + 1)));
        }
      }
      continue;
    }
    std::vector<std::string_view> cols = SplitTabs(line);
    if (cols.size() != 10) {
      throw ParseError(Where(source, line_no) + ": expected 10 columns, got " +
                       std::to_string(cols.size()));
    }
    if (cols[0].find('-') != std::string_view::npos ||
        cols[0].find('.') != std::string_view::npos) {
      continue;  // multiword range or empty node
    }
    std::optional<int> id = ToInt(cols[0]);
    if (!id) {
      throw ParseError(Where(source, line_no) + ": non-integer ID '" +
                       std::string(cols[0]) + "'");
    }
    std::optional<int> head = ToInt(cols[6]);
    if (!head) {
      throw ParseError(Where(source, line_no) + ": non-integer HEAD '" +
                       std::string(cols[6]) + "'");
    }
    DepToken tok;
    tok.id = *id;
    tok.form = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    tok.upos = std::string(cols[3]);
    tok.head = *head;
    tok.deprel = std::string(cols[7]);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return trees;
}

std::vector<DepTree> LoadConllu(const std::filesystem::path& path) {
  return ParseConllu(ReadFile(path), path.string());
}

std::string WriteConllu(const std::vector<DepTree>& trees) {
  std::ostringstream out;
  for (const DepTree& tree : trees) {
    out << "# sent_id = " << tree.sent_id << "\n";
    for (const DepToken& t : tree.tokens) {
      auto or_blank = [](const std::string& s) {
        return s.empty() ? std::string("_") : s;
      };
      out << t.id << '\t' << t.form << '\t' << or_blank(t.lemma) << '\t'
          << t.upos << "\t_\t_\t" << t.head << '\t' << t.deprel << "\t_\t_\n";
    }
    out << "\n";
  }
  return out.str();
}

std::vector<ExternalTriplet> ParseExternalTriplets(std::string_view content,
                                                   const std::string& source) {
  std::vector<ExternalTriplet> out;
  std::vector<std::string_view> lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(Where(source, i + 1) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(Where(source, i + 1) + ": expected a JSON object");
    }
    ExternalTriplet t;
    for (auto [key, field] :
         {std::pair{"sent_id", &t.sent_id}, std::pair{"head", &t.head},
          std::pair{"relation", &t.relation}, std::pair{"tail", &t.tail}}) {
      auto it = obj.find(key);
      if (it == obj.end()) {
        throw ParseError(Where(source, i + 1) + ": missing key \"" + key +
                         "\"");
      }
      if (!it->is_string()) {
        throw ParseError(Where(source, i + 1) + ": key \"" + key +
                         "\" must be a string");
      }
      *field = it->get<std::string>();
    }
    if (auto it = obj.find("source"); it != obj.end() && it->is_string()) {
      t.source = it->get<std::string>();
    }
    for (auto [key, field] : {std::pair{"head", &t.head},
                              std::pair{"relation", &t.relation},
                              std::pair{"tail", &t.tail}}) {
      if (Trim(*field).empty()) {
        throw ValidationError(Where(source, i + 1) + ": empty \"" + key +
                              "\"");
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ExternalTriplet> LoadExternalTriplets(
    const std::filesystem::path& path) {
  return ParseExternalTriplets(ReadFile(path), path.string());
}

std::string_view TaskKindName(TaskKind kind) {
  return kind == TaskKind::kSentiment ? "sentiment" : "qa";
}

TaskKind ParseTaskKind(std::string_view name) {
  if (name == "sentiment") return TaskKind::kSentiment;
  if (name == "qa") return TaskKind::kQa;
  throw ValidationError("unknown task '" + std::string(name) + "'");
}

std::vector<TaskSample> BuildTaskDataset(std::string_view content,
                                         TaskKind task,
                                         const std::vector<DepTree>& parses,
                                         const std::string& source) {
  std::unordered_map<std::string, const DepTree*> by_id;
  for (const DepTree& t : parses) by_id[t.sent_id] = &t;

  std::vector<std::string> missing;
  auto lookup = [&](const std::string& key) -> const DepTree* {
    auto it = by_id.find(key);
    if (it == by_id.end()) {
      missing.push_back(key);
      return nullptr;
    }
    return it->second;
  };

  std::vector<TaskSample> samples;
  std::vector<std::string_view> lines = SplitLines(content);
  if (task == TaskKind::kSentiment) {
    for (size_t i = 0; i < lines.size(); ++i) {
      std::string_view line = Trim(lines[i]);
      if (line.empty()) continue;
      std::vector<std::string_view> cols = SplitTabs(line);
      if (cols.size() != 2) {
        throw ParseError(Where(source, i + 1) +
                         ": expected text_id<TAB>label");
      }
      std::optional<int> label = ToInt(Trim(cols[1]));
      if (!label) {
        throw ParseError(Where(source, i + 1) + ": non-integer label");
      }
      if (*label < 0 || *label >= kSentimentClasses) {
        throw ValidationError(Where(source, i + 1) + ": label " +
                              std::to_string(*label) +
                              " outside the class set");
      }
      TaskSample s;
      s.id = std::string(Trim(cols[0]));
      s.label = *label;
      if (const DepTree* tree = lookup(s.id)) s.text_trees.push_back(*tree);
      samples.push_back(std::move(s));
    }
  } else {
    // bAbI: "<n> <text>" for story lines and
    // "<n> <question>\t<answer>\t<supporting ids>" for questions.
    int story = 0;
    int prev_line = 0;
    std::vector<std::pair<int, const DepTree*>> story_lines;
    for (size_t i = 0; i < lines.size(); ++i) {
      std::string_view line = Trim(lines[i]);
      if (line.empty()) continue;
      size_t sp = line.find(' ');
      std::optional<int> line_no =
          sp == std::string_view::npos ? std::nullopt : ToInt(line.substr(0, sp));
      if (!line_no || *line_no < 1) {
        throw ParseError(Where(source, i + 1) + ": missing line number");
      }
      if (*line_no == 1 || *line_no <= prev_line) {
        ++story;
        story_lines.clear();
      }
      prev_line = *line_no;
      std::string key = std::to_string(story) + ":" + std::to_string(*line_no);
      std::vector<std::string_view> cols = SplitTabs(line.substr(sp + 1));
      const DepTree* tree = lookup(key);
      if (cols.size() == 1) {
        story_lines.emplace_back(*line_no, tree);
        continue;
      }
      if (cols.size() < 2) {
        throw ParseError(Where(source, i + 1) + ": malformed question line");
      }
      TaskSample s;
      s.id = key;
      s.answer = std::string(Trim(cols[1]));
      if (s.answer.empty()) {
        throw ValidationError(Where(source, i + 1) + ": empty answer");
      }
      if (cols.size() >= 3) {
        std::istringstream ids{std::string(cols[2])};
        int id;
        while (ids >> id) s.supporting_lines.push_back(id);
      }
      if (tree) s.question_tree = *tree;
      for (const auto& [no, t] : story_lines) {
        if (t) s.text_trees.push_back(*t);
      }
      samples.push_back(std::move(s));
    }
  }

  if (!missing.empty()) {
    std::string msg = source + ": no parse for sent_id(s):";
    for (const std::string& id : missing) msg += " " + id;
    throw ValidationError(msg);
  }
  for (const TaskSample& s : samples) {
    if (s.text_trees.empty() && task == TaskKind::kSentiment) {
      throw ValidationError(source + ": sample " + s.id + " has no text");
    }
  }
  return samples;
}

std::vector<TaskSample> LoadTaskDataset(const std::filesystem::path& path,
                                        TaskKind task,
                                        const std::filesystem::path& conllu) {
  return BuildTaskDataset(ReadFile(path), task, LoadConllu(conllu),
                          path.string());
}

const std::string* RefTable::Find(const std::string& placeholder) const {
  auto it = entries.find(placeholder);
  return it == entries.end() ? nullptr : &it->second;
}

bool IsEntityPlaceholder(std::string_view token) {
  constexpr std::string_view kPrefix = "@entity";
  if (!token.starts_with(kPrefix) || token.size() == kPrefix.size()) {
    return false;
  }
  return std::all_of(token.begin() + kPrefix.size(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

RefTable ParseRefTable(std::string_view content, const std::string& source) {
  RefTable table;
  std::vector<std::string_view> lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string_view> cols = SplitTabs(lines[i]);
    if (cols.size() != 2) {
      throw ParseError(Where(source, i + 1) +
                       ": expected placeholder<TAB>surface");
    }
    std::string key(Trim(cols[0]));
    if (!IsEntityPlaceholder(key)) {
      throw ValidationError(Where(source, i + 1) + ": malformed placeholder '" +
                            key + "'");
    }
    auto [it, inserted] = table.entries.emplace(key, std::string(Trim(cols[1])));
    if (!inserted) {
      throw ValidationError(Where(source, i + 1) + ": duplicate placeholder '" +
                            key + "'");
    }
  }
  return table;
}

RefTable LoadRefTable(const std::filesystem::path& path) {
  return ParseRefTable(ReadFile(path), path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace scst
