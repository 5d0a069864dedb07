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

#include "scst/extraction.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace scst {
namespace {

constexpr std::array<std::string_view, 8> kModifierRelations = {
    "det", "amod", "compound", "nmod", "nmod:poss", "nummod", "case", "flat"};

bool IsModifier(const std::string& deprel) {
  return std::find(kModifierRelations.begin(), kModifierRelations.end(),
                   deprel) != kModifierRelations.end();
}

void CollectModifiers(const DepTree& tree, int id,
                      const std::vector<int>& exclude, std::vector<int>* out) {
  out->push_back(id);
  for (int child : tree.children(id)) {
    if (std::find(exclude.begin(), exclude.end(), child) != exclude.end()) {
      continue;
    }
    if (IsModifier(tree.token(child).deprel)) {
      CollectModifiers(tree, child, exclude, out);
    }
  }
}

std::vector<int> ChildrenWith(const DepTree& tree, int id,
                              std::initializer_list<std::string_view> rels) {
  std::vector<int> out;
  for (int child : tree.children(id)) {
    const std::string& rel = tree.token(child).deprel;
    if (std::find(rels.begin(), rels.end(), rel) != rels.end()) {
      out.push_back(child);
    }
  }
  return out;
}

// First case marker under `id`: direct children take priority over deeper
// descendants, ties broken by position.
int FindCaseMarker(const DepTree& tree, int id) {
  std::vector<int> direct = ChildrenWith(tree, id, {"case"});
  if (!direct.empty()) return direct.front();
  std::vector<int> frontier = tree.children(id);
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());
    std::vector<int> next;
    for (int c : frontier) {
      if (tree.token(c).deprel == "case") return c;
      for (int g : tree.children(c)) next.push_back(g);
    }
    frontier = std::move(next);
  }
  return 0;
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Substitute(const std::string& text, const RefTable& table,
                       std::vector<std::string>* warnings,
                       const std::string& sent_id) {
  std::vector<std::string> words = SplitWords(text);
  bool changed = false;
  for (std::string& w : words) {
    if (!IsEntityPlaceholder(w)) continue;
    if (const std::string* surface = table.Find(w)) {
      w = *surface;
      changed = true;
    } else if (warnings) {
      warnings->push_back("sentence " + sent_id + ": unresolved placeholder " +
                          w);
    }
  }
  if (!changed) return text;
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::string CaseFold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> SplitWords(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

EntitySpan ModifierSpan(const DepTree& tree, int id,
                        const std::vector<int>& exclude) {
  EntitySpan span;
  CollectModifiers(tree, id, exclude, &span.token_ids);
  std::sort(span.token_ids.begin(), span.token_ids.end());
  span.head_id = id;
  for (int t : span.token_ids) {
    if (!span.text.empty()) span.text += ' ';
    span.text += tree.token(t).form;
  }
  return span;
}

std::vector<Triplet> ExtractRuleTriplets(const DepTree& tree) {
  std::vector<Triplet> out;
  auto emit = [&](int subj, std::string relation, int rel_head, EntitySpan tail,
                  const char* rule) {
    Triplet t;
    t.head = ModifierSpan(tree, subj);
    t.relation = std::move(relation);
    t.relation_head_upos = tree.token(rel_head).upos;
    t.tail = std::move(tail);
    t.provenance = rule;
    t.sent_id = tree.sent_id;
    out.push_back(std::move(t));
  };

  for (const DepToken& v : tree.tokens) {
    if (v.upos != "VERB") continue;
    for (int s : ChildrenWith(tree, v.id, {"nsubj"})) {
      for (int o : ChildrenWith(tree, v.id, {"obj", "dobj"})) {
        emit(s, v.form, v.id, ModifierSpan(tree, o), kRuleSubjVerbObj);
      }
    }
  }
  for (const DepToken& p : tree.tokens) {
    std::vector<int> cops = ChildrenWith(tree, p.id, {"cop"});
    if (cops.empty()) continue;
    for (int c : cops) {
      for (int s : ChildrenWith(tree, p.id, {"nsubj"})) {
        emit(s, tree.token(c).form, c, ModifierSpan(tree, p.id),
             kRuleSubjCopPred);
      }
    }
  }
  for (const DepToken& v : tree.tokens) {
    if (v.upos != "VERB") continue;
    for (int s : ChildrenWith(tree, v.id, {"nsubj", "nsubj:pass"})) {
      for (int o : ChildrenWith(tree, v.id, {"obl", "nmod"})) {
        int m = FindCaseMarker(tree, o);
        if (m == 0) continue;
        emit(s, v.form + " " + tree.token(m).form, v.id,
             ModifierSpan(tree, o, {m}), kRuleSubjVerbObl);
      }
    }
  }
  return out;
}

std::vector<Triplet> LexicalCheck(const std::vector<Triplet>& triplets) {
  std::vector<Triplet> out;
  for (const Triplet& t : triplets) {
    if (t.relation_head_upos == "VERB" || t.relation_head_upos == "AUX") {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Triplet> ReferentialSubstitute(const std::vector<Triplet>& triplets,
                                           const RefTable& table,
                                           std::vector<std::string>* warnings) {
  std::vector<Triplet> out = triplets;
  for (Triplet& t : out) {
    t.head.text = Substitute(t.head.text, table, warnings, t.sent_id);
    t.relation = Substitute(t.relation, table, warnings, t.sent_id);
    t.tail.text = Substitute(t.tail.text, table, warnings, t.sent_id);
  }
  return out;
}

Triplet FromExternal(const ExternalTriplet& ext) {
  Triplet t;
  t.head = EntitySpan::Plain(ext.head);
  t.relation = ext.relation;
  t.tail = EntitySpan::Plain(ext.tail);
  t.provenance = ext.source.empty() ? "external" : ext.source;
  t.sent_id = ext.sent_id;
  return t;
}

std::string TripletKey(const Triplet& t) {
  std::string key = CaseFold(TrimView(t.head.text));
  key += '\x1f';
  key += CaseFold(TrimView(t.relation));
  key += '\x1f';
  key += CaseFold(TrimView(t.tail.text));
  return key;
}

std::vector<Triplet> ExtractSemantics(const DepTree& tree,
                                      const std::vector<ExternalTriplet>& external,
                                      const RefTable& table,
                                      std::vector<std::string>* warnings) {
  std::vector<Triplet> merged;
  for (const ExternalTriplet& ext : external) {
    if (ext.sent_id == tree.sent_id) merged.push_back(FromExternal(ext));
  }
  for (Triplet& t : ReferentialSubstitute(
           LexicalCheck(ExtractRuleTriplets(tree)), table, warnings)) {
    merged.push_back(std::move(t));
  }
  std::vector<Triplet> out;
  std::unordered_set<std::string> seen;
  for (Triplet& t : merged) {
    if (seen.insert(TripletKey(t)).second) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace scst
