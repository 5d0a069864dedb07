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

#ifndef SCST_EXTRACTION_H_
#define SCST_EXTRACTION_H_

#include <string>
#include <vector>

#include "scst/corpus.h"

namespace scst {

// A triplet component. Rule-extracted entities carry the token ids of their
// span in the source tree; external and relation strings leave them empty.
struct EntitySpan {
  std::vector<int> token_ids;  // sorted
  std::string text;
  int head_id = 0;

  bool is_plain() const { return token_ids.empty(); }
  static EntitySpan Plain(std::string text) {
    EntitySpan s;
    s.text = std::move(text);
    return s;
  }
};

struct Triplet {
  EntitySpan head;
  std::string relation;
  std::string relation_head_upos;
  EntitySpan tail;
  std::string provenance;  // "R1".."R3" or the external source tag
  std::string sent_id;
};

// Rule ids.
inline constexpr char kRuleSubjVerbObj[] = "R1";
inline constexpr char kRuleSubjCopPred[] = "R2";
inline constexpr char kRuleSubjVerbObl[] = "R3";

// `id` plus every descendant reachable through modifier relations
// (det, amod, compound, nmod, nmod:poss, nummod, case, flat).
EntitySpan ModifierSpan(const DepTree& tree, int id,
                        const std::vector<int>& exclude = {});

// Subject-verb-object, subject-copula-predicative and subject-verb-oblique
// patterns, applied in that order.
std::vector<Triplet> ExtractRuleTriplets(const DepTree& tree);

// Keeps triplets whose relation head is tagged VERB or AUX.
std::vector<Triplet> LexicalCheck(const std::vector<Triplet>& triplets);

// Replaces "@entity<digits>" tokens using `table`. Unresolved placeholders are
// left in place and reported through `warnings` when given.
std::vector<Triplet> ReferentialSubstitute(const std::vector<Triplet>& triplets,
                                           const RefTable& table,
                                           std::vector<std::string>* warnings =
                                               nullptr);

Triplet FromExternal(const ExternalTriplet& ext);

// Case-folded, trimmed (head, relation, tail) key used for duplicate removal.
std::string TripletKey(const Triplet& t);

// External triplets of this sentence first (file order), then rule triplets
// after the lexical check and substitution; first occurrence of each key wins.
std::vector<Triplet> ExtractSemantics(const DepTree& tree,
                                      const std::vector<ExternalTriplet>& external,
                                      const RefTable& table,
                                      std::vector<std::string>* warnings =
                                          nullptr);

// Lower-cases ASCII letters.
std::string CaseFold(std::string_view s);
// Whitespace tokenization.
std::vector<std::string> SplitWords(std::string_view s);

}  // namespace scst

#endif  // SCST_EXTRACTION_H_
