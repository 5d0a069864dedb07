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


#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "scst/extraction.h"
#include "test_util.h"

namespace scst {
namespace {

using testing::MakeTree;

DepTree AteApple() {
  return MakeTree("s1", {{"Bob", "PROPN", 2, "nsubj"},
                         {"ate", "VERB", 0, "root"},
                         {"the", "DET", 5, "det"},
                         {"red", "ADJ", 5, "amod"},
                         {"apple", "NOUN", 2, "obj"}});
}

DepTree BeijingCapital() {
  return MakeTree("s1", {{"Beijing", "PROPN", 5, "nsubj"},
                         {"is", "AUX", 5, "cop"},
                         {"the", "DET", 5, "det"},
                         {"capital", "NOUN", 5, "compound"},
                         {"city", "NOUN", 0, "root"},
                         {"of", "ADP", 7, "case"},
                         {"China", "PROPN", 5, "nmod"}});
}

DepTree BornIn(const std::string& subject) {
  return MakeTree("s1", {{subject, "PROPN", 3, "nsubj:pass"},
                         {"was", "AUX", 3, "aux:pass"},
                         {"born", "VERB", 0, "root"},
                         {"in", "ADP", 5, "case"},
                         {"Beijing", "PROPN", 3, "obl"}});
}

Triplet Plain(const std::string& h, const std::string& r, const std::string& t,
              const std::string& upos = "VERB") {
  Triplet x;
  x.head = EntitySpan::Plain(h);
  x.relation = r;
  x.relation_head_upos = upos;
  x.tail = EntitySpan::Plain(t);
  x.provenance = "test";
  x.sent_id = "s1";
  return x;
}

TEST_CASE("subject verb object rule expands modifiers") {
  auto out = ExtractRuleTriplets(AteApple());
  REQUIRE(out.size() == 1);
  CHECK(out[0].head.text == "Bob");
  CHECK(out[0].relation == "ate");
  CHECK(out[0].tail.text == "the red apple");
  CHECK(out[0].tail.token_ids == std::vector<int>{3, 4, 5});
  CHECK(out[0].tail.head_id == 5);
  CHECK(out[0].relation_head_upos == "VERB");
  CHECK(out[0].provenance == kRuleSubjVerbObj);
}

TEST_CASE("copula rule keeps the auxiliary tag") {
  auto out = ExtractRuleTriplets(BeijingCapital());
  REQUIRE(out.size() == 1);
  CHECK(out[0].head.text == "Beijing");
  CHECK(out[0].relation == "is");
  CHECK(out[0].tail.text == "the capital city of China");
  CHECK(out[0].relation_head_upos == "AUX");
  CHECK(out[0].provenance == kRuleSubjCopPred);
  CHECK(LexicalCheck(out).size() == 1);
}

TEST_CASE("oblique rule joins verb and case marker") {
  auto out = ExtractRuleTriplets(BornIn("Bob"));
  REQUIRE(out.size() == 1);
  CHECK(out[0].head.text == "Bob");
  CHECK(out[0].relation == "born in");
  CHECK(out[0].tail.text == "Beijing");
  CHECK(out[0].provenance == kRuleSubjVerbObl);
}

TEST_CASE("single token tree yields nothing") {
  CHECK(ExtractRuleTriplets(MakeTree("s", {{"Hello", "INTJ", 0, "root"}}))
            .empty());
}

TEST_CASE("lexical check filters by relation tag") {
  CHECK(LexicalCheck({Plain("a", "r", "b", "VERB")}).size() == 1);
  CHECK(LexicalCheck({Plain("a", "r", "b", "AUX")}).size() == 1);
  CHECK(LexicalCheck({Plain("a", "r", "b", "NOUN")}).empty());
  CHECK(LexicalCheck({}).empty());
}

TEST_CASE("referential substitution") {
  RefTable table = ParseRefTable("@entity1\tBob\n");
  auto out = ReferentialSubstitute({Plain("@entity1", "born in", "Beijing")},
                                   table);
  REQUIRE(out.size() == 1);
  CHECK(out[0].head.text == "Bob");
  CHECK(out[0].tail.text == "Beijing");

  auto same = ReferentialSubstitute({Plain("Ann", "saw", "Bob")}, table);
  CHECK(same[0].head.text == "Ann");
  CHECK(same[0].tail.text == "Bob");

  std::vector<std::string> warnings;
  auto kept = ReferentialSubstitute({Plain("@entity9", "saw", "Bob")}, RefTable{},
                                    &warnings);
  CHECK(kept[0].head.text == "@entity9");
  CHECK(warnings.size() == 1);
}

TEST_CASE("rule triplets see substitution inside spans") {
  RefTable table = ParseRefTable("@entity1\tBob\n");
  auto out = ExtractSemantics(BornIn("@entity1"), {}, table);
  REQUIRE(out.size() == 1);
  CHECK(out[0].head.text == "Bob");
}

TEST_CASE("merge puts external triplets first") {
  std::vector<ExternalTriplet> ext = {
      {"s1", "China", "capital city", "Beijing"},
      {"s1", "China", "contain", "Beijing"},
      {"s1", "Bob", "born in", "Beijing"}};
  auto out = ExtractSemantics(BeijingCapital(), ext, RefTable{});
  REQUIRE(out.size() == 4);
  CHECK(out[0].provenance == "external");
  CHECK(out[0].relation == "capital city");
  CHECK(out[2].head.text == "Bob");
  CHECK(out[3].relation == "is");
  CHECK(out[3].tail.text == "the capital city of China");
}

TEST_CASE("merge keeps the first of case-folded duplicates") {
  std::vector<ExternalTriplet> ext = {{"s1", "bob", "ATE", " the red apple "}};
  auto out = ExtractSemantics(AteApple(), ext, RefTable{});
  REQUIRE(out.size() == 1);
  CHECK(out[0].provenance == "external");
}

TEST_CASE("empty inputs give empty output") {
  CHECK(ExtractSemantics(MakeTree("s", {{"Hi", "INTJ", 0, "root"}}), {},
                         RefTable{})
            .empty());
}

// Random trees over the deprels the rules look at.
DepTree RandomTree(std::mt19937_64& rng) {
  static const std::vector<std::string> kDeprels = {
      "nsubj", "obj",   "obl",  "nmod", "case", "det",      "amod",
      "cop",   "compound", "flat", "nummod", "nsubj:pass", "advmod"};
  static const std::vector<std::string> kUpos = {"VERB", "NOUN", "AUX",
                                                 "ADP",  "DET",  "PROPN"};
  const int n = std::uniform_int_distribution<int>(1, 10)(rng);
  std::vector<testing::Row> rows(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < n; ++i) {
    testing::Row& r = rows[order[i] - 1];
    r.form = "w" + std::to_string(order[i]);
    r.upos = kUpos[rng() % kUpos.size()];
    if (i == 0) {
      r.head = 0;
      r.deprel = "root";
    } else {
      r.head = order[rng() % i];
      r.deprel = kDeprels[rng() % kDeprels.size()];
    }
  }
  return MakeTree("r", rows);
}

TEST_CASE("extraction properties on random trees") {
  std::mt19937_64 rng(3);
  int produced = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    DepTree tree = RandomTree(rng);
    auto rules = ExtractRuleTriplets(tree);
    produced += static_cast<int>(rules.size());
    for (const Triplet& t : rules) {
      for (const EntitySpan* s : {&t.head, &t.tail}) {
        REQUIRE_FALSE(s->token_ids.empty());
        CHECK(std::is_sorted(s->token_ids.begin(), s->token_ids.end()));
        std::set<int> ids(s->token_ids.begin(), s->token_ids.end());
        CHECK(ids.count(s->head_id) == 1);
        // Connected: every member other than the head hangs off a member.
        for (int id : s->token_ids) {
          if (id == s->head_id) continue;
          CHECK(ids.count(tree.token(id).head) == 1);
        }
      }
    }
    auto once = LexicalCheck(rules);
    auto twice = LexicalCheck(once);
    CHECK(once.size() == twice.size());

    auto merged = ExtractSemantics(tree, {}, RefTable{});
    std::set<std::string> keys;
    for (const Triplet& t : merged) CHECK(keys.insert(TripletKey(t)).second);
    auto again = ExtractSemantics(tree, {}, RefTable{});
    REQUIRE(again.size() == merged.size());
    for (size_t i = 0; i < merged.size(); ++i) {
      CHECK(TripletKey(again[i]) == TripletKey(merged[i]));
    }
  }
  CHECK(produced > 20);
}

}  // namespace
}  // namespace scst
