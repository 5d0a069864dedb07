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

#include "scst/datagen.h"

#include <algorithm>

#include "json.hpp"
#include "scst/config.h"
#include "scst/extraction.h"
#include "scst/filtering.h"

namespace scst {
namespace {

template <typename T>
const T& Pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
}

bool Coin(double p, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Builds a tree token by token; heads are token ids and may point forward.
class TreeBuilder {
 public:
  int Add(const std::string& form, const std::string& upos,
          const std::string& deprel, int head = -1) {
    DepToken t;
    t.id = static_cast<int>(tokens_.size()) + 1;
    t.form = form;
    t.lemma = CaseFold(form);
    t.upos = upos;
    t.deprel = deprel;
    t.head = head;
    tokens_.push_back(t);
    return t.id;
  }
  void SetHead(int id, int head) { tokens_[id - 1].head = head; }
  int next_id() const { return static_cast<int>(tokens_.size()) + 1; }

  DepTree Finish(std::string sent_id) {
    DepTree tree;
    tree.sent_id = std::move(sent_id);
    tree.tokens = std::move(tokens_);
    tokens_.clear();
    ValidateTree(tree);
    return tree;
  }

 private:
  std::vector<DepToken> tokens_;
};

const std::vector<std::string> kPositiveAdjectives = {
    "wonderful", "great", "brilliant", "charming",
    "delightful", "superb", "moving", "excellent"};
const std::vector<std::string> kNegativeAdjectives = {
    "terrible", "awful", "boring", "dull", "clumsy", "weak", "tedious", "bland"};
const std::vector<std::string> kPositiveVerbs = {"loved", "enjoyed", "adored", "praised"};
const std::vector<std::string> kNegativeVerbs = {"hated", "disliked", "mocked", "despised"};
const std::vector<std::string> kNouns = {"movie", "film", "show", "story", "script",
                                         "sequel", "soundtrack", "performance"};
const std::vector<std::string> kObjectNouns = {"ending", "plot", "cast", "score",
                                               "finale", "premise"};
const std::vector<std::string> kNeutralAdjectives = {"new", "latest", "long", "second",
                                                     "final", "original"};
const std::vector<std::string> kNmodNouns = {"studio", "war", "family", "director"};
const std::vector<std::string> kNmodCases = {"from", "about"};
const std::vector<std::string> kAudiences = {"audience", "critics", "kids", "crowd"};
const std::vector<std::string> kNeutralVerbs = {"had", "offered", "delivered",
                                                "featured"};
const std::vector<std::string> kAdverbs = {"truly", "really", "quite"};
const std::vector<std::string> kOpeners = {"Honestly", "Overall", "Frankly"};
const std::vector<std::string> kTimeAdjectives = {"last", "this"};
const std::vector<std::string> kTimeNouns = {"night", "year", "week"};
const std::vector<std::string> kCrew = {"director", "studio", "crew", "writer"};
const std::vector<std::string> kCrewVerbs = {"used", "hired", "chose", "filmed"};
const std::vector<std::string> kCrewObjects = {"cast", "town", "camera", "house"};
const std::vector<std::string> kCrewAdjectives = {"small", "quiet", "new", "old"};

// Appends "the [adj] noun [from the N]" and returns the noun's id. The
// caller attaches the noun afterwards.
int AddNounPhrase(TreeBuilder& b, bool capital, const std::string& deprel,
                  std::mt19937_64& rng) {
  const int det = b.Add(capital ? "The" : "the", "DET", "det");
  int adj = 0;
  if (Coin(0.6, rng)) adj = b.Add(Pick(kNeutralAdjectives, rng), "ADJ", "amod");
  const int noun = b.Add(Pick(kNouns, rng), "NOUN", deprel);
  b.SetHead(det, noun);
  if (adj) b.SetHead(adj, noun);
  if (Coin(0.6, rng)) {
    const int c = b.Add(Pick(kNmodCases, rng), "ADP", "case");
    const int d2 = b.Add("the", "DET", "det");
    const int n2 = b.Add(Pick(kNmodNouns, rng), "NOUN", "nmod", noun);
    b.SetHead(c, n2);
    b.SetHead(d2, n2);
  }
  return noun;
}

DepTree BuildSentimentTree(int label, std::mt19937_64& rng) {
  TreeBuilder b;
  const auto& adjectives = label ? kPositiveAdjectives : kNegativeAdjectives;
  const auto& verbs = label ? kPositiveVerbs : kNegativeVerbs;
  std::vector<int> attach_to_root;
  if (Coin(0.4, rng)) {
    attach_to_root.push_back(b.Add(Pick(kOpeners, rng), "ADV", "advmod"));
    attach_to_root.push_back(b.Add(",", "PUNCT", "punct"));
  }
  const bool capital = attach_to_root.empty();
  int root = 0;
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: {  // the movie was truly wonderful
      const int subj = AddNounPhrase(b, capital, "nsubj", rng);
      const int cop = b.Add(Coin(0.5, rng) ? "was" : "is", "AUX", "cop");
      int adv = Coin(0.5, rng) ? b.Add(Pick(kAdverbs, rng), "ADV", "advmod") : 0;
      root = b.Add(Pick(adjectives, rng), "ADJ", "root", 0);
      b.SetHead(subj, root);
      b.SetHead(cop, root);
      if (adv) b.SetHead(adv, root);
      break;
    }
    case 1: {  // the film delivered a wonderful ending
      const int subj = AddNounPhrase(b, capital, "nsubj", rng);
      root = b.Add(Pick(kNeutralVerbs, rng), "VERB", "root", 0);
      b.SetHead(subj, root);
      const int det = b.Add("a", "DET", "det");
      const int adj = b.Add(Pick(adjectives, rng), "ADJ", "amod");
      const int obj = b.Add(Pick(kObjectNouns, rng), "NOUN", "obj", root);
      b.SetHead(det, obj);
      b.SetHead(adj, obj);
      break;
    }
    default: {  // the critics loved the new movie
      const int det = b.Add(capital ? "The" : "the", "DET", "det");
      const int subj = b.Add(Pick(kAudiences, rng), "NOUN", "nsubj");
      b.SetHead(det, subj);
      root = b.Add(Pick(verbs, rng), "VERB", "root", 0);
      b.SetHead(subj, root);
      const int obj = AddNounPhrase(b, false, "obj", rng);
      b.SetHead(obj, root);
      break;
    }
  }
  for (int id : attach_to_root) b.SetHead(id, root);
  if (Coin(0.5, rng)) {
    const int t_adj = b.Add(Pick(kTimeAdjectives, rng), "DET", "det");
    const int t_noun = b.Add(Pick(kTimeNouns, rng), "NOUN", "obl:tmod", root);
    b.SetHead(t_adj, t_noun);
  }
  if (Coin(0.6, rng)) {
    b.Add(",", "PUNCT", "punct", root);
    const int cc = b.Add("and", "CCONJ", "cc");
    const int det = b.Add("the", "DET", "det");
    const int subj = b.Add(Pick(kCrew, rng), "NOUN", "nsubj");
    b.SetHead(det, subj);
    const int verb = b.Add(Pick(kCrewVerbs, rng), "VERB", "conj", root);
    b.SetHead(cc, verb);
    b.SetHead(subj, verb);
    const int odet = b.Add("a", "DET", "det");
    const int oadj = b.Add(Pick(kCrewAdjectives, rng), "ADJ", "amod");
    const int obj = b.Add(Pick(kCrewObjects, rng), "NOUN", "obj", verb);
    b.SetHead(odet, obj);
    b.SetHead(oadj, obj);
  }
  b.Add(".", "PUNCT", "punct", root);
  return b.Finish("");
}

}  // namespace

SentimentExample GenerateSentimentExample(int label, std::mt19937_64& rng) {
  const auto& cues = label ? kPositiveAdjectives : kNegativeAdjectives;
  const auto& verbs = label ? kPositiveVerbs : kNegativeVerbs;
  TaskSpec spec;
  spec.task = TaskKind::kSentiment;
  // Redraw until the sentiment cue survives extraction and filtering, so the
  // label stays recoverable from the transmitted triplets.
  for (;;) {
    DepTree tree = BuildSentimentTree(label, rng);
    auto [kept, report] = FilterSemantics(ExtractSemantics(tree, {}, {}), spec);
    for (const Triplet& t : kept) {
      for (const std::string* part : {&t.head.text, &t.relation, &t.tail.text}) {
        for (const std::string& w : SplitWords(*part)) {
          if (std::find(cues.begin(), cues.end(), w) != cues.end() ||
              std::find(verbs.begin(), verbs.end(), w) != verbs.end()) {
            return {std::move(tree), label};
          }
        }
      }
    }
  }
}

namespace {

const std::vector<std::string> kDirections = {"north", "south", "east", "west"};
const std::vector<std::string> kPeople = {"Mary", "John", "Sandra", "Daniel"};
const std::vector<std::string> kMoveVerbs = {"went", "moved", "travelled"};
const std::vector<std::string> kElsewhere = {"park", "garage", "cinema", "garden"};

std::string Opposite(const std::string& d) {
  if (d == "north") return "south";
  if (d == "south") return "north";
  if (d == "east") return "west";
  return "east";
}

struct Fact {
  std::string a, dir, b;  // a is dir of b
};

// The A is D of the B .
DepTree FactTree(const Fact& f) {
  TreeBuilder b;
  b.Add("The", "DET", "det", 2);
  b.Add(f.a, "NOUN", "nsubj", 4);
  b.Add("is", "AUX", "cop", 4);
  b.Add(f.dir, "ADV", "root", 0);
  b.Add("of", "ADP", "case", 7);
  b.Add("the", "DET", "det", 7);
  b.Add(f.b, "NOUN", "nmod", 4);
  b.Add(".", "PUNCT", "punct", 4);
  return b.Finish("");
}

// What is D of the B ?
DepTree QuestionForHead(const std::string& dir, const std::string& tail) {
  TreeBuilder b;
  b.Add("What", "PRON", "nsubj", 3);
  b.Add("is", "AUX", "cop", 3);
  b.Add(dir, "ADV", "root", 0);
  b.Add("of", "ADP", "case", 6);
  b.Add("the", "DET", "det", 6);
  b.Add(tail, "NOUN", "nmod", 3);
  b.Add("?", "PUNCT", "punct", 3);
  return b.Finish("");
}

// What is the A D of ?
DepTree QuestionForTail(const std::string& head, const std::string& dir) {
  TreeBuilder b;
  b.Add("What", "PRON", "nmod", 5);
  b.Add("is", "AUX", "cop", 5);
  b.Add("the", "DET", "det", 4);
  b.Add(head, "NOUN", "nsubj", 5);
  b.Add(dir, "ADV", "root", 0);
  b.Add("of", "ADP", "case", 1);
  b.Add("?", "PUNCT", "punct", 5);
  return b.Finish("");
}

// @entityN went to the park .
DepTree DistractorTree(int entity, const std::string& verb,
                       const std::string& place) {
  TreeBuilder b;
  b.Add("@entity" + std::to_string(entity), "PROPN", "nsubj", 2);
  b.Add(verb, "VERB", "root", 0);
  b.Add("to", "ADP", "case", 5);
  b.Add("the", "DET", "det", 5);
  b.Add(place, "NOUN", "obl", 2);
  b.Add(".", "PUNCT", "punct", 2);
  return b.Finish("");
}

}  // namespace

QaStory GenerateQaStory(std::mt19937_64& rng) {
  for (;;) {
    std::vector<std::string> rooms = QaLocations();
    std::shuffle(rooms.begin(), rooms.end(), rng);
    std::vector<Fact> facts;
    facts.push_back({rooms[0], Pick(kDirections, rng), rooms[1]});
    std::string d2 = Pick(kDirections, rng);
    if (Coin(0.5, rng)) {
      facts.push_back({rooms[2], d2, rooms[1]});
    } else {
      facts.push_back({rooms[1], d2, rooms[2]});
    }
    std::shuffle(facts.begin(), facts.end(), rng);

    std::vector<Fact> implied = facts;
    for (const Fact& f : facts) implied.push_back({f.b, Opposite(f.dir), f.a});

    const int pick = std::uniform_int_distribution<int>(0, 1)(rng);
    Fact asked = facts[pick];
    if (Coin(0.5, rng)) asked = {asked.b, Opposite(asked.dir), asked.a};
    const bool ask_head = Coin(0.5, rng);
    std::vector<std::string> answers;
    for (const Fact& f : implied) {
      if (ask_head && f.dir == asked.dir && f.b == asked.b) answers.push_back(f.a);
      if (!ask_head && f.dir == asked.dir && f.a == asked.a) answers.push_back(f.b);
    }
    std::sort(answers.begin(), answers.end());
    answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
    if (answers.size() != 1) continue;

    QaStory story;
    std::vector<int> fact_line(2, 0);
    const int distractors = std::uniform_int_distribution<int>(0, 2)(rng);
    std::vector<int> slots = {0, 1};  // 0, 1 = facts; 2.. = distractors
    for (int i = 0; i < distractors; ++i) {
      const size_t at = std::uniform_int_distribution<size_t>(0, slots.size())(rng);
      slots.insert(slots.begin() + static_cast<long>(at), 2 + i);
    }
    for (int slot : slots) {
      const int line = static_cast<int>(story.lines.size()) + 1;
      if (slot < 2) {
        story.lines.push_back(FactTree(facts[slot]));
        fact_line[slot] = line;
        continue;
      }
      const int who = std::uniform_int_distribution<int>(1, 4)(rng);
      const std::string place = Pick(kElsewhere, rng);
      story.lines.push_back(DistractorTree(who, Pick(kMoveVerbs, rng), place));
      ExternalTriplet ext;
      ext.head = kPeople[who - 1];
      ext.relation = "is in";
      ext.tail = "the " + place;
      story.external.push_back(ext);
      story.external.back().sent_id = std::to_string(line);
    }
    story.lines.push_back(ask_head ? QuestionForHead(asked.dir, asked.b)
                                   : QuestionForTail(asked.a, asked.dir));
    story.answer = answers[0];
    const Fact& source = facts[pick];
    for (int i = 0; i < 2; ++i) {
      if (facts[i].a == source.a && facts[i].b == source.b) {
        story.supporting.push_back(fact_line[i]);
      }
    }
    return story;
  }
}

namespace {

void WriteSentimentSplit(const std::filesystem::path& dir, const std::string& split,
                         int count, std::mt19937_64& rng) {
  std::vector<DepTree> trees;
  std::string tsv;
  for (int i = 0; i < count; ++i) {
    SentimentExample ex = GenerateSentimentExample(i % 2, rng);
    ex.tree.sent_id = split + "-" + std::to_string(i + 1);
    tsv += ex.tree.sent_id + "\t" + std::to_string(ex.label) + "\n";
    trees.push_back(std::move(ex.tree));
  }
  WriteFile(dir / ("sentiment_" + split + ".tsv"), tsv);
  WriteFile(dir / ("sentiment_" + split + ".conllu"), WriteConllu(trees));
}

void WriteQaSplit(const std::filesystem::path& dir, const std::string& split,
                  int count, std::mt19937_64& rng) {
  std::vector<DepTree> trees;
  std::string babi;
  std::string jsonl;
  for (int s = 1; s <= count; ++s) {
    QaStory story = GenerateQaStory(rng);
    const std::string prefix = std::to_string(s) + ":";
    for (size_t i = 0; i < story.lines.size(); ++i) {
      DepTree& tree = story.lines[i];
      tree.sent_id = prefix + std::to_string(i + 1);
      babi += std::to_string(i + 1) + " " + tree.text();
      if (i + 1 == story.lines.size()) {
        babi += "\t" + story.answer + "\t";
        for (size_t k = 0; k < story.supporting.size(); ++k) {
          babi += (k ? " " : "") + std::to_string(story.supporting[k]);
        }
      }
      babi += "\n";
      trees.push_back(tree);
    }
    for (const ExternalTriplet& ext : story.external) {
      nlohmann::json j = {{"sent_id", prefix + ext.sent_id},
                          {"head", ext.head},
                          {"relation", ext.relation},
                          {"tail", ext.tail}};
      jsonl += j.dump() + "\n";
    }
  }
  WriteFile(dir / ("qa_" + split + ".txt"), babi);
  WriteFile(dir / ("qa_" + split + ".conllu"), WriteConllu(trees));
  WriteFile(dir / ("qa_" + split + "_triplets.jsonl"), jsonl);
}

}  // namespace

void GenerateDeskData(const std::filesystem::path& dir, uint64_t seed,
                      const DataGenOptions& options) {
  // Separate streams per split keep each split stable when sizes change.
  std::seed_seq s1{seed, uint64_t{1}}, s2{seed, uint64_t{2}}, s3{seed, uint64_t{3}},
      s4{seed, uint64_t{4}};
  std::mt19937_64 r1(s1), r2(s2), r3(s3), r4(s4);
  WriteSentimentSplit(dir, "train", options.sentiment_train, r1);
  WriteSentimentSplit(dir, "test", options.sentiment_test, r2);
  WriteQaSplit(dir, "train", options.qa_train, r3);
  WriteQaSplit(dir, "test", options.qa_test, r4);
  std::string refs;
  for (size_t i = 0; i < kPeople.size(); ++i) {
    refs += "@entity" + std::to_string(i + 1) + "\t" + kPeople[i] + "\n";
  }
  WriteFile(dir / "entities.tsv", refs);
  WriteFile(dir / "sentiment.json", DefaultConfigJson(TaskKind::kSentiment).dump(2) + "\n");
  WriteFile(dir / "qa.json", DefaultConfigJson(TaskKind::kQa).dump(2) + "\n");
}

}  // namespace scst
