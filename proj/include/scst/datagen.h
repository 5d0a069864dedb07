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

#ifndef SCST_DATAGEN_H_
#define SCST_DATAGEN_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scst/corpus.h"

namespace scst {

struct DataGenOptions {
  int sentiment_train = 1000;
  int sentiment_test = 200;
  int qa_train = 1000;
  int qa_test = 200;
};

struct SentimentExample {
  DepTree tree;
  int label = 0;
};

struct QaStory {
  std::vector<DepTree> lines;  // story sentences, question last
  std::vector<ExternalTriplet> external;  // sent_id = line number in story
  std::string answer;
  std::vector<int> supporting;  // 1-based line numbers
};

// One parsed review sentence with a sentiment-bearing main clause and, at
// times, a neutral conjunct clause.
SentimentExample GenerateSentimentExample(int label, std::mt19937_64& rng);

// Two spatial facts over three of the four rooms, up to two distractor
// sentences with entity placeholders, and one uniquely answerable question.
QaStory GenerateQaStory(std::mt19937_64& rng);

inline const std::vector<std::string>& QaLocations() {
  static const std::vector<std::string> kLocations = {"hallway", "bathroom",
                                                      "bedroom", "kitchen"};
  return kLocations;
}

// Writes both corpora, the reference table and default configs into `dir`.
void GenerateDeskData(const std::filesystem::path& dir, uint64_t seed,
                      const DataGenOptions& options = {});

}  // namespace scst

#endif  // SCST_DATAGEN_H_
