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

#ifndef SCST_FILTERING_H_
#define SCST_FILTERING_H_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "scst/corpus.h"
#include "scst/extraction.h"

namespace scst {

// Knowledge-base entry shared by transmitter and receiver.
struct TaskSpec {
  TaskKind task = TaskKind::kSentiment;
  double keep_fraction = 0.5;    // sentiment: fraction of triplets kept
  double relation_weight = 2.0;  // sentiment: weight of relation length
  std::set<std::string> entity_whitelist;    // case-folded
  std::set<std::string> relation_whitelist;  // case-folded

  void Validate() const;
  static TaskSpec FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct FilterReport {
  int input_count = 0;
  int kept_count = 0;
  int input_tokens = 0;
  int kept_tokens = 0;
  double reduction_pct = 0.0;
};

// Word count of a triplet (head + relation + tail).
int TripletTokens(const Triplet& t);

// Keeps the first triplet of each ordered (head, tail) pair, case-folded.
std::vector<Triplet> DedupEntityPairs(const std::vector<Triplet>& triplets);

double RelevanceScore(const Triplet& t, const TaskSpec& spec);

std::vector<Triplet> TaskFilter(const std::vector<Triplet>& triplets,
                                const TaskSpec& spec);

// Step 1 then step 2. `source_tokens` is the token count of the original
// text; when absent the input triplets' own token count is used.
std::pair<std::vector<Triplet>, FilterReport> FilterSemantics(
    const std::vector<Triplet>& triplets, const TaskSpec& spec,
    std::optional<int> source_tokens = std::nullopt);

}  // namespace scst

#endif  // SCST_FILTERING_H_
