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

#include "scst/filtering.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "scst/error.h"

namespace scst {
namespace {

int Words(std::string_view s) { return static_cast<int>(SplitWords(s).size()); }

bool EntityWhitelisted(const EntitySpan& span,
                       const std::set<std::string>& whitelist) {
  // The syntactic head is checked first; determiners and other modifiers
  // would otherwise hide it, so any word of the span also counts.
  std::vector<std::string> words = SplitWords(span.text);
  for (const std::string& w : words) {
    if (whitelist.count(CaseFold(w))) return true;
  }
  return false;
}

}  // namespace

void TaskSpec::Validate() const {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ValidationError("keep_fraction must lie in (0, 1]");
  }
  if (!(relation_weight >= 0.0) || !std::isfinite(relation_weight)) {
    throw ValidationError("relation_weight must be a finite value >= 0");
  }
}

TaskSpec TaskSpec::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("knowledge base must be an object");
  TaskSpec spec;
  try {
    spec.task = ParseTaskKind(j.at("task").get<std::string>());
    spec.keep_fraction = j.value("keep_fraction", spec.keep_fraction);
    spec.relation_weight = j.value("relation_weight", spec.relation_weight);
    for (const auto& w : j.value("entity_whitelist", nlohmann::json::array())) {
      spec.entity_whitelist.insert(CaseFold(w.get<std::string>()));
    }
    for (const auto& w :
         j.value("relation_whitelist", nlohmann::json::array())) {
      spec.relation_whitelist.insert(CaseFold(w.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("knowledge base: ") + e.what());
  }
  spec.Validate();
  return spec;
}

nlohmann::json TaskSpec::ToJson() const {
  return {{"task", std::string(TaskKindName(task))},
          {"keep_fraction", keep_fraction},
          {"relation_weight", relation_weight},
          {"entity_whitelist", entity_whitelist},
          {"relation_whitelist", relation_whitelist}};
}

int TripletTokens(const Triplet& t) {
  return Words(t.head.text) + Words(t.relation) + Words(t.tail.text);
}

std::vector<Triplet> DedupEntityPairs(const std::vector<Triplet>& triplets) {
  std::vector<Triplet> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const Triplet& t : triplets) {
    if (seen.emplace(CaseFold(t.head.text), CaseFold(t.tail.text)).second) {
      out.push_back(t);
    }
  }
  return out;
}

double RelevanceScore(const Triplet& t, const TaskSpec& spec) {
  return Words(t.head.text) + Words(t.tail.text) +
         spec.relation_weight * Words(t.relation);
}

std::vector<Triplet> TaskFilter(const std::vector<Triplet>& triplets,
                                const TaskSpec& spec) {
  if (triplets.empty()) return {};
  std::vector<size_t> keep;
  if (spec.task == TaskKind::kSentiment) {
    std::vector<size_t> order(triplets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return RelevanceScore(triplets[a], spec) >
             RelevanceScore(triplets[b], spec);
    });
    size_t k = static_cast<size_t>(
        std::ceil(spec.keep_fraction * static_cast<double>(triplets.size())));
    k = std::clamp<size_t>(k, 1, triplets.size());
    keep.assign(order.begin(), order.begin() + static_cast<long>(k));
    std::sort(keep.begin(), keep.end());
  } else {
    const bool use_entities = !spec.entity_whitelist.empty();
    const bool use_relations = !spec.relation_whitelist.empty();
    for (size_t i = 0; i < triplets.size(); ++i) {
      const Triplet& t = triplets[i];
      bool entity_ok = EntityWhitelisted(t.head, spec.entity_whitelist) &&
                       EntityWhitelisted(t.tail, spec.entity_whitelist);
      bool relation_ok = spec.relation_whitelist.count(CaseFold(t.relation)) > 0;
      bool kept = (!use_entities && !use_relations) ||
                  (use_entities && entity_ok) ||
                  (use_relations && relation_ok);
      if (kept) keep.push_back(i);
    }
  }
  std::vector<Triplet> out;
  out.reserve(keep.size());
  for (size_t i : keep) out.push_back(triplets[i]);
  return out;
}

std::pair<std::vector<Triplet>, FilterReport> FilterSemantics(
    const std::vector<Triplet>& triplets, const TaskSpec& spec,
    std::optional<int> source_tokens) {
  std::vector<Triplet> kept = TaskFilter(DedupEntityPairs(triplets), spec);
  FilterReport report;
  report.input_count = static_cast<int>(triplets.size());
  report.kept_count = static_cast<int>(kept.size());
  if (source_tokens) {
    report.input_tokens = *source_tokens;
  } else {
    for (const Triplet& t : triplets) report.input_tokens += TripletTokens(t);
  }
  for (const Triplet& t : kept) report.kept_tokens += TripletTokens(t);
  if (report.input_tokens > 0) {
    report.reduction_pct =
        100.0 * (1.0 - static_cast<double>(report.kept_tokens) /
                           static_cast<double>(report.input_tokens));
  }
  return {std::move(kept), report};
}

}  // namespace scst
