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

#ifndef SCST_PIPELINE_H_
#define SCST_PIPELINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "scst/channel.h"
#include "scst/classical.h"
#include "scst/config.h"
#include "scst/corpus.h"
#include "scst/filtering.h"
#include "scst/nn.h"
#include "scst/semcodec.h"
#include "scst/stm.h"

namespace scst {

// A group of words embedded into one transmitted QA vector.
struct Unit {
  std::vector<std::string> words;
  std::vector<TokenRole> roles;
};

// A task sample in the form one pipeline variant transmits.
struct PreparedSample {
  std::string id;
  TaskKind task = TaskKind::kSentiment;
  std::vector<std::string> sequence;  // sentiment: [CLS] ... [SEP]
  std::vector<Unit> units;            // QA: one unit per transmitted vector
  Unit question;                      // QA: receiver-side query
  int label = -1;                     // class, or answer index (-1 = unknown)
  std::string answer;
  std::string text;  // full text, what the classical chain sends
  FilterReport report;

  int transmitted_vectors() const {
    return static_cast<int>(task == TaskKind::kSentiment ? sequence.size()
                                                         : units.size());
  }
};

// Inputs that extraction draws on besides the parses.
struct ExtractionContext {
  std::map<std::string, std::vector<ExternalTriplet>> external;  // by sent_id
  RefTable refs;

  static ExtractionContext Load(const std::filesystem::path& triplets,
                                const std::filesystem::path& ref_table);
};

// Words of the sample's text trees joined by single spaces.
std::string SampleText(const TaskSample& sample);

// The question as a (head, relation, tail) unit when the rules find one,
// otherwise its plain words.
Unit QuestionUnit(const DepTree& question, const RefTable& refs);

Unit TripletUnit(const Triplet& t);

// scst: extraction then filtering; scst_nofilter: extraction only;
// fulltext and classical: every word. `answers` maps QA answers to labels.
PreparedSample PrepareSample(const TaskSample& sample, Variant variant,
                             const TaskSpec& spec, const ExtractionContext& ctx,
                             const std::vector<std::string>& answers,
                             std::vector<std::string>* warnings = nullptr);

// Receiver side of the classical chain: rebuilds a fulltext sample from
// (possibly corrupted) recovered text.
PreparedSample FromReceivedText(const PreparedSample& sent,
                                const std::string& received_text);

// Complex symbols a variant sends for one sample.
int64_t CountSymbols(const PreparedSample& sample, Variant variant,
                     int symbols_per_vector, const ClassicalCodes* codes);

std::vector<std::string> AnswerVocabulary(const std::vector<TaskSample>& train);
Vocab BuildTaskVocab(const std::vector<PreparedSample>& train, int min_freq);

// Noise realization for one transmission: channel kind, SNR and whether the
// channel is simulated at all.
struct ChannelSetting {
  bool noiseless = true;
  ChannelKind kind = ChannelKind::kAwgn;
  double snr_db = 0.0;
};

// Semantic codec + channel codec for one task; the trainable model.
class TaskSystem {
 public:
  TaskSystem(const ExperimentConfig& config, Vocab vocab,
             std::vector<std::string> answers, std::mt19937_64& rng);

  // Class or answer distribution. `model_rng` drives dropout, `channel_rng`
  // the channel.
  nn::Tensor Forward(const PreparedSample& sample, const ChannelSetting& channel,
                     bool training, std::mt19937_64& model_rng,
                     std::mt19937_64& channel_rng) const;
  int Predict(const PreparedSample& sample, const ChannelSetting& channel,
              std::mt19937_64& channel_rng) const;

  nn::ParamList Parameters() const;
  TaskKind task() const { return task_; }
  const Vocab& vocab() const { return vocab_; }
  const std::vector<std::string>& answers() const { return answers_; }
  int classes() const;

 private:
  nn::Tensor Transmit(const nn::Tensor& vector, const ChannelSetting& channel,
                      std::mt19937_64& channel_rng) const;

  TaskKind task_;
  Vocab vocab_;
  std::vector<std::string> answers_;
  std::unique_ptr<SentimentModel> sentiment_;
  StmConfig stm_config_;
  std::unique_ptr<StmParams> stm_;
  ChannelCodec codec_;
};

}  // namespace scst

#endif  // SCST_PIPELINE_H_
