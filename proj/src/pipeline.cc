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

#include "scst/pipeline.h"

#include <algorithm>
#include <set>

#include "scst/error.h"
#include "scst/extraction.h"

namespace scst {

using nn::Tensor;

ExtractionContext ExtractionContext::Load(const std::filesystem::path& triplets,
                                          const std::filesystem::path& ref_table) {
  ExtractionContext ctx;
  if (!triplets.empty()) {
    for (ExternalTriplet& t : LoadExternalTriplets(triplets)) {
      ctx.external[t.sent_id].push_back(std::move(t));
    }
  }
  if (!ref_table.empty()) ctx.refs = LoadRefTable(ref_table);
  return ctx;
}

std::string SampleText(const TaskSample& sample) {
  std::string out;
  for (const DepTree& tree : sample.text_trees) {
    if (!out.empty()) out += ' ';
    out += tree.text();
  }
  return out;
}

Unit TripletUnit(const Triplet& t) {
  Unit u;
  auto add = [&u](const std::string& text, TokenRole role) {
    for (std::string& w : SplitWords(text)) {
      u.words.push_back(std::move(w));
      u.roles.push_back(role);
    }
  };
  add(t.head.text, TokenRole::kHead);
  add(t.relation, TokenRole::kRelation);
  add(t.tail.text, TokenRole::kTail);
  return u;
}

namespace {

Unit TextUnit(std::vector<std::string> words) {
  Unit u;
  u.roles.assign(words.size(), TokenRole::kText);
  u.words = std::move(words);
  return u;
}

std::vector<std::string> TreeWords(const DepTree& tree) {
  std::vector<std::string> words;
  for (const DepToken& t : tree.tokens) words.push_back(t.form);
  return words;
}

std::vector<std::string> FullSequence(const std::vector<std::string>& words) {
  std::vector<std::string> seq = {kClsToken};
  seq.insert(seq.end(), words.begin(), words.end());
  seq.push_back(kSepToken);
  return seq;
}

std::vector<Unit> WordUnits(const std::vector<std::string>& words) {
  std::vector<Unit> units;
  for (const std::string& w : words) units.push_back(TextUnit({w}));
  return units;
}

}  // namespace

Unit QuestionUnit(const DepTree& question, const RefTable& refs) {
  std::vector<Triplet> triplets = ExtractSemantics(question, {}, refs);
  if (!triplets.empty()) return TripletUnit(triplets.front());
  return TextUnit(TreeWords(question));
}

PreparedSample PrepareSample(const TaskSample& sample, Variant variant,
                             const TaskSpec& spec, const ExtractionContext& ctx,
                             const std::vector<std::string>& answers,
                             std::vector<std::string>* warnings) {
  PreparedSample out;
  out.id = sample.id;
  out.task = spec.task;
  out.text = SampleText(sample);
  if (spec.task == TaskKind::kSentiment) {
    out.label = sample.label.value_or(-1);
  } else {
    out.answer = sample.answer;
    auto it = std::find(answers.begin(), answers.end(), sample.answer);
    out.label = it == answers.end() ? -1 : static_cast<int>(it - answers.begin());
    if (!sample.question_tree) {
      throw ValidationError("qa sample " + sample.id + " has no question parse");
    }
    out.question = QuestionUnit(*sample.question_tree, ctx.refs);
  }

  std::vector<std::string> words;
  for (const DepTree& tree : sample.text_trees) {
    std::vector<std::string> w = TreeWords(tree);
    words.insert(words.end(), w.begin(), w.end());
  }
  const int source_tokens = static_cast<int>(words.size());

  if (variant == Variant::kFulltext || variant == Variant::kClassical) {
    out.report = {0, 0, source_tokens, source_tokens, 0.0};
    if (spec.task == TaskKind::kSentiment) {
      out.sequence = FullSequence(words);
    } else {
      out.units = WordUnits(words);
    }
    return out;
  }

  // Extraction and filtering run per sentence; the sample report sums them.
  static const std::vector<ExternalTriplet> kNone;
  std::vector<Triplet> kept;
  FilterReport& report = out.report;
  for (const DepTree& tree : sample.text_trees) {
    auto it = ctx.external.find(tree.sent_id);
    std::vector<Triplet> t =
        ExtractSemantics(tree, it == ctx.external.end() ? kNone : it->second,
                         ctx.refs, warnings);
    if (variant == Variant::kScst) {
      auto [filtered, r] = FilterSemantics(t, spec, tree.size());
      t = std::move(filtered);
      report.input_count += r.input_count;
    } else {
      report.input_count += static_cast<int>(t.size());
    }
    for (const Triplet& x : t) report.kept_tokens += TripletTokens(x);
    report.kept_count += static_cast<int>(t.size());
    kept.insert(kept.end(), t.begin(), t.end());
  }
  report.input_tokens = source_tokens;
  report.reduction_pct =
      source_tokens > 0
          ? 100.0 * (1.0 - static_cast<double>(report.kept_tokens) / source_tokens)
          : 0.0;
  if (spec.task == TaskKind::kSentiment) {
    out.sequence = TripletsToSentence(kept);
  } else {
    for (const Triplet& t : kept) out.units.push_back(TripletUnit(t));
  }
  return out;
}

PreparedSample FromReceivedText(const PreparedSample& sent,
                                const std::string& received_text) {
  PreparedSample out = sent;
  std::vector<std::string> words = SplitWords(received_text);
  if (sent.task == TaskKind::kSentiment) {
    out.sequence = FullSequence(words);
  } else {
    out.units = WordUnits(words);
  }
  out.text = received_text;
  return out;
}

int64_t CountSymbols(const PreparedSample& sample, Variant variant,
                     int symbols_per_vector, const ClassicalCodes* codes) {
  if (variant == Variant::kClassical) {
    if (codes == nullptr) throw ValidationError("classical symbol count needs codes");
    return ClassicalSymbolCount(sample.text, *codes);
  }
  return static_cast<int64_t>(sample.transmitted_vectors()) * symbols_per_vector;
}

std::vector<std::string> AnswerVocabulary(const std::vector<TaskSample>& train) {
  std::set<std::string> answers;
  for (const TaskSample& s : train) {
    if (!s.answer.empty()) answers.insert(s.answer);
  }
  return {answers.begin(), answers.end()};
}

Vocab BuildTaskVocab(const std::vector<PreparedSample>& train, int min_freq) {
  std::vector<std::vector<std::string>> corpus;
  for (const PreparedSample& s : train) {
    corpus.push_back(s.sequence);
    for (const Unit& u : s.units) corpus.push_back(u.words);
    corpus.push_back(s.question.words);
  }
  return BuildVocab(corpus, min_freq);
}

TaskSystem::TaskSystem(const ExperimentConfig& config, Vocab vocab,
                       std::vector<std::string> answers, std::mt19937_64& rng)
    : task_(config.task), vocab_(std::move(vocab)), answers_(std::move(answers)) {
  if (task_ == TaskKind::kSentiment) {
    sentiment_ = std::make_unique<SentimentModel>(config.sentiment, vocab_.size(), rng);
    codec_ = ChannelCodec(config.sentiment.dim, config.symbols_per_vector, rng);
  } else {
    if (answers_.empty()) throw ValidationError("qa training set has no answers");
    stm_config_ = config.stm;
    stm_config_.n_o = static_cast<int>(answers_.size());
    stm_ = std::make_unique<StmParams>(StmParams::Create(stm_config_, vocab_.size(), rng));
    codec_ = ChannelCodec(stm_config_.d, config.symbols_per_vector, rng);
  }
}

int TaskSystem::classes() const {
  return task_ == TaskKind::kSentiment ? kSentimentClasses
                                       : static_cast<int>(answers_.size());
}

Tensor TaskSystem::Transmit(const Tensor& vector, const ChannelSetting& channel,
                            std::mt19937_64& channel_rng) const {
  SymbolBlock block = codec_.Encode(vector);
  if (channel.noiseless) return codec_.Decode(block.symbols);
  return codec_.Decode(
      ApplyChannel(block.symbols, channel.kind, channel.snr_db, channel_rng));
}

Tensor TaskSystem::Forward(const PreparedSample& sample, const ChannelSetting& channel,
                           bool training, std::mt19937_64& model_rng,
                           std::mt19937_64& channel_rng) const {
  if (task_ == TaskKind::kSentiment) {
    std::vector<int> ids = vocab_.Encode(sample.sequence);
    const size_t max_len = static_cast<size_t>(sentiment_->config().max_len);
    if (ids.size() > max_len) {
      ids.resize(max_len);
      ids.back() = kSepId;
    }
    Tensor embedded = EmbedSequence(ids, std::vector<int>(ids.size(), 0),
                                    sentiment_->tables());
    Tensor encoded = sentiment_->EncodeSequence(embedded, training, model_rng);
    // Every row is sent; the classifier reads the recovered [CLS] row.
    Tensor cls;
    for (int row = 0; row < encoded.dim(0); ++row) {
      Tensor received = Transmit(nn::Reshape(nn::SliceRows(encoded, row, 1),
                                             {encoded.dim(1)}),
                                 channel, channel_rng);
      if (row == 0) cls = received;
    }
    return sentiment_->DecodeSentiment(cls, training, model_rng);
  }
  std::vector<Tensor> inputs;
  inputs.reserve(sample.units.size() + 1);
  for (const Unit& u : sample.units) {
    if (u.words.empty()) continue;
    inputs.push_back(
        Transmit(EmbedTokens(vocab_.Encode(u.words), u.roles, *stm_), channel,
                 channel_rng));
  }
  if (!sample.question.words.empty()) {
    inputs.push_back(
        EmbedTokens(vocab_.Encode(sample.question.words), sample.question.roles, *stm_));
  }
  return StmForward(inputs, *stm_, stm_config_, training, model_rng);
}

int TaskSystem::Predict(const PreparedSample& sample, const ChannelSetting& channel,
                        std::mt19937_64& channel_rng) const {
  std::mt19937_64 unused(0);
  Tensor p = Forward(sample, channel, false, unused, channel_rng);
  auto v = p.values();
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

nn::ParamList TaskSystem::Parameters() const {
  nn::ParamList params =
      task_ == TaskKind::kSentiment ? sentiment_->Parameters() : stm_->Parameters();
  codec_.AppendParams("channel", &params);
  return params;
}

}  // namespace scst
