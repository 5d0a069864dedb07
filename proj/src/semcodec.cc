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

#include "scst/semcodec.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "scst/corpus.h"
#include "scst/error.h"

namespace scst {

using nn::Tensor;

Vocab::Vocab() {
  for (const char* s : {kPadToken, kUnkToken, kClsToken, kSepToken, kMaskToken}) {
    ids_[s] = static_cast<int>(tokens_.size());
    tokens_.push_back(s);
  }
}

void Vocab::Add(const std::string& token) {
  std::string key = CaseFold(token);
  if (ids_.count(key)) return;
  ids_[key] = static_cast<int>(tokens_.size());
  tokens_.push_back(key);
}

int Vocab::Id(const std::string& token) const {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  it = ids_.find(CaseFold(token));
  return it == ids_.end() ? kUnkId : it->second;
}

std::vector<int> Vocab::Encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(Id(t));
  return ids;
}

std::string Vocab::Serialize() const {
  std::string out;
  for (size_t i = kNumSpecials; i < tokens_.size(); ++i) {
    out += tokens_[i];
    out += '\n';
  }
  return out;
}

Vocab Vocab::Parse(const std::string& content) {
  Vocab v;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int before = v.size();
    v.Add(line);
    if (v.size() == before) {
      throw ValidationError("vocabulary: duplicate token '" + line + "'");
    }
  }
  return v;
}

void Vocab::Save(const std::filesystem::path& path) const {
  WriteFile(path, Serialize());
}

Vocab Vocab::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

Vocab BuildVocab(const std::vector<std::vector<std::string>>& corpus,
                 int min_freq) {
  if (min_freq < 1) throw ValidationError("min_freq must be >= 1");
  std::map<std::string, int> freq;
  for (const auto& seq : corpus) {
    for (const std::string& t : seq) {
      if (t == kPadToken || t == kUnkToken || t == kClsToken ||
          t == kSepToken || t == kMaskToken) {
        continue;
      }
      ++freq[CaseFold(t)];
    }
  }
  std::vector<std::pair<std::string, int>> items(freq.begin(), freq.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;  // map order already lexicographic
  });
  Vocab vocab;
  for (const auto& [token, count] : items) {
    if (count >= min_freq) vocab.Add(token);
  }
  return vocab;
}

std::vector<std::string> TripletsToSentence(const std::vector<Triplet>& triplets) {
  std::vector<std::string> out = {kClsToken};
  for (size_t i = 0; i < triplets.size(); ++i) {
    if (i > 0) out.push_back(",");
    for (const std::string* part :
         {&triplets[i].head.text, &triplets[i].relation, &triplets[i].tail.text}) {
      for (std::string& w : SplitWords(*part)) out.push_back(std::move(w));
    }
  }
  out.push_back(kSepToken);
  return out;
}

Tensor EmbedSequence(const std::vector<int>& ids,
                     const std::vector<int>& segment_ids,
                     const EmbeddingTables& tables) {
  if (ids.size() != segment_ids.size()) {
    throw ShapeError("embed_sequence: " + std::to_string(ids.size()) +
                     " tokens but " + std::to_string(segment_ids.size()) +
                     " segment ids");
  }
  if (static_cast<int>(ids.size()) > tables.max_len()) {
    throw ValidationError("sequence of length " + std::to_string(ids.size()) +
                          " exceeds max_len " + std::to_string(tables.max_len()));
  }
  for (int s : segment_ids) {
    if (s < 0 || s >= tables.segment.dim(0)) {
      throw ValidationError("segment id " + std::to_string(s) + " out of range");
    }
  }
  std::vector<int> positions(ids.size());
  for (size_t i = 0; i < positions.size(); ++i) positions[i] = static_cast<int>(i);
  return nn::Add(nn::Add(nn::GatherRows(tables.token, ids),
                         nn::GatherRows(tables.position, positions)),
                 nn::GatherRows(tables.segment, segment_ids));
}

void SentimentModelConfig::Validate() const {
  if (dim < 1 || layers < 0 || heads < 1 || ffn_dim < 1 || max_len < 1 ||
      segments < 1 || mlp_hidden < 1 || classes < 2) {
    throw ConfigError("sentiment model dimensions must be positive");
  }
  if (dim % heads != 0) {
    throw ConfigError("attention heads (" + std::to_string(heads) +
                      ") must divide the model width (" + std::to_string(dim) +
                      ")");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw ConfigError("dropout must lie in [0, 1)");
  }
}

SentimentModel::SentimentModel(const SentimentModelConfig& config,
                               int vocab_size, std::mt19937_64& rng)
    : config_(config) {
  config_.Validate();
  const int d = config_.dim;
  tables_.token = nn::UniformParam({vocab_size, d}, d, rng);
  tables_.position = nn::UniformParam({config_.max_len, d}, d, rng);
  tables_.segment = nn::UniformParam({config_.segments, d}, d, rng);
  for (int l = 0; l < config_.layers; ++l) {
    Layer layer;
    layer.query = nn::Linear(d, d, rng);
    layer.key = nn::Linear(d, d, rng);
    layer.value = nn::Linear(d, d, rng);
    layer.output = nn::Linear(d, d, rng);
    layer.norm1_gain = nn::Tensor::Full({d}, 1.0, true);
    layer.norm1_bias = nn::Tensor::Zeros({d}, true);
    layer.ffn_in = nn::Linear(d, config_.ffn_dim, rng);
    layer.ffn_out = nn::Linear(config_.ffn_dim, d, rng);
    layer.norm2_gain = nn::Tensor::Full({d}, 1.0, true);
    layer.norm2_bias = nn::Tensor::Zeros({d}, true);
    layers_.push_back(std::move(layer));
  }
  mlp_hidden_ = nn::Linear(d, config_.mlp_hidden, rng);
  mlp_out_ = nn::Linear(config_.mlp_hidden, config_.classes, rng);
}

Tensor SentimentModel::EncodeSequence(const Tensor& embedded, bool training,
                                      std::mt19937_64& rng,
                                      std::vector<Tensor>* attention) const {
  const int heads = config_.heads;
  const int head_dim = config_.dim / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  Tensor x = nn::Dropout(embedded, config_.dropout, training, rng);
  for (const Layer& layer : layers_) {
    Tensor q = layer.query(x);
    Tensor k = layer.key(x);
    Tensor v = layer.value(x);
    std::vector<Tensor> per_head;
    for (int h = 0; h < heads; ++h) {
      Tensor qh = nn::SliceCols(q, h * head_dim, head_dim);
      Tensor kh = nn::SliceCols(k, h * head_dim, head_dim);
      Tensor vh = nn::SliceCols(v, h * head_dim, head_dim);
      Tensor weights =
          nn::Softmax(nn::Scale(nn::MatMul(qh, nn::Transpose(kh)), scale), -1);
      if (attention) attention->push_back(weights);
      per_head.push_back(nn::MatMul(weights, vh));
    }
    Tensor attended = layer.output(nn::ConcatCols(per_head));
    x = nn::LayerNorm(
        nn::Add(x, nn::Dropout(attended, config_.dropout, training, rng)),
        layer.norm1_gain, layer.norm1_bias);
    Tensor ffn = layer.ffn_out(nn::Relu(layer.ffn_in(x)));
    x = nn::LayerNorm(nn::Add(x, nn::Dropout(ffn, config_.dropout, training, rng)),
                      layer.norm2_gain, layer.norm2_bias);
  }
  return x;
}

Tensor SentimentModel::SemanticEncode(const Tensor& embedded, bool training,
                                      std::mt19937_64& rng) const {
  Tensor encoded = EncodeSequence(embedded, training, rng);
  return nn::Reshape(nn::SliceRows(encoded, 0, 1), {config_.dim});
}

Tensor SentimentModel::DecodeSentiment(const Tensor& semantic, bool training,
                                       std::mt19937_64& rng) const {
  Tensor hidden = nn::Relu(mlp_hidden_(semantic));
  hidden = nn::Dropout(hidden, config_.dropout, training, rng);
  return nn::Softmax(mlp_out_(hidden), -1);
}

nn::ParamList SentimentModel::Parameters() const {
  nn::ParamList out;
  out.emplace_back("embed.token", tables_.token);
  out.emplace_back("embed.position", tables_.position);
  out.emplace_back("embed.segment", tables_.segment);
  for (size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const std::string p = "encoder." + std::to_string(l);
    layer.query.AppendParams(p + ".query", &out);
    layer.key.AppendParams(p + ".key", &out);
    layer.value.AppendParams(p + ".value", &out);
    layer.output.AppendParams(p + ".output", &out);
    out.emplace_back(p + ".norm1.gain", layer.norm1_gain);
    out.emplace_back(p + ".norm1.bias", layer.norm1_bias);
    layer.ffn_in.AppendParams(p + ".ffn_in", &out);
    layer.ffn_out.AppendParams(p + ".ffn_out", &out);
    out.emplace_back(p + ".norm2.gain", layer.norm2_gain);
    out.emplace_back(p + ".norm2.bias", layer.norm2_bias);
  }
  mlp_hidden_.AppendParams("decoder.hidden", &out);
  mlp_out_.AppendParams("decoder.out", &out);
  return out;
}

}  // namespace scst
