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

#ifndef SCST_SEMCODEC_H_
#define SCST_SEMCODEC_H_

#include <filesystem>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "scst/extraction.h"
#include "scst/nn.h"

namespace scst {

inline constexpr char kPadToken[] = "[PAD]";
inline constexpr char kUnkToken[] = "[UNK]";
inline constexpr char kClsToken[] = "[CLS]";
inline constexpr char kSepToken[] = "[SEP]";
inline constexpr char kMaskToken[] = "[MASK]";
inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kClsId = 2;
inline constexpr int kSepId = 3;
inline constexpr int kMaskId = 4;
inline constexpr int kNumSpecials = 5;

// Token vocabulary with the five specials at ids 0-4. Ordinary tokens are
// case-folded on insertion and lookup.
class Vocab {
 public:
  Vocab();

  int Id(const std::string& token) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }
  std::vector<int> Encode(const std::vector<std::string>& tokens) const;

  // One ordinary token per line; line i holds id i + 5.
  std::string Serialize() const;
  static Vocab Parse(const std::string& content);
  void Save(const std::filesystem::path& path) const;
  static Vocab Load(const std::filesystem::path& path);

  void Add(const std::string& token);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Specials first, then tokens with frequency >= min_freq ordered by
// descending frequency, ties lexicographic.
Vocab BuildVocab(const std::vector<std::vector<std::string>>& corpus,
                 int min_freq);

// [CLS] h r t , h r t , ... [SEP]
std::vector<std::string> TripletsToSentence(const std::vector<Triplet>& triplets);

struct EmbeddingTables {
  nn::Tensor token;     // |V| x d
  nn::Tensor position;  // max_len x d
  nn::Tensor segment;   // n_seg x d

  int dim() const { return token.dim(1); }
  int max_len() const { return position.dim(0); }
};

// Row t = token[id_t] + position[t] + segment[seg_t].
nn::Tensor EmbedSequence(const std::vector<int>& ids,
                         const std::vector<int>& segment_ids,
                         const EmbeddingTables& tables);

struct SentimentModelConfig {
  int dim = 32;
  int layers = 2;
  int heads = 2;
  int ffn_dim = 64;
  int max_len = 128;
  int segments = 2;
  int mlp_hidden = 32;
  int classes = 2;
  double dropout = 0.3;

  void Validate() const;
};

// Token/position/segment embeddings, an L-layer post-norm self-attention
// encoder and a two-layer MLP classifier.
class SentimentModel {
 public:
  SentimentModel(const SentimentModelConfig& config, int vocab_size,
                 std::mt19937_64& rng);

  // Contextual encodings for every position, (len x d). When `attention` is
  // given it receives the (len x len) weights of every layer and head.
  nn::Tensor EncodeSequence(const nn::Tensor& embedded, bool training,
                            std::mt19937_64& rng,
                            std::vector<nn::Tensor>* attention = nullptr) const;
  // Final-layer row at the [CLS] position.
  nn::Tensor SemanticEncode(const nn::Tensor& embedded, bool training,
                            std::mt19937_64& rng) const;
  // Class probabilities for a recovered semantic vector.
  nn::Tensor DecodeSentiment(const nn::Tensor& semantic, bool training,
                             std::mt19937_64& rng) const;

  nn::ParamList Parameters() const;
  const SentimentModelConfig& config() const { return config_; }
  EmbeddingTables& tables() { return tables_; }
  const EmbeddingTables& tables() const { return tables_; }
  nn::Linear& classifier_hidden() { return mlp_hidden_; }
  nn::Linear& classifier_out() { return mlp_out_; }

 private:
  struct Layer {
    nn::Linear query, key, value, output;
    nn::Tensor norm1_gain, norm1_bias;
    nn::Linear ffn_in, ffn_out;
    nn::Tensor norm2_gain, norm2_bias;
  };

  SentimentModelConfig config_;
  EmbeddingTables tables_;
  std::vector<Layer> layers_;
  nn::Linear mlp_hidden_;
  nn::Linear mlp_out_;
};

}  // namespace scst

#endif  // SCST_SEMCODEC_H_
