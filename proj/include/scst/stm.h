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

#ifndef SCST_STM_H_
#define SCST_STM_H_

#include <random>
#include <string>
#include <vector>

#include "scst/extraction.h"
#include "scst/nn.h"
#include "scst/semcodec.h"

namespace scst {

struct StmConfig {
  int d = 16;
  int n_q = 4;
  int n_r = 8;
  int n_o = 1;  // answer vocabulary size
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double alpha3 = 1.0;
  double dropout = 0.0;

  void Validate() const;
};

// Token roles scale the input embedding so that a triplet keeps the
// direction of its relation (head vs tail). All role rows start at one.
enum class TokenRole { kHead = 0, kRelation = 1, kTail = 2, kText = 3 };
inline constexpr int kNumTokenRoles = 4;

struct StmParams {
  nn::Tensor embedding;  // |V| x d
  nn::Tensor roles;      // kNumTokenRoles x d
  nn::Linear f1, f2, f3;
  nn::Linear u_f, v_f, u_g, v_g;
  std::vector<nn::Linear> sam_query;  // n_q maps
  nn::Tensor b1;                      // d x (n_q d), applied on the left
  nn::Linear b2;                      // d^2 -> n_r
  nn::Linear b3;                      // n_q n_r -> n_o

  static StmParams Create(const StmConfig& config, int vocab_size,
                          std::mt19937_64& rng);
  nn::ParamList Parameters() const;
};

struct StmState {
  nn::Tensor item;        // d x d
  nn::Tensor relational;  // n_q x d x d
};

StmState StmInit(const StmConfig& config);

// Mean over tokens of embedding[id] * roles[role].
nn::Tensor EmbedTokens(const std::vector<int>& ids,
                       const std::vector<TokenRole>& roles,
                       const StmParams& params);
nn::Tensor EmbedTriplet(const Triplet& triplet, const Vocab& vocab,
                        const StmParams& params);
nn::Tensor EmbedText(const std::vector<std::string>& words, const Vocab& vocab,
                     const StmParams& params);

// F * M_i + G * E with E = f1(e) (x) f2(e) and sigmoid outer-product gates.
nn::Tensor ItemUpdate(const StmState& state, const nn::Tensor& e,
                      const StmParams& params);
// v_r = f3(z), z_q = softmax(f2(e))^T M_r[q] f1(e).
nn::Tensor RelationalReadout(const StmState& state, const nn::Tensor& e,
                             const StmParams& params);
// SAM(X)[q] = softmax_rows(P_q(X)) X, stacked to n_q x d x d.
nn::Tensor SelfAttentiveAssociation(const nn::Tensor& x,
                                    const StmParams& params);
// M_r + a1 SAM(M_i + a2 v_r (x) f2(e)); `state.item` must already hold the
// updated item memory.
nn::Tensor RelationalUpdate(const StmState& state, const nn::Tensor& e,
                            const nn::Tensor& v_r, const StmParams& params,
                            const StmConfig& config);
// M_i + a3 B1 V_f(M_r).
nn::Tensor MemoryTransfer(const StmState& state, const StmParams& params,
                          const StmConfig& config);
// Answer logits B3(V_l(B2(V_l(M_r)))).
nn::Tensor AnswerReadout(const StmState& state, const StmParams& params,
                         const StmConfig& config);

StmState StmStep(const StmState& state, const nn::Tensor& e,
                 const StmParams& params, const StmConfig& config);

// Folds StmStep over the inputs (question last) and returns the answer
// distribution after the final step.
nn::Tensor StmForward(const std::vector<nn::Tensor>& inputs,
                      const StmParams& params, const StmConfig& config,
                      bool training, std::mt19937_64& rng);

}  // namespace scst

#endif  // SCST_STM_H_
