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

#include "scst/stm.h"

#include <cmath>

#include "scst/error.h"

namespace scst {

using nn::Tensor;

void StmConfig::Validate() const {
  if (d < 1 || n_q < 1 || n_r < 1 || n_o < 1) {
    throw ConfigError("stm dimensions must be >= 1 (d=" + std::to_string(d) +
                      ", n_q=" + std::to_string(n_q) + ", n_r=" +
                      std::to_string(n_r) + ", n_o=" + std::to_string(n_o) +
                      ")");
  }
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2) ||
      !std::isfinite(alpha3)) {
    throw ConfigError("stm blending values must be finite");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw ConfigError("stm dropout must lie in [0, 1)");
  }
}

StmParams StmParams::Create(const StmConfig& config, int vocab_size,
                            std::mt19937_64& rng) {
  config.Validate();
  const int d = config.d;
  StmParams p;
  p.embedding = nn::UniformParam({vocab_size, d}, d, rng);
  p.roles = Tensor::Full({kNumTokenRoles, d}, 1.0, true);
  p.f1 = nn::Linear(d, d, rng);
  p.f2 = nn::Linear(d, d, rng);
  p.f3 = nn::Linear(config.n_q, d, rng);
  p.u_f = nn::Linear(d, d, rng);
  p.v_f = nn::Linear(d, d, rng);
  p.u_g = nn::Linear(d, d, rng);
  p.v_g = nn::Linear(d, d, rng);
  for (int q = 0; q < config.n_q; ++q) p.sam_query.emplace_back(d, d, rng);
  p.b1 = nn::UniformParam({d, config.n_q * d}, config.n_q * d, rng);
  p.b2 = nn::Linear(d * d, config.n_r, rng);
  p.b3 = nn::Linear(config.n_q * config.n_r, config.n_o, rng);
  return p;
}

nn::ParamList StmParams::Parameters() const {
  nn::ParamList out;
  out.emplace_back("stm.embedding", embedding);
  out.emplace_back("stm.roles", roles);
  f1.AppendParams("stm.f1", &out);
  f2.AppendParams("stm.f2", &out);
  f3.AppendParams("stm.f3", &out);
  u_f.AppendParams("stm.u_f", &out);
  v_f.AppendParams("stm.v_f", &out);
  u_g.AppendParams("stm.u_g", &out);
  v_g.AppendParams("stm.v_g", &out);
  for (size_t q = 0; q < sam_query.size(); ++q) {
    sam_query[q].AppendParams("stm.sam." + std::to_string(q), &out);
  }
  out.emplace_back("stm.b1", b1);
  b2.AppendParams("stm.b2", &out);
  b3.AppendParams("stm.b3", &out);
  return out;
}

StmState StmInit(const StmConfig& config) {
  config.Validate();
  return {Tensor::Zeros({config.d, config.d}),
          Tensor::Zeros({config.n_q, config.d, config.d})};
}

Tensor EmbedTokens(const std::vector<int>& ids,
                   const std::vector<TokenRole>& roles,
                   const StmParams& params) {
  if (ids.empty()) throw ValidationError("cannot embed an empty token list");
  if (ids.size() != roles.size()) {
    throw ShapeError("embed_tokens: role count differs from token count");
  }
  std::vector<int> role_ids;
  role_ids.reserve(roles.size());
  for (TokenRole r : roles) role_ids.push_back(static_cast<int>(r));
  return nn::MeanRows(nn::Mul(nn::GatherRows(params.embedding, ids),
                              nn::GatherRows(params.roles, role_ids)));
}

Tensor EmbedTriplet(const Triplet& triplet, const Vocab& vocab,
                    const StmParams& params) {
  std::vector<int> ids;
  std::vector<TokenRole> roles;
  auto add = [&](const std::string& text, TokenRole role) {
    for (const std::string& w : SplitWords(text)) {
      ids.push_back(vocab.Id(w));
      roles.push_back(role);
    }
  };
  add(triplet.head.text, TokenRole::kHead);
  add(triplet.relation, TokenRole::kRelation);
  add(triplet.tail.text, TokenRole::kTail);
  if (ids.empty()) throw ValidationError("cannot embed an empty triplet");
  return EmbedTokens(ids, roles, params);
}

Tensor EmbedText(const std::vector<std::string>& words, const Vocab& vocab,
                 const StmParams& params) {
  return EmbedTokens(vocab.Encode(words),
                     std::vector<TokenRole>(words.size(), TokenRole::kText),
                     params);
}

Tensor ItemUpdate(const StmState& state, const Tensor& e,
                  const StmParams& params) {
  Tensor forget = nn::Sigmoid(nn::Outer(params.u_f(e), params.v_f(e)));
  Tensor input = nn::Sigmoid(nn::Outer(params.u_g(e), params.v_g(e)));
  Tensor lifted = nn::Outer(params.f1(e), params.f2(e));
  return nn::Add(nn::Mul(forget, state.item), nn::Mul(input, lifted));
}

Tensor RelationalReadout(const StmState& state, const Tensor& e,
                         const StmParams& params) {
  const int n_q = state.relational.dim(0);
  const int d = state.relational.dim(1);
  Tensor attend = nn::Reshape(nn::Softmax(params.f2(e)), {d, 1});
  Tensor key = nn::Reshape(params.f1(e), {d, 1});
  // Rows q*d..q*d+d-1 of the flattened memory hold M_r[q] f1(e).
  Tensor projected =
      nn::MatMul(nn::Reshape(state.relational, {n_q * d, d}), key);
  Tensor z = nn::MatMul(nn::Reshape(projected, {n_q, d}), attend);
  return params.f3(nn::Reshape(z, {n_q}));
}

Tensor SelfAttentiveAssociation(const Tensor& x, const StmParams& params) {
  std::vector<Tensor> heads;
  heads.reserve(params.sam_query.size());
  for (const nn::Linear& query : params.sam_query) {
    heads.push_back(nn::MatMul(nn::Softmax(query(x), -1), x));
  }
  return nn::Stack(heads);
}

Tensor RelationalUpdate(const StmState& state, const Tensor& e,
                        const Tensor& v_r, const StmParams& params,
                        const StmConfig& config) {
  Tensor x = nn::Add(state.item,
                     nn::Scale(nn::Outer(v_r, params.f2(e)), config.alpha2));
  return nn::Add(state.relational,
                 nn::Scale(SelfAttentiveAssociation(x, params), config.alpha1));
}

Tensor MemoryTransfer(const StmState& state, const StmParams& params,
                      const StmConfig& config) {
  const int d = config.d;
  Tensor flat = nn::Reshape(state.relational, {config.n_q * d, d});
  return nn::Add(state.item,
                 nn::Scale(nn::MatMul(params.b1, flat), config.alpha3));
}

Tensor AnswerReadout(const StmState& state, const StmParams& params,
                     const StmConfig& config) {
  const int d = config.d;
  Tensor rows = nn::Reshape(state.relational, {config.n_q, d * d});
  Tensor bottleneck = params.b2(rows);
  return params.b3(nn::Reshape(bottleneck, {config.n_q * config.n_r}));
}

StmState StmStep(const StmState& state, const Tensor& e,
                 const StmParams& params, const StmConfig& config) {
  StmState next = state;
  Tensor v_r = RelationalReadout(state, e, params);
  next.item = ItemUpdate(state, e, params);
  next.relational = RelationalUpdate(next, e, v_r, params, config);
  next.item = MemoryTransfer(next, params, config);
  return next;
}

Tensor StmForward(const std::vector<Tensor>& inputs, const StmParams& params,
                  const StmConfig& config, bool training,
                  std::mt19937_64& rng) {
  StmState state = StmInit(config);
  for (const Tensor& e : inputs) {
    if (e.rank() != 1 || e.dim(0) != config.d) {
      throw ShapeError("stm input must be a vector of width " +
                       std::to_string(config.d) + ", got " +
                       nn::ShapeString(e.shape()));
    }
    state = StmStep(state, nn::Dropout(e, config.dropout, training, rng),
                    params, config);
  }
  return nn::Softmax(AnswerReadout(state, params, config), -1);
}

}  // namespace scst
