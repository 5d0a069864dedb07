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


#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "scst/error.h"
#include "scst/semcodec.h"
#include "test_util.h"

namespace scst {
namespace {

using nn::Tensor;
using testing::GradCheck;

Triplet T(const std::string& h, const std::string& r, const std::string& t) {
  Triplet x;
  x.head = EntitySpan::Plain(h);
  x.relation = r;
  x.relation_head_upos = "VERB";
  x.tail = EntitySpan::Plain(t);
  return x;
}

void Fill(Tensor& t, double v) {
  for (double& x : t.mutable_values()) x = v;
}

TEST_CASE("vocabulary construction") {
  Vocab v = BuildVocab({{"a", "b", "a"}}, 1);
  CHECK(v.size() == 7);
  CHECK(v.Id("a") == 5);
  CHECK(v.Id("b") == 6);
  CHECK(v.Id("zzz") == kUnkId);
  CHECK(v.Token(kClsId) == kClsToken);
  CHECK(BuildVocab({}, 1).size() == kNumSpecials);
  // Frequency ties break lexicographically; min_freq drops rare tokens.
  Vocab w = BuildVocab({{"d", "c", "c", "d", "e"}}, 2);
  CHECK(w.size() == 7);
  CHECK(w.Id("c") == 5);
  CHECK(w.Id("d") == 6);
  CHECK(w.Id("e") == kUnkId);
}

TEST_CASE("vocabulary file round trip") {
  Vocab v = BuildVocab({{"x", "y", "y", "z"}}, 1);
  Vocab back = Vocab::Parse(v.Serialize());
  REQUIRE(back.size() == v.size());
  for (int i = 0; i < v.size(); ++i) CHECK(back.Token(i) == v.Token(i));
  CHECK_THROWS_AS(Vocab::Parse("a\na\n"), Error);
}

TEST_CASE("triplets to sentence") {
  CHECK(TripletsToSentence({T("China", "capital city", "Beijing")}) ==
        std::vector<std::string>{"[CLS]", "China", "capital", "city",
                                 "Beijing", "[SEP]"});
  CHECK(TripletsToSentence({T("a", "b", "c"), T("d", "e", "f")}) ==
        std::vector<std::string>{"[CLS]", "a", "b", "c", ",", "d", "e", "f",
                                 "[SEP]"});
  CHECK(TripletsToSentence({}) == std::vector<std::string>{"[CLS]", "[SEP]"});
}

EmbeddingTables MakeTables(int vocab, int max_len, int segs, int d) {
  EmbeddingTables t;
  t.token = Tensor::Zeros({vocab, d}, true);
  t.position = Tensor::Zeros({max_len, d}, true);
  t.segment = Tensor::Zeros({segs, d}, true);
  return t;
}

TEST_CASE("embedding sum") {
  EmbeddingTables zero = MakeTables(6, 4, 2, 3);
  Tensor e = EmbedSequence({1, 2, 5}, {0, 0, 1}, zero);
  CHECK(e.shape() == nn::Shape{3, 3});
  for (double x : e.values()) CHECK(x == 0.0);

  // One-hot rows in a 12-wide space: token i -> i, position p -> 6 + p,
  // segment s -> 10 + s.
  EmbeddingTables hot = MakeTables(6, 4, 2, 12);
  for (int i = 0; i < 6; ++i) hot.token.mutable_values()[i * 12 + i] = 1.0;
  for (int p = 0; p < 4; ++p) {
    hot.position.mutable_values()[p * 12 + 6 + p] = 1.0;
  }
  for (int s = 0; s < 2; ++s) {
    hot.segment.mutable_values()[s * 12 + 10 + s] = 1.0;
  }
  std::vector<int> ids = {3, 5, 0}, segs = {1, 0, 1};
  Tensor h = EmbedSequence(ids, segs, hot);
  for (int t = 0; t < 3; ++t) {
    for (int c = 0; c < 12; ++c) {
      double expect = (c == ids[t]) + (c == 6 + t) + (c == 10 + segs[t]);
      CHECK(h.at(t * 12 + c) == expect);
    }
  }

  // Linear in the token table.
  std::mt19937_64 rng(1);
  EmbeddingTables r = MakeTables(6, 4, 2, 3);
  for (Tensor* t : {&r.token, &r.position, &r.segment}) {
    for (double& x : t->mutable_values()) {
      x = std::normal_distribution<double>()(rng);
    }
  }
  Tensor base = EmbedSequence(ids, segs, r);
  EmbeddingTables no_token = r;
  no_token.token = Tensor::Zeros({6, 3});
  Tensor rest = EmbedSequence(ids, segs, no_token);
  EmbeddingTables doubled = r;
  doubled.token = nn::Scale(r.token, 2.0).Detach();
  Tensor twice = EmbedSequence(ids, segs, doubled);
  for (size_t i = 0; i < base.size(); ++i) {
    CHECK(twice.at(i) - rest.at(i) ==
          doctest::Approx(2.0 * (base.at(i) - rest.at(i))));
  }

  CHECK(testing::ThrownKind([&] {
          EmbedSequence({1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}, zero);
        }) == ErrorKind::kValidation);
  CHECK_THROWS_AS(EmbedSequence({1, 1}, {0}, zero), Error);
}

SentimentModelConfig SmallConfig() {
  SentimentModelConfig c;
  c.dim = 8;
  c.layers = 1;
  c.heads = 2;
  c.ffn_dim = 8;
  c.max_len = 8;
  c.mlp_hidden = 4;
  c.dropout = 0.0;
  return c;
}

TEST_CASE("encoder shape, attention rows and determinism") {
  std::mt19937_64 rng(2), drop(0);
  SentimentModelConfig c = SmallConfig();
  c.layers = 2;
  SentimentModel m(c, 10, rng);
  for (int len = 2; len <= 6; ++len) {
    std::vector<int> ids(len, 7), segs(len, 0);
    ids[0] = kClsId;
    Tensor e = EmbedSequence(ids, segs, m.tables());
    std::vector<Tensor> attention;
    m.EncodeSequence(e, false, drop, &attention);
    CHECK(attention.size() == 4);
    for (const Tensor& a : attention) {
      for (int r = 0; r < len; ++r) {
        double sum = 0.0;
        for (int k = 0; k < len; ++k) sum += a.at(r * len + k);
        CHECK(std::abs(sum - 1.0) < 1e-6);
      }
    }
    Tensor s = m.SemanticEncode(e, false, drop);
    CHECK(s.shape() == nn::Shape{c.dim});
  }
  std::mt19937_64 a(3), b(3);
  SentimentModel m1(c, 10, a), m2(c, 10, b);
  Tensor e1 = EmbedSequence({2, 5, 3}, {0, 0, 0}, m1.tables());
  Tensor e2 = EmbedSequence({2, 5, 3}, {0, 0, 0}, m2.tables());
  Tensor o1 = m1.SemanticEncode(e1, false, drop);
  Tensor o2 = m2.SemanticEncode(e2, false, drop);
  CHECK(std::vector<double>(o1.values().begin(), o1.values().end()) ==
        std::vector<double>(o2.values().begin(), o2.values().end()));
}

TEST_CASE("config validation rejects indivisible heads") {
  SentimentModelConfig c = SmallConfig();
  c.heads = 3;
  CHECK_THROWS_AS(c.Validate(), Error);
}

TEST_CASE("decoder examples") {
  std::mt19937_64 rng(4), drop(0);
  SentimentModelConfig c = SmallConfig();
  c.dim = 2;
  c.heads = 1;
  c.mlp_hidden = 2;
  SentimentModel m(c, 6, rng);
  Fill(m.classifier_hidden().weight, 0.0);
  Fill(m.classifier_hidden().bias, 0.0);
  Fill(m.classifier_out().weight, 0.0);
  Fill(m.classifier_out().bias, 0.0);
  Tensor p = m.DecodeSentiment(Tensor::FromVector({2}, {0.3, -2.0}), false,
                               drop);
  CHECK(p.at(0) == doctest::Approx(0.5));
  CHECK(p.at(1) == doctest::Approx(0.5));

  // Hand evaluation: h = relu(x W1 + b1), logits = h W2 + b2.
  const std::vector<double> w1 = {1.0, -2.0, 0.5, 3.0}, b1 = {0.1, -0.2};
  const std::vector<double> w2 = {2.0, -1.0, 0.5, 1.5}, b2 = {0.3, 0.0};
  auto set = [](Tensor& t, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i) t.mutable_values()[i] = v[i];
  };
  set(m.classifier_hidden().weight, w1);
  set(m.classifier_hidden().bias, b1);
  set(m.classifier_out().weight, w2);
  set(m.classifier_out().bias, b2);
  const double x0 = 0.4, x1 = -0.7;
  double h0 = std::max(0.0, x0 * w1[0] + x1 * w1[2] + b1[0]);
  double h1 = std::max(0.0, x0 * w1[1] + x1 * w1[3] + b1[1]);
  double l0 = h0 * w2[0] + h1 * w2[2] + b2[0];
  double l1 = h0 * w2[1] + h1 * w2[3] + b2[1];
  double p1 = 1.0 / (1.0 + std::exp(l0 - l1));
  Tensor q = m.DecodeSentiment(Tensor::FromVector({2}, {x0, x1}), false, drop);
  CHECK(q.at(1) == doctest::Approx(p1).epsilon(1e-12));

  std::mt19937_64 r2(5);
  SentimentModel big(SmallConfig(), 6, r2);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(8);
    for (double& x : v) x = std::normal_distribution<double>(0, 10)(r2);
    Tensor pr = big.DecodeSentiment(Tensor::FromVector({8}, v), false, drop);
    CHECK(pr.at(0) > 0.0);
    CHECK(pr.at(0) < 1.0);
    CHECK(pr.at(0) + pr.at(1) == doctest::Approx(1.0));
  }
}

TEST_CASE("binary loss vanishes when prediction equals label") {
  Tensor pred = Tensor::FromVector({4}, {1.0, 0.0, 0.0, 1.0});
  Tensor label = Tensor::FromVector({4}, {1.0, 0.0, 0.0, 1.0});
  CHECK(nn::CrossEntropyBinary(pred, label).item() < 1e-5);
}

TEST_CASE("sentiment path matches finite differences") {
  std::mt19937_64 rng(6), drop(0);
  SentimentModel m(SmallConfig(), 7, rng);
  std::vector<int> ids = {kClsId, 5, 6, 5, kSepId};
  std::vector<int> segs(ids.size(), 0);
  Tensor label = Tensor::FromVector({2}, {0.0, 1.0});
  std::vector<Tensor> params;
  for (auto& [name, t] : m.Parameters()) params.push_back(t);
  double err = GradCheck(params, [&] {
    Tensor e = EmbedSequence(ids, segs, m.tables());
    Tensor p = m.DecodeSentiment(m.SemanticEncode(e, false, drop), false, drop);
    return nn::CrossEntropyBinary(p, label);
  });
  CHECK(err < 1e-4);
}

TEST_CASE("toy sentiment set is learnable") {
  // Label is 1 iff the sequence contains "good" (id 5); "bad" is id 6 and
  // 7..9 are fillers.
  std::mt19937_64 rng(7), drop(8);
  std::vector<std::vector<int>> seqs;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    std::vector<int> s = {kClsId};
    const int n = 2 + i % 4;
    for (int k = 0; k < n; ++k) s.push_back(7 + (i + k) % 3);
    s.insert(s.begin() + 1 + (i % n), i % 2 ? 5 : 6);
    s.push_back(kSepId);
    seqs.push_back(s);
    labels.push_back(i % 2);
  }
  SentimentModelConfig c;
  c.dropout = 0.0;
  SentimentModel m(c, 10, rng);
  nn::AdamOptions opts;
  opts.lr = 1e-3;
  nn::Adam adam(m.Parameters(), opts);
  double acc = 0.0;
  for (int epoch = 0; epoch < 200 && acc < 0.95; ++epoch) {
    int correct = 0;
    for (size_t i = 0; i < seqs.size(); ++i) {
      nn::Tape tape;
      nn::TapeScope scope(tape);
      std::vector<int> segs(seqs[i].size(), 0);
      Tensor e = EmbedSequence(seqs[i], segs, m.tables());
      Tensor p = m.DecodeSentiment(m.SemanticEncode(e, true, drop), true, drop);
      correct += (p.at(1) > 0.5) == (labels[i] == 1);
      Tensor y = Tensor::FromVector({2}, {1.0 - labels[i], 1.0 * labels[i]});
      tape.Backward(nn::CrossEntropyBinary(p, y));
      adam.Step();
    }
    acc = correct / 20.0;
  }
  CHECK(acc >= 0.95);
}

}  // namespace
}  // namespace scst
