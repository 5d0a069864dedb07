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

#include "scst/config.h"

#include <cmath>

#include "scst/error.h"

namespace scst {

using nlohmann::json;

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kScst: return "scst";
    case Variant::kScstNoFilter: return "scst_nofilter";
    case Variant::kFulltext: return "fulltext";
    case Variant::kClassical: return "classical";
  }
  return "?";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kScst, Variant::kScstNoFilter, Variant::kFulltext,
                    Variant::kClassical}) {
    if (VariantName(v) == name) return v;
  }
  throw ConfigError("unknown pipeline variant '" + std::string(name) + "'");
}

bool IsTrainable(Variant v) { return v != Variant::kClassical; }

void ExperimentConfig::Validate() const {
  if (snr_grid_db.empty()) throw ConfigError("snr grid must not be empty");
  for (double s : snr_grid_db) {
    if (std::isnan(s)) throw ConfigError("snr grid holds NaN");
  }
  if (channels.empty()) throw ConfigError("channel list must not be empty");
  if (variants.empty()) throw ConfigError("variant list must not be empty");
  if (symbols_per_vector < 1) throw ConfigError("symbols_per_vector must be >= 1");
  if (min_freq < 1) throw ConfigError("min_freq must be >= 1");
  if (training.epochs < 0 || training.batch_size < 1 || !(training.lr > 0.0)) {
    throw ConfigError("training needs epochs >= 0, batch_size >= 1, lr > 0");
  }
  if (eval_seeds < 1) throw ConfigError("eval_seeds must be >= 1");
  if (knowledge_base.task != task) {
    throw ConfigError("knowledge base task differs from experiment task");
  }
  sentiment.Validate();
  stm.Validate();
  knowledge_base.Validate();
  RsCode(rs_n, rs_k);
}

namespace {

std::filesystem::path Resolve(const json& j, const char* key,
                              const std::filesystem::path& base,
                              bool required) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) throw ConfigError(std::string("data.") + key + " is required");
    return {};
  }
  std::filesystem::path p = j.at(key).get<std::string>();
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJson(const json& j,
                                            const std::filesystem::path& base) {
  ExperimentConfig c;
  try {
    c.task = ParseTaskKind(j.at("task").get<std::string>());
    c.variant = ParseVariant(j.value("variant", std::string("scst")));
    for (const auto& v : j.value("variants", json::array({"scst", "scst_nofilter",
                                                         "fulltext", "classical"}))) {
      c.variants.push_back(ParseVariant(v.get<std::string>()));
    }
    const json& data = j.at("data");
    c.data.train = Resolve(data, "train", base, true);
    c.data.train_conllu = Resolve(data, "train_conllu", base, true);
    c.data.train_triplets = Resolve(data, "train_triplets", base, false);
    c.data.test = Resolve(data, "test", base, true);
    c.data.test_conllu = Resolve(data, "test_conllu", base, true);
    c.data.test_triplets = Resolve(data, "test_triplets", base, false);
    c.data.ref_table = Resolve(data, "ref_table", base, false);

    json kb = j.value("knowledge_base", json::object());
    if (!kb.contains("task")) kb["task"] = std::string(TaskKindName(c.task));
    c.knowledge_base = TaskSpec::FromJson(kb);

    const json model = j.value("model", json::object());
    SentimentModelConfig& s = c.sentiment;
    s.dim = model.value("dim", s.dim);
    s.layers = model.value("layers", s.layers);
    s.heads = model.value("heads", s.heads);
    s.ffn_dim = model.value("ffn_dim", s.ffn_dim);
    s.max_len = model.value("max_len", s.max_len);
    s.segments = model.value("segments", s.segments);
    s.mlp_hidden = model.value("mlp_hidden", s.mlp_hidden);
    StmConfig& q = c.stm;
    q.d = model.value("dim", q.d);
    q.n_q = model.value("n_q", q.n_q);
    q.n_r = model.value("n_r", q.n_r);
    q.alpha1 = model.value("alpha1", q.alpha1);
    q.alpha2 = model.value("alpha2", q.alpha2);
    q.alpha3 = model.value("alpha3", q.alpha3);
    c.symbols_per_vector = model.value("symbols_per_vector", c.symbols_per_vector);
    c.min_freq = model.value("min_freq", c.min_freq);

    const json channel = j.value("channel", json::object());
    c.snr_grid_db = channel.value(
        "snr_grid_db", std::vector<double>{-6, -3, 0, 3, 6, 9, 12, 15, 18});
    for (const auto& k : channel.value("kinds", json::array({"awgn", "rayleigh"}))) {
      c.channels.push_back(ParseChannelKind(k.get<std::string>()));
    }

    const json training = j.value("training", json::object());
    TrainingConfig& t = c.training;
    t.epochs = training.value("epochs", t.epochs);
    t.batch_size = training.value("batch_size", t.batch_size);
    t.lr = training.value("lr", t.lr);
    const double dropout = training.value(
        "dropout", c.task == TaskKind::kSentiment ? s.dropout : q.dropout);
    s.dropout = dropout;
    q.dropout = dropout;
    if (training.contains("snr_db") && !training.at("snr_db").is_null()) {
      t.snr_db = training.at("snr_db").get<double>();
    }
    t.max_train_samples = training.value("max_train_samples", t.max_train_samples);

    const json classical = j.value("classical", json::object());
    c.rs_n = classical.value("rs_n", c.rs_n);
    c.rs_k = classical.value("rs_k", c.rs_k);

    c.eval_seeds = j.value("eval_seeds", c.eval_seeds);
    c.seed = j.value("seed", c.seed);
    std::filesystem::path out = j.value("output_dir", std::string("runs"));
    c.output_dir = out.is_absolute() ? out : base / out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return FromJson(j, path.parent_path());
}

json ExperimentConfig::ToJson() const {
  json variants_json = json::array();
  for (Variant v : variants) variants_json.push_back(std::string(VariantName(v)));
  json kinds = json::array();
  for (ChannelKind k : channels) kinds.push_back(std::string(ChannelKindName(k)));
  auto str = [](const std::filesystem::path& p) -> json {
    return p.empty() ? json(nullptr) : json(p.string());
  };
  json train_json = {{"epochs", this->training.epochs},
                   {"batch_size", this->training.batch_size},
                   {"lr", this->training.lr},
                   {"dropout", task == TaskKind::kSentiment ? sentiment.dropout
                                                            : stm.dropout},
                   {"snr_db", this->training.snr_db ? json(*this->training.snr_db) : json(nullptr)},
                   {"max_train_samples", this->training.max_train_samples}};
  return {
      {"task", std::string(TaskKindName(task))},
      {"variant", std::string(VariantName(variant))},
      {"variants", variants_json},
      {"data",
       {{"train", str(data.train)},
        {"train_conllu", str(data.train_conllu)},
        {"train_triplets", str(data.train_triplets)},
        {"test", str(data.test)},
        {"test_conllu", str(data.test_conllu)},
        {"test_triplets", str(data.test_triplets)},
        {"ref_table", str(data.ref_table)}}},
      {"knowledge_base", knowledge_base.ToJson()},
      {"model",
       {{"dim", task == TaskKind::kSentiment ? sentiment.dim : stm.d},
        {"layers", sentiment.layers},
        {"heads", sentiment.heads},
        {"ffn_dim", sentiment.ffn_dim},
        {"max_len", sentiment.max_len},
        {"segments", sentiment.segments},
        {"mlp_hidden", sentiment.mlp_hidden},
        {"n_q", stm.n_q},
        {"n_r", stm.n_r},
        {"alpha1", stm.alpha1},
        {"alpha2", stm.alpha2},
        {"alpha3", stm.alpha3},
        {"symbols_per_vector", symbols_per_vector},
        {"min_freq", min_freq}}},
      {"channel", {{"snr_grid_db", snr_grid_db}, {"kinds", kinds}}},
      {"training", train_json},
      {"classical", {{"rs_n", rs_n}, {"rs_k", rs_k}}},
      {"eval_seeds", eval_seeds},
      {"seed", seed},
      {"output_dir", output_dir.string()},
  };
}

json DefaultConfigJson(TaskKind task) {
  if (task == TaskKind::kSentiment) {
    return {
        {"task", "sentiment"},
        {"variant", "scst"},
        {"variants", {"scst", "scst_nofilter", "fulltext", "classical"}},
        {"data",
         {{"train", "sentiment_train.tsv"},
          {"train_conllu", "sentiment_train.conllu"},
          {"test", "sentiment_test.tsv"},
          {"test_conllu", "sentiment_test.conllu"}}},
        {"knowledge_base",
         {{"task", "sentiment"}, {"keep_fraction", 0.5}, {"relation_weight", 2.0}}},
        {"model",
         {{"dim", 32}, {"layers", 2}, {"heads", 2}, {"ffn_dim", 64},
          {"max_len", 128}, {"mlp_hidden", 32}, {"symbols_per_vector", 1}}},
        {"channel",
         {{"snr_grid_db", {-6, -3, 0, 3, 6, 9, 12, 15, 18}},
          {"kinds", {"awgn", "rayleigh"}}}},
        {"training", {{"epochs", 20}, {"batch_size", 8}, {"lr", 1e-3}, {"dropout", 0.0}}},
        {"classical", {{"rs_n", 255}, {"rs_k", 223}}},
        {"eval_seeds", 3},
        {"seed", 1},
        {"output_dir", "runs/sentiment"},
    };
  }
  return {
      {"task", "qa"},
      {"variant", "scst"},
      {"variants", {"scst", "scst_nofilter", "fulltext", "classical"}},
      {"data",
       {{"train", "qa_train.txt"},
        {"train_conllu", "qa_train.conllu"},
        {"train_triplets", "qa_train_triplets.jsonl"},
        {"test", "qa_test.txt"},
        {"test_conllu", "qa_test.conllu"},
        {"test_triplets", "qa_test_triplets.jsonl"},
        {"ref_table", "entities.tsv"}}},
      {"knowledge_base",
       {{"task", "qa"},
        {"entity_whitelist", {"hallway", "bathroom", "bedroom", "kitchen"}},
        {"relation_whitelist", json::array()}}},
      {"model",
       {{"dim", 16}, {"n_q", 4}, {"n_r", 8}, {"alpha1", 1.0}, {"alpha2", 1.0},
        {"alpha3", 1.0}, {"symbols_per_vector", 1}}},
      {"channel",
       {{"snr_grid_db", {-6, -3, 0, 3, 6, 9, 12, 15, 18}},
        {"kinds", {"awgn", "rayleigh"}}}},
      {"training", {{"epochs", 100}, {"batch_size", 16}, {"lr", 2e-3}, {"dropout", 0.0}}},
      {"classical", {{"rs_n", 255}, {"rs_k", 223}}},
      {"eval_seeds", 3},
      {"seed", 1},
      {"output_dir", "runs/qa"},
  };
}

}  // namespace scst
