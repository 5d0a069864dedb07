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


#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "scst/checkpoint.h"
#include "scst/config.h"
#include "scst/datagen.h"
#include "scst/error.h"
#include "scst/experiment.h"
#include "test_util.h"

namespace scst {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Small generated corpora shared by every test in this file.
const fs::path& DataDir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("scst_experiment_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    DataGenOptions opts;
    opts.sentiment_train = 40;
    opts.sentiment_test = 20;
    opts.qa_train = 40;
    opts.qa_test = 20;
    GenerateDeskData(d, 3, opts);
    return d;
  }();
  return dir;
}

json SmallJson(TaskKind task) {
  json j = DefaultConfigJson(task);
  j["model"]["dim"] = 8;
  if (task == TaskKind::kSentiment) {
    j["model"]["layers"] = 1;
    j["model"]["heads"] = 2;
    j["model"]["ffn_dim"] = 8;
    j["model"]["mlp_hidden"] = 8;
  } else {
    j["model"]["n_q"] = 2;
    j["model"]["n_r"] = 4;
  }
  j["training"]["epochs"] = 2;
  j["channel"]["snr_grid_db"] = {0, 5, 10};
  j["channel"]["kinds"] = {"awgn"};
  j["eval_seeds"] = 2;
  j["output_dir"] = "out_" + std::string(TaskKindName(task));
  return j;
}

ExperimentConfig SmallConfig(TaskKind task) {
  return ExperimentConfig::FromJson(SmallJson(task), DataDir());
}

TEST_CASE("config parsing and validation") {
  ExperimentConfig c = SmallConfig(TaskKind::kQa);
  CHECK(c.snr_grid_db == std::vector<double>{0, 5, 10});
  CHECK(c.data.train.is_absolute());
  CHECK(c.variants.size() == 4);
  ExperimentConfig back = ExperimentConfig::FromJson(c.ToJson(), DataDir());
  CHECK(back.ToJson() == c.ToJson());

  json bad = SmallJson(TaskKind::kQa);
  bad["channel"]["snr_grid_db"] = json::array();
  CHECK(testing::ThrownKind([&] { ExperimentConfig::FromJson(bad, DataDir()); }) ==
        ErrorKind::kConfig);
  bad = SmallJson(TaskKind::kQa);
  bad["variant"] = "telepathy";
  CHECK(testing::ThrownKind([&] { ExperimentConfig::FromJson(bad, DataDir()); })
            .has_value());
  bad = SmallJson(TaskKind::kQa);
  bad.erase("data");
  CHECK(testing::ThrownKind([&] { ExperimentConfig::FromJson(bad, DataDir()); }) ==
        ErrorKind::kConfig);
}

TEST_CASE("symbol counting") {
  PreparedSample s;
  s.task = TaskKind::kSentiment;
  s.sequence = std::vector<std::string>(12, "w");
  CHECK(CountSymbols(s, Variant::kScst, 4, nullptr) == 48);
  PreparedSample empty;
  empty.task = TaskKind::kQa;
  CHECK(CountSymbols(empty, Variant::kScst, 4, nullptr) == 0);
  // 36 framed bytes carry 288 bits, i.e. 72 16-QAM symbols.
  ClassicalCodes codes{HuffmanCode::Build({{'a', 1}, {'b', 1}}), RsCode(255, 223)};
  PreparedSample text;
  text.text = std::string(8, 'a');  // 8 bits -> 1 payload byte
  CHECK(ClassicalFrameBytes(1, codes.rs) == kClassicalHeaderBytes + 1 + 32);
  CHECK(CountSymbols(text, Variant::kClassical, 4, &codes) == 2 * 37);
}

TEST_CASE("filtering never increases symbols") {
  for (TaskKind task : {TaskKind::kSentiment, TaskKind::kQa}) {
    ExperimentConfig c = SmallConfig(task);
    TaskData data = LoadTaskData(c);
    auto scst = PrepareAll(data.test, Variant::kScst, c, data.test_context, data.answers);
    auto raw = PrepareAll(data.test, Variant::kScstNoFilter, c, data.test_context,
                          data.answers);
    auto full = PrepareAll(data.test, Variant::kFulltext, c, data.test_context,
                           data.answers);
    REQUIRE(scst.size() == full.size());
    for (size_t i = 0; i < scst.size(); ++i) {
      int64_t a = CountSymbols(scst[i], Variant::kScst, 4, nullptr);
      int64_t b = CountSymbols(raw[i], Variant::kScstNoFilter, 4, nullptr);
      int64_t f = CountSymbols(full[i], Variant::kFulltext, 4, nullptr);
      CHECK(a <= b);
      CHECK(b <= f);
    }
  }
}

TEST_CASE("flop counting rule") {
  nn::FlopCounter one;
  nn::MatMul(nn::Tensor::Zeros({1, 8}), nn::Tensor::Zeros({8, 4}));
  CHECK(one.count() == 64);
  nn::FlopCounter two;
  nn::Tensor h = nn::MatMul(nn::Tensor::Zeros({1, 8}), nn::Tensor::Zeros({8, 4}));
  nn::MatMul(h, nn::Tensor::Zeros({4, 2}));
  CHECK(two.count() == 64 + 16);
}

TEST_CASE("training is deterministic and evaluation is bounded") {
  ExperimentConfig c = SmallConfig(TaskKind::kSentiment);
  TaskData data = LoadTaskData(c);
  auto train = PrepareAll(data.train, Variant::kScst, c, data.train_context, data.answers);
  auto test = PrepareAll(data.test, Variant::kScst, c, data.test_context, data.answers);
  TrainedModel a = TrainTask(c, Variant::kScst, train, data.answers);
  TrainedModel b = TrainTask(c, Variant::kScst, train, data.answers);
  CHECK(nn::SerializeCheckpoint(a.system->Parameters()) ==
        nn::SerializeCheckpoint(b.system->Parameters()));
  CHECK(a.log.epoch_loss.size() == 2);

  ChannelSetting clean;
  double acc = Evaluate(*a.system, test, clean, 1);
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
  ChannelSetting noisy{false, ChannelKind::kRayleigh, 0.0};
  CHECK(Evaluate(*a.system, test, noisy, 7) == Evaluate(*a.system, test, noisy, 7));
  CHECK(testing::ThrownKind([&] { Evaluate(*a.system, {}, clean, 1); }) ==
        ErrorKind::kValidation);
}

TEST_CASE("loss falls and a tiny set is memorized") {
  ExperimentConfig c = SmallConfig(TaskKind::kSentiment);
  c.training.epochs = 150;
  c.training.snr_db = 20.0;
  c.sentiment.dropout = 0.0;
  TaskData data = LoadTaskData(c);
  std::vector<TaskSample> tiny(data.train.begin(), data.train.begin() + 20);
  auto train = PrepareAll(tiny, Variant::kScst, c, data.train_context, data.answers);
  TrainedModel m = TrainTask(c, Variant::kScst, train, data.answers);
  const auto& loss = m.log.epoch_loss;
  REQUIRE(loss.size() == 150);
  // Three-epoch moving average over the first five epochs.
  auto avg = [&](int e) { return (loss[e] + loss[e + 1] + loss[e + 2]) / 3.0; };
  CHECK(avg(0) > avg(1));
  CHECK(avg(1) > avg(2));
  ChannelSetting clean;
  CHECK(Evaluate(*m.system, train, clean, 1) >= 0.95);
}

TEST_CASE("majority predictor on balanced labels") {
  ExperimentConfig c = SmallConfig(TaskKind::kSentiment);
  TaskData data = LoadTaskData(c);
  int positive = 0;
  for (const TaskSample& s : data.test) positive += *s.label == 1;
  const double majority =
      std::max(positive, static_cast<int>(data.test.size()) - positive) /
      static_cast<double>(data.test.size());
  CHECK(majority == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("sweep cardinality, order and determinism") {
  ExperimentConfig c = SmallConfig(TaskKind::kSentiment);
  c.variants = {Variant::kScst, Variant::kClassical};
  auto first = SweepSnr(c);
  REQUIRE(first.size() == 1);
  const auto& rows = first[0].rows;
  CHECK(rows.size() == 12);
  for (const char* v : {"scst", "classical"}) {
    CHECK(std::count_if(rows.begin(), rows.end(),
                        [&](const MetricsRow& r) { return r.variant == v; }) == 6);
  }
  CHECK(std::is_sorted(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.variant, a.snr_db, a.seed) < std::tie(b.variant, b.snr_db, b.seed);
  }));
  for (const MetricsRow& r : rows) {
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
  }
  auto second = SweepSnr(c);
  CHECK(MetricsCsv(first[0].rows) == MetricsCsv(second[0].rows));
}

TEST_CASE("report emission") {
  MetricsRow r;
  r.variant = "scst";
  r.task = "qa";
  r.snr_db = 5;
  r.accuracy = 0.5;
  std::string csv = MetricsCsv({r});
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.rfind(std::string(kMetricsHeader) + "\n", 0) == 0);
  fs::path out = DataDir() / "report" / "m.csv";
  EmitReport({r}, out);
  CHECK(ReadFile(out) == csv);
  CHECK(fs::exists(DataDir() / "report" / "m.summary.txt"));
  CHECK_THROWS_AS(EmitReport({}, out), Error);
}

TEST_CASE("generated data is deterministic") {
  fs::path a = DataDir() / "gen_a", b = DataDir() / "gen_b";
  DataGenOptions opts{10, 5, 10, 5};
  GenerateDeskData(a, 11, opts);
  GenerateDeskData(b, 11, opts);
  for (const char* f : {"sentiment_train.conllu", "qa_train.txt", "qa_train_triplets.jsonl"}) {
    CHECK(ReadFile(a / f) == ReadFile(b / f));
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    QaStory s = GenerateQaStory(rng);
    CHECK(std::find(QaLocations().begin(), QaLocations().end(), s.answer) !=
          QaLocations().end());
    CHECK_FALSE(s.supporting.empty());
  }
}

}  // namespace
}  // namespace scst
