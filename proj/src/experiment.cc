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

#include "scst/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "scst/checkpoint.h"
#include "scst/error.h"

namespace scst {

using nn::Tensor;

namespace {

std::mt19937_64 SeededRng(uint64_t a, uint64_t b, uint64_t c = 0) {
  std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                    static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32),
                    static_cast<uint32_t>(c), static_cast<uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

TaskData LoadTaskData(const ExperimentConfig& config) {
  TaskData data;
  data.train = LoadTaskDataset(config.data.train, config.task, config.data.train_conllu);
  data.test = LoadTaskDataset(config.data.test, config.task, config.data.test_conllu);
  data.train_context =
      ExtractionContext::Load(config.data.train_triplets, config.data.ref_table);
  data.test_context =
      ExtractionContext::Load(config.data.test_triplets, config.data.ref_table);
  if (config.task == TaskKind::kQa) data.answers = AnswerVocabulary(data.train);
  return data;
}

std::vector<PreparedSample> PrepareAll(const std::vector<TaskSample>& samples,
                                       Variant variant,
                                       const ExperimentConfig& config,
                                       const ExtractionContext& context,
                                       const std::vector<std::string>& answers) {
  std::vector<PreparedSample> out;
  out.reserve(samples.size());
  for (const TaskSample& s : samples) {
    out.push_back(PrepareSample(s, variant, config.knowledge_base, context, answers));
  }
  return out;
}

TrainedModel CreateModel(const ExperimentConfig& config, Variant variant,
                         const std::vector<PreparedSample>& train,
                         const std::vector<std::string>& answers) {
  if (!IsTrainable(variant)) {
    throw ValidationError("variant " + std::string(VariantName(variant)) +
                          " has no trainable model");
  }
  std::mt19937_64 init = SeededRng(config.seed, 1);
  TrainedModel model;
  model.variant = variant;
  model.system = std::make_unique<TaskSystem>(
      config, BuildTaskVocab(train, config.min_freq), answers, init);
  return model;
}

TrainedModel TrainTask(const ExperimentConfig& config, Variant variant,
                       const std::vector<PreparedSample>& train,
                       const std::vector<std::string>& answers, std::ostream* log) {
  TrainedModel model = CreateModel(config, variant, train, answers);
  const TaskSystem& system = *model.system;
  std::vector<size_t> order;
  for (size_t i = 0; i < train.size(); ++i) {
    if (train[i].label >= 0) order.push_back(i);
  }
  if (order.empty()) throw ValidationError("training set has no labelled samples");
  if (config.training.max_train_samples > 0 &&
      order.size() > static_cast<size_t>(config.training.max_train_samples)) {
    order.resize(config.training.max_train_samples);
  }

  nn::Adam adam(system.Parameters(), {.lr = config.training.lr});
  std::mt19937_64 shuffle_rng = SeededRng(config.seed, 2);
  std::mt19937_64 model_rng = SeededRng(config.seed, 3);
  std::mt19937_64 channel_rng = SeededRng(config.seed, 4);
  std::uniform_int_distribution<size_t> pick_snr(0, config.snr_grid_db.size() - 1);
  const int classes = system.classes();
  const size_t batch = static_cast<size_t>(config.training.batch_size);

  for (int epoch = 1; epoch <= config.training.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    int correct = 0;
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      ChannelSetting channel;
      channel.noiseless = false;
      channel.kind = ChannelKind::kAwgn;
      channel.snr_db = config.training.snr_db ? *config.training.snr_db
                                              : config.snr_grid_db[pick_snr(channel_rng)];
      adam.ZeroGrad();
      for (size_t i = start; i < end; ++i) {
        const PreparedSample& sample = train[order[i]];
        nn::Tape tape;
        nn::TapeScope scope(tape);
        Tensor probs = system.Forward(sample, channel, true, model_rng, channel_rng);
        std::vector<double> onehot(classes, 0.0);
        onehot[sample.label] = 1.0;
        Tensor target = Tensor::FromVector({classes}, std::move(onehot));
        Tensor loss = config.task == TaskKind::kSentiment
                          ? nn::CrossEntropyBinary(probs, target)
                          : nn::CrossEntropyCategorical(probs, target);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw Error(ErrorKind::kRuntime,
                      "training diverged: loss " + std::to_string(value) +
                          " at epoch " + std::to_string(epoch) + ", sample " +
                          sample.id);
        }
        loss_sum += value;
        auto p = probs.values();
        if (std::max_element(p.begin(), p.end()) - p.begin() == sample.label) ++correct;
        tape.Backward(nn::Scale(loss, 1.0 / static_cast<double>(end - start)));
      }
      adam.Step();
    }
    const double mean_loss = loss_sum / static_cast<double>(order.size());
    const double accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    model.log.epoch_loss.push_back(mean_loss);
    model.log.epoch_accuracy.push_back(accuracy);
    if (log) {
      *log << TaskKindName(config.task) << "/" << VariantName(variant) << " epoch "
           << epoch << " loss " << Format("%.6f", mean_loss) << " train_acc "
           << Format("%.4f", accuracy) << "\n";
      log->flush();
    }
  }
  return model;
}

std::filesystem::path CheckpointPath(const ExperimentConfig& config, Variant variant) {
  return config.output_dir / (std::string(TaskKindName(config.task)) + "_" +
                              std::string(VariantName(variant)) + ".ckpt");
}

TrainedModel TrainAndSave(const ExperimentConfig& config, Variant variant,
                          const TaskData& data, std::ostream* log) {
  std::vector<PreparedSample> train =
      PrepareAll(data.train, variant, config, data.train_context, data.answers);
  TrainedModel model = TrainTask(config, variant, train, data.answers, log);
  const std::filesystem::path ckpt = CheckpointPath(config, variant);
  nn::SaveCheckpoint(ckpt, model.system->Parameters());
  std::filesystem::path vocab_path = ckpt;
  model.system->vocab().Save(vocab_path.replace_extension(".vocab"));
  std::string text;
  for (size_t e = 0; e < model.log.epoch_loss.size(); ++e) {
    text += std::to_string(e + 1) + "\t" + Format("%.6f", model.log.epoch_loss[e]) +
            "\t" + Format("%.4f", model.log.epoch_accuracy[e]) + "\n";
  }
  std::filesystem::path log_path = ckpt;
  WriteFile(log_path.replace_extension(".log"), "epoch\tloss\ttrain_acc\n" + text);
  return model;
}

double Evaluate(const TaskSystem& system, const std::vector<PreparedSample>& samples,
                const ChannelSetting& channel, uint64_t seed) {
  if (samples.empty()) throw ValidationError("cannot evaluate on an empty dataset");
  int correct = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    std::mt19937_64 rng = SeededRng(seed, i, 0x5eed);
    if (samples[i].label >= 0 && system.Predict(samples[i], channel, rng) == samples[i].label) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

ClassicalCodes BuildClassicalCodes(const ExperimentConfig& config,
                                   const std::vector<TaskSample>& train) {
  std::vector<std::string> texts;
  for (const TaskSample& s : train) texts.push_back(SampleText(s));
  return {HuffmanCode::Build(CountCharacters(texts)), RsCode(config.rs_n, config.rs_k)};
}

ClassicalEvaluation EvaluateClassical(const TaskSystem* fulltext_system,
                                      const std::vector<PreparedSample>& samples,
                                      const ClassicalCodes& codes, ChannelKind kind,
                                      double snr_db, uint64_t seed) {
  if (samples.empty()) throw ValidationError("cannot evaluate on an empty dataset");
  ClassicalEvaluation out;
  int correct = 0, exact = 0;
  double byte_errors = 0.0, symbols = 0.0;
  ChannelSetting clean;
  for (size_t i = 0; i < samples.size(); ++i) {
    std::mt19937_64 rng = SeededRng(seed, i, 0x5eed);
    ClassicalResult r = ClassicalTransmit(samples[i].text, codes, kind, snr_db, rng);
    exact += r.exact;
    byte_errors += static_cast<double>(r.byte_errors);
    symbols += static_cast<double>(r.symbols);
    if (fulltext_system && samples[i].label >= 0) {
      PreparedSample received = FromReceivedText(samples[i], r.text);
      std::mt19937_64 unused(0);
      if (fulltext_system->Predict(received, clean, unused) == samples[i].label) ++correct;
    }
  }
  const double n = static_cast<double>(samples.size());
  out.accuracy = correct / n;
  out.exact_recovery_rate = exact / n;
  out.mean_byte_errors = byte_errors / n;
  out.symbols_per_sentence = symbols / n;
  return out;
}

uint64_t EstimateFlops(const TaskSystem& system, const std::vector<PreparedSample>& samples) {
  if (samples.empty()) return 0;
  nn::FlopCounter counter;
  ChannelSetting clean;
  std::mt19937_64 rng(0);
  for (const PreparedSample& s : samples) system.Predict(s, clean, rng);
  return counter.count() / samples.size();
}

uint64_t EstimateClassicalFlops(const std::vector<PreparedSample>& samples,
                                const ClassicalCodes& codes) {
  if (samples.empty()) return 0;
  uint64_t total = 0;
  const uint64_t parity = static_cast<uint64_t>(codes.rs.parity());
  for (const PreparedSample& s : samples) {
    const uint64_t bits = codes.huffman.Encode(s.text).size();
    const uint64_t payload = (bits + 7) / 8;
    const uint64_t frame = static_cast<uint64_t>(ClassicalFrameBytes(payload, codes.rs));
    const uint64_t symbols = frame * 2;
    // Huffman walk per bit (both ends), RS encode and syndrome evaluation,
    // 16 squared distances of 3 operations per received symbol.
    total += 2 * bits + 2 * parity * payload + 2 * parity * frame + 48 * symbols;
  }
  return total / samples.size();
}

std::string MetricsCsv(const std::vector<MetricsRow>& rows) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const MetricsRow& r : rows) {
    out += r.variant + "," + r.task + "," + Format("%g", r.snr_db) + "," +
           std::to_string(r.seed) + "," + Format("%.6f", r.accuracy) + "," +
           Format("%.4f", r.symbols_per_sentence) + "," +
           Format("%.0f", r.flops_estimate) + "," + Format("%.4f", r.reduction_pct) +
           "\n";
  }
  return out;
}

std::string MetricsSummary(const std::vector<MetricsRow>& rows) {
  struct Acc {
    double accuracy = 0, symbols = 0, flops = 0, reduction = 0, max_reduction = 0;
    int n = 0;
  };
  std::map<std::string, Acc> by_variant;
  for (const MetricsRow& r : rows) {
    Acc& a = by_variant[r.variant];
    a.accuracy += r.accuracy;
    a.symbols += r.symbols_per_sentence;
    a.flops += r.flops_estimate;
    a.reduction += r.reduction_pct;
    a.max_reduction = std::max(a.max_reduction, r.reduction_pct);
    ++a.n;
  }
  std::string out = "variant\trows\tmean_accuracy\tmean_symbols\tmean_flops\tmean_reduction_pct\n";
  for (const auto& [name, a] : by_variant) {
    out += name + "\t" + std::to_string(a.n) + "\t" + Format("%.4f", a.accuracy / a.n) +
           "\t" + Format("%.2f", a.symbols / a.n) + "\t" + Format("%.0f", a.flops / a.n) +
           "\t" + Format("%.2f", a.reduction / a.n) + "\n";
  }
  return out;
}

void EmitReport(const std::vector<MetricsRow>& rows, const std::filesystem::path& csv_path) {
  if (rows.empty()) throw ValidationError("no metrics rows to report");
  WriteFile(csv_path, MetricsCsv(rows));
  std::filesystem::path summary = csv_path;
  summary.replace_extension(".summary.txt");
  WriteFile(summary, MetricsSummary(rows));
}

std::vector<SweepResult> SweepSnr(const ExperimentConfig& config, std::ostream* log) {
  TaskData data = LoadTaskData(config);
  const std::string task(TaskKindName(config.task));
  std::vector<Variant> variants = config.variants;
  std::sort(variants.begin(), variants.end(), [](Variant a, Variant b) {
    return VariantName(a) < VariantName(b);
  });
  variants.erase(std::unique(variants.begin(), variants.end()), variants.end());
  const bool need_classical =
      std::find(variants.begin(), variants.end(), Variant::kClassical) != variants.end();

  struct Prepared {
    std::vector<PreparedSample> test;
    TrainedModel model;
  };
  std::map<Variant, Prepared> prepared;
  auto ensure = [&](Variant v) -> Prepared& {
    auto it = prepared.find(v);
    if (it != prepared.end()) return it->second;
    Prepared p;
    p.test = PrepareAll(data.test, v, config, data.test_context, data.answers);
    if (IsTrainable(v)) {
      std::vector<PreparedSample> train =
          PrepareAll(data.train, v, config, data.train_context, data.answers);
      p.model = TrainTask(config, v, train, data.answers, log);
    }
    return prepared.emplace(v, std::move(p)).first->second;
  };
  for (Variant v : variants) ensure(v);
  std::unique_ptr<ClassicalCodes> codes;
  if (need_classical) {
    ensure(Variant::kFulltext);
    codes = std::make_unique<ClassicalCodes>(BuildClassicalCodes(config, data.train));
  }

  std::vector<SweepResult> results;
  for (ChannelKind kind : config.channels) {
    SweepResult result;
    result.channel = kind;
    for (Variant v : variants) {
      const Prepared& p = prepared.at(v);
      double symbols = 0.0, reduction = 0.0;
      for (const PreparedSample& s : p.test) {
        symbols += static_cast<double>(
            CountSymbols(s, v, config.symbols_per_vector, codes.get()));
        reduction += s.report.reduction_pct;
      }
      symbols /= static_cast<double>(p.test.size());
      reduction /= static_cast<double>(p.test.size());
      const TaskSystem* fulltext =
          need_classical ? prepared.at(Variant::kFulltext).model.system.get() : nullptr;
      double flops = 0.0;
      if (v == Variant::kClassical) {
        flops = static_cast<double>(EstimateClassicalFlops(p.test, *codes) +
                                    EstimateFlops(*fulltext, p.test));
      } else {
        flops = static_cast<double>(EstimateFlops(*p.model.system, p.test));
      }
      for (double snr : config.snr_grid_db) {
        for (int seed = 1; seed <= config.eval_seeds; ++seed) {
          const uint64_t noise_seed = config.seed * 1000003ull + static_cast<uint64_t>(seed);
          MetricsRow row;
          row.variant = std::string(VariantName(v));
          row.task = task;
          row.snr_db = snr;
          row.seed = seed;
          if (v == Variant::kClassical) {
            row.accuracy =
                EvaluateClassical(fulltext, p.test, *codes, kind, snr, noise_seed).accuracy;
          } else {
            ChannelSetting channel{false, kind, snr};
            row.accuracy = Evaluate(*p.model.system, p.test, channel, noise_seed);
          }
          row.symbols_per_sentence = symbols;
          row.flops_estimate = flops;
          row.reduction_pct = v == Variant::kClassical ? 0.0 : reduction;
          result.rows.push_back(row);
        }
        if (log) {
          *log << task << "/" << VariantName(v) << " " << ChannelKindName(kind) << " "
               << Format("%g", snr) << " dB done\n";
          log->flush();
        }
      }
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const MetricsRow& a, const MetricsRow& b) {
                       return std::tie(a.variant, a.snr_db, a.seed) <
                              std::tie(b.variant, b.snr_db, b.seed);
                     });
    results.push_back(std::move(result));
  }
  return results;
}

void RunSweep(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::ostream* log) {
  for (const SweepResult& r : SweepSnr(config, log)) {
    EmitReport(r.rows, out_dir / ("metrics_" + std::string(ChannelKindName(r.channel)) + ".csv"));
  }
}

void RunBaseline(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  TaskData data = LoadTaskData(config);
  ClassicalCodes codes = BuildClassicalCodes(config, data.train);
  std::vector<std::string> texts;
  for (const TaskSample& s : data.train) texts.push_back(SampleText(s));
  WriteFile(out_dir / "huffman_frequencies.tsv", SerializeFrequencies(CountCharacters(texts)));
  std::vector<PreparedSample> test =
      PrepareAll(data.test, Variant::kClassical, config, data.test_context, data.answers);
  for (ChannelKind kind : config.channels) {
    std::string csv = "snr_db,seed,exact_recovery_rate,mean_byte_errors,symbols_per_sentence\n";
    for (double snr : config.snr_grid_db) {
      for (int seed = 1; seed <= config.eval_seeds; ++seed) {
        const uint64_t noise_seed = config.seed * 1000003ull + static_cast<uint64_t>(seed);
        ClassicalEvaluation e = EvaluateClassical(nullptr, test, codes, kind, snr, noise_seed);
        csv += Format("%g", snr) + "," + std::to_string(seed) + "," +
               Format("%.6f", e.exact_recovery_rate) + "," +
               Format("%.4f", e.mean_byte_errors) + "," +
               Format("%.4f", e.symbols_per_sentence) + "\n";
      }
    }
    WriteFile(out_dir / ("baseline_" + std::string(ChannelKindName(kind)) + ".csv"), csv);
  }
}

}  // namespace scst
