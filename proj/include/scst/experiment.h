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

#ifndef SCST_EXPERIMENT_H_
#define SCST_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "scst/classical.h"
#include "scst/config.h"
#include "scst/pipeline.h"

namespace scst {

struct TaskData {
  std::vector<TaskSample> train;
  std::vector<TaskSample> test;
  ExtractionContext train_context;
  ExtractionContext test_context;
  std::vector<std::string> answers;  // QA answer vocabulary (train split)
};

TaskData LoadTaskData(const ExperimentConfig& config);

std::vector<PreparedSample> PrepareAll(const std::vector<TaskSample>& samples,
                                       Variant variant,
                                       const ExperimentConfig& config,
                                       const ExtractionContext& context,
                                       const std::vector<std::string>& answers);

struct TrainLog {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;  // on the training samples, in flight
};

struct TrainedModel {
  Variant variant = Variant::kScst;
  std::unique_ptr<TaskSystem> system;
  TrainLog log;
};

// Builds the vocabulary and an untrained system for `variant`.
TrainedModel CreateModel(const ExperimentConfig& config, Variant variant,
                         const std::vector<PreparedSample>& train,
                         const std::vector<std::string>& answers);

// End-to-end training through the stochastic channel. A NaN or infinite loss
// aborts with a runtime error. Per-epoch lines go to `log` when given.
TrainedModel TrainTask(const ExperimentConfig& config, Variant variant,
                       const std::vector<PreparedSample>& train,
                       const std::vector<std::string>& answers,
                       std::ostream* log = nullptr);

// Trains from the configured data, then writes <task>_<variant>.ckpt, the
// vocabulary and the training log under the output directory.
TrainedModel TrainAndSave(const ExperimentConfig& config, Variant variant,
                          const TaskData& data, std::ostream* log = nullptr);

std::filesystem::path CheckpointPath(const ExperimentConfig& config, Variant variant);

// Fraction of samples predicted correctly. The channel RNG for sample i is
// seeded from (seed, i) alone, so SNR points share noise shapes.
double Evaluate(const TaskSystem& system,
                const std::vector<PreparedSample>& samples,
                const ChannelSetting& channel, uint64_t seed);

struct ClassicalEvaluation {
  double accuracy = 0.0;
  double exact_recovery_rate = 0.0;
  double mean_byte_errors = 0.0;
  double symbols_per_sentence = 0.0;
};

// Sends each sample's text through the classical chain and classifies the
// recovered text with `fulltext_system`. Without a system only the recovery
// statistics are computed.
ClassicalEvaluation EvaluateClassical(const TaskSystem* fulltext_system,
                                      const std::vector<PreparedSample>& samples,
                                      const ClassicalCodes& codes,
                                      ChannelKind kind, double snr_db,
                                      uint64_t seed);

ClassicalCodes BuildClassicalCodes(const ExperimentConfig& config,
                                   const std::vector<TaskSample>& train);

// Mean floating-point operations of one noiseless receiver-side forward pass.
uint64_t EstimateFlops(const TaskSystem& system,
                       const std::vector<PreparedSample>& samples);
// Analytic count for the classical chain: per byte, RS encode/decode
// multiply-adds and per symbol the 16-point distance search.
uint64_t EstimateClassicalFlops(const std::vector<PreparedSample>& samples,
                                const ClassicalCodes& codes);

struct MetricsRow {
  std::string variant;
  std::string task;
  double snr_db = 0.0;
  int seed = 0;
  double accuracy = 0.0;
  double symbols_per_sentence = 0.0;
  double flops_estimate = 0.0;
  double reduction_pct = 0.0;
};

inline constexpr char kMetricsHeader[] =
    "variant,task,snr_db,seed,accuracy,symbols_per_sentence,flops_estimate,"
    "reduction_pct";

struct SweepResult {
  ChannelKind channel = ChannelKind::kAwgn;
  std::vector<MetricsRow> rows;
};

// Trains every trainable variant once, then evaluates all variants over the
// SNR grid for every configured channel and seed. Rows are sorted by
// (variant, snr, seed).
std::vector<SweepResult> SweepSnr(const ExperimentConfig& config,
                                  std::ostream* log = nullptr);

std::string MetricsCsv(const std::vector<MetricsRow>& rows);
std::string MetricsSummary(const std::vector<MetricsRow>& rows);
// Writes `csv_path` and a companion summary next to it (".summary.txt").
void EmitReport(const std::vector<MetricsRow>& rows,
                const std::filesystem::path& csv_path);

// metrics_<channel>.csv for each channel, plus summaries.
void RunSweep(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::ostream* log = nullptr);

// Classical chain only: recovery statistics per (channel, snr, seed) in
// baseline_<channel>.csv.
void RunBaseline(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace scst

#endif  // SCST_EXPERIMENT_H_
