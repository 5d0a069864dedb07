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

#ifndef SCST_CONFIG_H_
#define SCST_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scst/channel.h"
#include "scst/classical.h"
#include "scst/corpus.h"
#include "scst/filtering.h"
#include "scst/semcodec.h"
#include "scst/stm.h"

namespace scst {

enum class Variant { kScst, kScstNoFilter, kFulltext, kClassical };

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);
bool IsTrainable(Variant v);

struct DataPaths {
  std::filesystem::path train;
  std::filesystem::path train_conllu;
  std::filesystem::path train_triplets;  // optional
  std::filesystem::path test;
  std::filesystem::path test_conllu;
  std::filesystem::path test_triplets;  // optional
  std::filesystem::path ref_table;      // optional
};

struct TrainingConfig {
  int epochs = 5;
  int batch_size = 8;
  double lr = 1e-3;
  // Fixed training SNR; when absent every batch draws one from the grid.
  std::optional<double> snr_db;
  // Stop early once this many samples' loss has been seen; 0 = no limit.
  int max_train_samples = 0;
};

struct ExperimentConfig {
  TaskKind task = TaskKind::kSentiment;
  Variant variant = Variant::kScst;
  std::vector<Variant> variants;  // sweep set
  DataPaths data;
  TaskSpec knowledge_base;
  SentimentModelConfig sentiment;
  StmConfig stm;
  int symbols_per_vector = 4;
  int min_freq = 1;
  std::vector<double> snr_grid_db;
  std::vector<ChannelKind> channels;
  TrainingConfig training;
  int rs_n = 255;
  int rs_k = 223;
  int eval_seeds = 3;
  uint64_t seed = 1;
  std::filesystem::path output_dir;

  void Validate() const;

  // Relative paths are resolved against `base_dir`.
  static ExperimentConfig FromJson(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir);
  static ExperimentConfig Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
};

// Ready-to-edit configuration for the generated desk corpora; data paths are
// relative to the directory holding the config.
nlohmann::json DefaultConfigJson(TaskKind task);

}  // namespace scst

#endif  // SCST_CONFIG_H_
