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

// Command-line front end over the C API.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "scst/scst.h"

namespace {

int ExitCode(scst_status status) {
  switch (status) {
    case SCST_OK: return 0;
    case SCST_ERR_IO:
    case SCST_ERR_RUNTIME: return 1;
    default: return 2;
  }
}

int Report(scst_status status) {
  if (status != SCST_OK) {
    std::fprintf(stderr, "scst: %s: %s\n", scst_status_name(status), scst_last_error());
  }
  return ExitCode(status);
}

// Loads the config and applies the shared overrides.
scst_status OpenConfig(const std::string& path, const std::optional<uint64_t>& seed,
                       const std::string& variant, const std::string& output_dir,
                       scst_config** config) {
  scst_status s = scst_config_load(path.c_str(), config);
  if (s != SCST_OK) return s;
  if (seed) s = scst_config_set_seed(*config, *seed);
  if (s == SCST_OK && !variant.empty()) s = scst_config_set_variant(*config, variant.c_str());
  if (s == SCST_OK && !output_dir.empty()) {
    s = scst_config_set_output_dir(*config, output_dir.c_str());
  }
  if (s != SCST_OK) {
    scst_config_free(*config);
    *config = nullptr;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-triplet communication simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(scst_version()));

  std::string conllu, triplets, refs, out, in, kb, report, config_path, checkpoint;
  std::string variant, output_dir, channel = "none";
  std::optional<uint64_t> seed;
  double snr_db = 0.0;
  bool quiet = false;

  auto* extract = app.add_subcommand("extract", "Extract triplets from CoNLL-U parses");
  extract->add_option("--conllu", conllu, "CoNLL-U file")->required();
  extract->add_option("--triplets", triplets, "External triplets (JSON lines)");
  extract->add_option("--refs", refs, "Entity reference table (TSV)");
  extract->add_option("--out", out, "Output JSON lines")->required();

  auto* filter = app.add_subcommand("filter", "Filter extracted triplets");
  filter->add_option("--in", in, "Triplets (JSON lines)")->required();
  filter->add_option("--kb", kb, "Knowledge base task spec (JSON)")->required();
  filter->add_option("--out", out, "Kept triplets (JSON lines)")->required();
  filter->add_option("--report", report, "Reduction report (JSON)");

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    cmd->add_option("--seed", seed, "Override the config seed");
  };

  auto* train = app.add_subcommand("train", "Train one pipeline variant");
  add_config(train);
  train->add_option("--variant", variant, "Override the config variant");
  train->add_option("--output-dir", output_dir, "Override the output directory");
  train->add_flag("--quiet", quiet, "Suppress per-epoch progress");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  add_config(eval);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--variant", variant, "Override the config variant");
  eval->add_option("--channel", channel, "none, awgn or rayleigh");
  eval->add_option("--snr", snr_db, "Channel SNR in dB");

  auto* sweep = app.add_subcommand("sweep", "Accuracy versus SNR for all variants");
  add_config(sweep);
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_flag("--quiet", quiet, "Suppress progress output");

  auto* baseline = app.add_subcommand("baseline", "Classical chain recovery sweep");
  add_config(baseline);
  baseline->add_option("--out", out, "Output directory")->required();

  auto* gen = app.add_subcommand("gen-data", "Write the generated desk corpora");
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*extract) {
    int64_t count = 0;
    int rc = Report(scst_extract(conllu.c_str(), triplets.empty() ? nullptr : triplets.c_str(),
                                 refs.empty() ? nullptr : refs.c_str(), out.c_str(), &count));
    if (rc == 0) std::printf("%lld triplets written to %s\n", static_cast<long long>(count), out.c_str());
    return rc;
  }
  if (*filter) {
    double reduction = 0.0;
    int rc = Report(scst_filter(in.c_str(), kb.c_str(), out.c_str(),
                                report.empty() ? nullptr : report.c_str(), &reduction));
    if (rc == 0) std::printf("token reduction %.2f%%\n", reduction);
    return rc;
  }
  if (*gen) {
    int rc = Report(scst_generate_data(out.c_str(), seed.value_or(1)));
    if (rc == 0) std::printf("desk data written to %s\n", out.c_str());
    return rc;
  }

  scst_config* config = nullptr;
  scst_status s = OpenConfig(config_path, seed, variant, output_dir, &config);
  if (s != SCST_OK) return Report(s);

  if (*train) {
    scst_model* model = nullptr;
    s = scst_train(config, quiet ? 0 : 1, &model);
    if (s == SCST_OK) {
      double acc = 0.0;
      s = scst_model_evaluate(model, "none", 0.0, 1, &acc);
      if (s == SCST_OK) std::printf("noiseless test accuracy %.4f\n", acc);
      scst_model_free(model);
    }
  } else if (*eval) {
    scst_model* model = nullptr;
    s = scst_model_load(config, checkpoint.c_str(), &model);
    if (s == SCST_OK) {
      double acc = 0.0;
      s = scst_model_evaluate(model, channel.c_str(), snr_db, seed.value_or(1), &acc);
      if (s == SCST_OK) {
        if (channel == "none") {
          std::printf("accuracy %.4f (noiseless)\n", acc);
        } else {
          std::printf("accuracy %.4f (%s, %g dB)\n", acc, channel.c_str(), snr_db);
        }
      }
      scst_model_free(model);
    }
  } else if (*sweep) {
    s = scst_sweep(config, out.c_str(), quiet ? 0 : 1);
    if (s == SCST_OK) std::printf("metrics written to %s\n", out.c_str());
  } else if (*baseline) {
    s = scst_baseline(config, out.c_str());
    if (s == SCST_OK) std::printf("baseline written to %s\n", out.c_str());
  }
  scst_config_free(config);
  return Report(s);
}
