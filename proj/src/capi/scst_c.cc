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

#include "scst/scst.h"

#include <algorithm>
#include <exception>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "scst/checkpoint.h"
#include "scst/config.h"
#include "scst/corpus.h"
#include "scst/datagen.h"
#include "scst/error.h"
#include "scst/experiment.h"
#include "scst/extraction.h"
#include "scst/filtering.h"

struct scst_config {
  scst::ExperimentConfig config;
};

struct scst_model {
  scst::ExperimentConfig config;
  scst::TrainedModel model;
  std::vector<scst::PreparedSample> test;
};

namespace {

thread_local std::string g_last_error;

scst_status FromKind(scst::ErrorKind kind) {
  switch (kind) {
    case scst::ErrorKind::kParse: return SCST_ERR_PARSE;
    case scst::ErrorKind::kValidation: return SCST_ERR_VALIDATION;
    case scst::ErrorKind::kStructure: return SCST_ERR_STRUCTURE;
    case scst::ErrorKind::kConfig: return SCST_ERR_CONFIG;
    case scst::ErrorKind::kShape: return SCST_ERR_SHAPE;
    case scst::ErrorKind::kIo: return SCST_ERR_IO;
    case scst::ErrorKind::kRuntime: return SCST_ERR_RUNTIME;
  }
  return SCST_ERR_RUNTIME;
}

template <typename F>
scst_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SCST_OK;
  } catch (const scst::Error& e) {
    g_last_error = e.what();
    return FromKind(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return SCST_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCST_ERR_RUNTIME;
  }
}

scst_status BadArgument(const char* what) {
  g_last_error = std::string("invalid argument: ") + what;
  return SCST_ERR_ARGUMENT;
}

nlohmann::json TripletJson(const scst::Triplet& t, int sentence_tokens) {
  return {{"sent_id", t.sent_id},       {"head", t.head.text},
          {"relation", t.relation},     {"tail", t.tail.text},
          {"provenance", t.provenance}, {"sentence_tokens", sentence_tokens}};
}

}  // namespace

extern "C" {

const char* scst_version(void) { return "1.0.0"; }

const char* scst_last_error(void) { return g_last_error.c_str(); }

const char* scst_status_name(scst_status status) {
  switch (status) {
    case SCST_OK: return "ok";
    case SCST_ERR_PARSE: return "parse error";
    case SCST_ERR_VALIDATION: return "validation error";
    case SCST_ERR_STRUCTURE: return "structure error";
    case SCST_ERR_CONFIG: return "config error";
    case SCST_ERR_SHAPE: return "shape error";
    case SCST_ERR_IO: return "io error";
    case SCST_ERR_RUNTIME: return "runtime error";
    case SCST_ERR_ARGUMENT: return "argument error";
  }
  return "unknown";
}

scst_status scst_config_load(const char* path, scst_config** out) {
  if (!path || !out) return BadArgument("path and out are required");
  return Guard([&] {
    auto handle = std::make_unique<scst_config>();
    handle->config = scst::ExperimentConfig::Load(path);
    *out = handle.release();
  });
}

scst_status scst_config_set_seed(scst_config* config, uint64_t seed) {
  if (!config) return BadArgument("config is null");
  config->config.seed = seed;
  return SCST_OK;
}

scst_status scst_config_set_variant(scst_config* config, const char* variant) {
  if (!config || !variant) return BadArgument("config and variant are required");
  return Guard([&] { config->config.variant = scst::ParseVariant(variant); });
}

scst_status scst_config_set_output_dir(scst_config* config, const char* dir) {
  if (!config || !dir) return BadArgument("config and dir are required");
  config->config.output_dir = dir;
  return SCST_OK;
}

void scst_config_free(scst_config* config) { delete config; }

scst_status scst_extract(const char* conllu, const char* triplets,
                         const char* ref_table, const char* out, int64_t* count) {
  if (!conllu || !out) return BadArgument("conllu and out are required");
  return Guard([&] {
    std::vector<scst::DepTree> trees = scst::LoadConllu(conllu);
    std::map<std::string, std::vector<scst::ExternalTriplet>> external;
    if (triplets) {
      for (auto& t : scst::LoadExternalTriplets(triplets)) {
        external[t.sent_id].push_back(std::move(t));
      }
    }
    scst::RefTable refs;
    if (ref_table) refs = scst::LoadRefTable(ref_table);
    static const std::vector<scst::ExternalTriplet> kNone;
    std::string lines;
    int64_t n = 0;
    std::vector<std::string> warnings;
    for (const scst::DepTree& tree : trees) {
      auto it = external.find(tree.sent_id);
      for (const scst::Triplet& t : scst::ExtractSemantics(
               tree, it == external.end() ? kNone : it->second, refs, &warnings)) {
        lines += TripletJson(t, tree.size()).dump() + "\n";
        ++n;
      }
    }
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    scst::WriteFile(out, lines);
    if (count) *count = n;
  });
}

scst_status scst_filter(const char* in, const char* knowledge_base, const char* out,
                        const char* report, double* reduction_pct) {
  if (!in || !knowledge_base || !out) {
    return BadArgument("in, knowledge_base and out are required");
  }
  return Guard([&] {
    scst::TaskSpec spec =
        scst::TaskSpec::FromJson(nlohmann::json::parse(scst::ReadFile(knowledge_base)));
    // Group by sentence, keeping first-appearance order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<scst::Triplet>> groups;
    std::map<std::string, int> tokens;
    const std::string content = scst::ReadFile(in);
    size_t line_no = 0, pos = 0;
    while (pos < content.size()) {
      size_t end = content.find('\n', pos);
      if (end == std::string::npos) end = content.size();
      std::string line = content.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw scst::ParseError(std::string(in) + ":" + std::to_string(line_no) + ": " +
                               e.what());
      }
      scst::Triplet t;
      try {
        t.sent_id = j.value("sent_id", std::string());
        t.head = scst::EntitySpan::Plain(j.at("head").get<std::string>());
        t.relation = j.at("relation").get<std::string>();
        t.tail = scst::EntitySpan::Plain(j.at("tail").get<std::string>());
        t.provenance = j.value("provenance", std::string("external"));
      } catch (const nlohmann::json::exception& e) {
        throw scst::ParseError(std::string(in) + ":" + std::to_string(line_no) + ": " +
                               e.what());
      }
      if (!groups.count(t.sent_id)) order.push_back(t.sent_id);
      if (j.contains("sentence_tokens")) {
        tokens[t.sent_id] = j.at("sentence_tokens").get<int>();
      }
      groups[t.sent_id].push_back(std::move(t));
    }
    std::string lines;
    int input_count = 0, kept_count = 0, input_tokens = 0, kept_tokens = 0;
    double reduction_sum = 0.0, reduction_max = 0.0;
    for (const std::string& id : order) {
      auto tok = tokens.find(id);
      std::optional<int> source;
      if (tok != tokens.end()) source = tok->second;
      auto [kept, rep] = scst::FilterSemantics(groups[id], spec, source);
      for (const scst::Triplet& t : kept) {
        lines += TripletJson(t, rep.input_tokens).dump() + "\n";
      }
      input_count += rep.input_count;
      kept_count += rep.kept_count;
      input_tokens += rep.input_tokens;
      kept_tokens += rep.kept_tokens;
      reduction_sum += rep.reduction_pct;
      reduction_max = std::max(reduction_max, rep.reduction_pct);
    }
    scst::WriteFile(out, lines);
    const double overall =
        input_tokens > 0 ? 100.0 * (1.0 - static_cast<double>(kept_tokens) / input_tokens)
                         : 0.0;
    if (report) {
      nlohmann::json r = {
          {"sentences", order.size()},
          {"input_triplets", input_count},
          {"kept_triplets", kept_count},
          {"input_tokens", input_tokens},
          {"kept_tokens", kept_tokens},
          {"reduction_pct", overall},
          {"mean_reduction_pct", order.empty() ? 0.0 : reduction_sum / order.size()},
          {"max_reduction_pct", reduction_max}};
      scst::WriteFile(report, r.dump(2) + "\n");
    }
    if (reduction_pct) *reduction_pct = overall;
  });
}

scst_status scst_train(const scst_config* config, int log_to_stderr, scst_model** out) {
  if (!config || !out) return BadArgument("config and out are required");
  return Guard([&] {
    auto handle = std::make_unique<scst_model>();
    handle->config = config->config;
    scst::TaskData data = scst::LoadTaskData(handle->config);
    handle->model = scst::TrainAndSave(handle->config, handle->config.variant, data,
                                       log_to_stderr ? &std::cerr : nullptr);
    handle->test = scst::PrepareAll(data.test, handle->config.variant, handle->config,
                                    data.test_context, data.answers);
    *out = handle.release();
  });
}

scst_status scst_model_load(const scst_config* config, const char* checkpoint,
                            scst_model** out) {
  if (!config || !checkpoint || !out) {
    return BadArgument("config, checkpoint and out are required");
  }
  return Guard([&] {
    auto handle = std::make_unique<scst_model>();
    handle->config = config->config;
    scst::TaskData data = scst::LoadTaskData(handle->config);
    std::vector<scst::PreparedSample> train =
        scst::PrepareAll(data.train, handle->config.variant, handle->config,
                         data.train_context, data.answers);
    handle->model =
        scst::CreateModel(handle->config, handle->config.variant, train, data.answers);
    scst::nn::ParamList params = handle->model.system->Parameters();
    scst::nn::LoadCheckpoint(checkpoint, params);
    handle->test = scst::PrepareAll(data.test, handle->config.variant, handle->config,
                                    data.test_context, data.answers);
    *out = handle.release();
  });
}

scst_status scst_model_evaluate(const scst_model* model, const char* channel,
                                double snr_db, uint64_t seed, double* accuracy) {
  if (!model || !channel || !accuracy) {
    return BadArgument("model, channel and accuracy are required");
  }
  return Guard([&] {
    scst::ChannelSetting setting;
    if (std::string(channel) != "none") {
      setting.noiseless = false;
      setting.kind = scst::ParseChannelKind(channel);
      setting.snr_db = snr_db;
    }
    *accuracy = scst::Evaluate(*model->model.system, model->test, setting, seed);
  });
}

scst_status scst_model_flops(const scst_model* model, uint64_t* flops) {
  if (!model || !flops) return BadArgument("model and flops are required");
  return Guard([&] { *flops = scst::EstimateFlops(*model->model.system, model->test); });
}

void scst_model_free(scst_model* model) { delete model; }

scst_status scst_sweep(const scst_config* config, const char* out_dir, int log_to_stderr) {
  if (!config || !out_dir) return BadArgument("config and out_dir are required");
  return Guard([&] {
    scst::RunSweep(config->config, out_dir, log_to_stderr ? &std::cerr : nullptr);
  });
}

scst_status scst_baseline(const scst_config* config, const char* out_dir) {
  if (!config || !out_dir) return BadArgument("config and out_dir are required");
  return Guard([&] { scst::RunBaseline(config->config, out_dir); });
}

scst_status scst_generate_data(const char* out_dir, uint64_t seed) {
  if (!out_dir) return BadArgument("out_dir is required");
  return Guard([&] { scst::GenerateDeskData(out_dir, seed); });
}

}  // extern "C"
