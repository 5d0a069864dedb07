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

/* C interface to the SCST simulator. Every function returns an scst_status;
 * on failure scst_last_error() describes the problem for the calling thread.
 * Handles are opaque and released with the matching *_free function. */

#ifndef SCST_SCST_H_
#define SCST_SCST_H_

#include <stdint.h>

#if defined(SCST_BUILDING_LIBRARY)
#define SCST_API __attribute__((visibility("default")))
#else
#define SCST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SCST_OK = 0,
  SCST_ERR_PARSE = 1,
  SCST_ERR_VALIDATION = 2,
  SCST_ERR_STRUCTURE = 3,
  SCST_ERR_CONFIG = 4,
  SCST_ERR_SHAPE = 5,
  SCST_ERR_IO = 6,
  SCST_ERR_RUNTIME = 7,
  SCST_ERR_ARGUMENT = 8
} scst_status;

typedef struct scst_config scst_config;
typedef struct scst_model scst_model;

SCST_API const char* scst_version(void);
SCST_API const char* scst_last_error(void);
SCST_API const char* scst_status_name(scst_status status);

/* Experiment configuration (one JSON document). */
SCST_API scst_status scst_config_load(const char* path, scst_config** out);
SCST_API scst_status scst_config_set_seed(scst_config* config, uint64_t seed);
SCST_API scst_status scst_config_set_variant(scst_config* config,
                                             const char* variant);
SCST_API scst_status scst_config_set_output_dir(scst_config* config,
                                                const char* dir);
SCST_API void scst_config_free(scst_config* config);

/* Rule + external triplet extraction over a CoNLL-U file. `triplets` and
 * `ref_table` may be NULL. Writes one JSON object per triplet. */
SCST_API scst_status scst_extract(const char* conllu, const char* triplets,
                                  const char* ref_table, const char* out,
                                  int64_t* count);

/* Two-step filtering of extracted triplets, grouped per sentence. The
 * knowledge base is a JSON task specification. `report` may be NULL. */
SCST_API scst_status scst_filter(const char* in, const char* knowledge_base,
                                 const char* out, const char* report,
                                 double* reduction_pct);

/* Trains the configured variant and writes checkpoint, vocabulary and log
 * under the output directory. `log_to_stderr` echoes per-epoch lines. */
SCST_API scst_status scst_train(const scst_config* config, int log_to_stderr,
                                scst_model** out);
/* Rebuilds the configured variant from its data and loads a checkpoint. */
SCST_API scst_status scst_model_load(const scst_config* config,
                                     const char* checkpoint, scst_model** out);
/* Test-split accuracy. `channel` is "none", "awgn" or "rayleigh". */
SCST_API scst_status scst_model_evaluate(const scst_model* model,
                                         const char* channel, double snr_db,
                                         uint64_t seed, double* accuracy);
SCST_API scst_status scst_model_flops(const scst_model* model,
                                      uint64_t* flops);
SCST_API void scst_model_free(scst_model* model);

/* SNR sweep over all configured variants and channels; CSV per channel. */
SCST_API scst_status scst_sweep(const scst_config* config, const char* out_dir,
                                int log_to_stderr);
/* Classical chain recovery statistics per channel. */
SCST_API scst_status scst_baseline(const scst_config* config,
                                   const char* out_dir);

/* Writes the generated desk corpora and default configs into `out_dir`. */
SCST_API scst_status scst_generate_data(const char* out_dir, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif  /* SCST_SCST_H_ */
