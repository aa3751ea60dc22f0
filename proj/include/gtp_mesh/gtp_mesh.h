// Copyright (c) 2026 The gtp-mesh Authors
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

#ifndef GTP_MESH_GTP_MESH_H_
#define GTP_MESH_GTP_MESH_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define GTP_API __attribute__((visibility("default")))
#else
#define GTP_API
#endif

/* Status codes. Values 1..24 mirror the engine's error kinds. */
typedef enum gtp_status {
  GTP_OK = 0,
  GTP_E_INVALID_ARGUMENT = 1,
  GTP_E_IO = 2,
  GTP_E_PARSE = 3,
  GTP_E_UNKNOWN_PHONEME = 4,
  GTP_E_ADJACENT_BOUNDARY = 5,
  GTP_E_NO_RULE = 6,
  GTP_E_EMPTY_PRONUNCIATION = 7,
  GTP_E_UNKNOWN_VARIANT = 8,
  GTP_E_MISSING_ALIGNMENT = 9,
  GTP_E_TAG_LENGTH_MISMATCH = 10,
  GTP_E_EMPTY_CORPUS = 11,
  GTP_E_OVERSIZE = 12,
  GTP_E_TRUNCATED = 13,
  GTP_E_MALFORMED_PAYLOAD = 14,
  GTP_E_SPAWN_FAILED = 15,
  GTP_E_READY_TIMEOUT = 16,
  GTP_E_TIMEOUT = 17,
  GTP_E_BROKEN_PIPE = 18,
  GTP_E_SERVICE_UNAVAILABLE = 19,
  GTP_E_REMOTE = 20,
  GTP_E_ZERO_DURATION = 21,
  GTP_E_EMPTY_REFERENCE = 22,
  GTP_E_EMPTY_CASES = 23,
  GTP_E_ZERO_PER = 24,
  GTP_E_INTERNAL = 100
} gtp_status;

typedef struct gtp_pipeline gtp_pipeline;

/* Message of the last failure on the calling thread; "" after success. */
GTP_API const char* gtp_last_error(void);
GTP_API const char* gtp_status_name(gtp_status status);

/* Frees strings returned through char** out-parameters. */
GTP_API void gtp_string_free(char* s);

/* config_path NULL or "" falls back to $GTP_MESH_CONFIG. mode NULL uses the
 * config's mode (direct_cold, direct_warm or service). */
GTP_API gtp_status gtp_pipeline_open(const char* config_path, const char* mode,
                                     gtp_pipeline** out);
/* Shuts down a spawned service. NULL is accepted. */
GTP_API void gtp_pipeline_close(gtp_pipeline* p);

/* Refined phoneme text. With want_trace, *out_trace receives the refinement
 * events followed by the stage timing lines; pass NULL otherwise. */
GTP_API gtp_status gtp_pipeline_phonemize(gtp_pipeline* p, const char* text, char** out_phonemes,
                                          char** out_trace);

/* Full run with the synth stub; writes the WAV to wav_path. */
GTP_API gtp_status gtp_pipeline_synth(gtp_pipeline* p, const char* text, const char* wav_path,
                                      double* out_duration_s, char** out_trace);

/* Blocks running the service loop on the configured transport. */
GTP_API gtp_status gtp_serve(const char* config_path);

/* inventory_path may be NULL to skip phoneme validation of the lexicon. */
GTP_API gtp_status gtp_build_db(const char* corpus_path, const char* lexicon_path,
                                const char* inventory_path, const char* out_path, int window,
                                double alpha, char** out_summary);

GTP_API gtp_status gtp_train_ezafe(const char* corpus_path, const char* out_path, int epochs,
                                   char** out_summary);

/* Metric lines "name=value", one per metric. mode may be NULL. */
GTP_API gtp_status gtp_eval(const char* config_path, const char* cases_path, const char* mode,
                            char** out_report);

/* modes is comma-separated. points_path may be NULL. *out_summary gets the
 * CSV text. */
GTP_API gtp_status gtp_bench(const char* config_path, const char* cases_path, const char* modes,
                             int runs, const char* csv_path, const char* points_path,
                             char** out_summary);

#ifdef __cplusplus
}
#endif

#endif /* GTP_MESH_GTP_MESH_H_ */
