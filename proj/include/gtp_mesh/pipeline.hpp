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

#ifndef GTP_MESH_PIPELINE_HPP_
#define GTP_MESH_PIPELINE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtp_mesh/config.hpp"
#include "gtp_mesh/lexicon.hpp"
#include "gtp_mesh/refine.hpp"
#include "gtp_mesh/service.hpp"

namespace gtp {

// direct_cold loads the refinement models on every call, direct_warm once
// per pipeline, service sends each request to a persistent service process.
enum class Mode { kDirectCold, kDirectWarm, kService };

Mode ParseMode(std::string_view name);
const char* ModeName(Mode mode);

struct StageTimings {
  double load = 0.0;
  double base_g2p = 0.0;
  double refine = 0.0;
  double synth = 0.0;
  double total = 0.0;
};

// One "stage=<name> seconds=<x>" line per stage.
std::string FormatTimingTrace(const StageTimings& t);

inline constexpr int kSampleRate = 16000;

struct SynthResult {
  double audio_duration_s = 0.0;
  std::vector<int16_t> samples;  // mono 16 kHz silence
  StageTimings timings;
};

// Stand-in for the neural synthesizer: duration is linear in phoneme count,
// and the call sleeps duration * synth_rtf before returning silence.
SynthResult SynthesizeStub(size_t phoneme_count, double sec_per_phoneme, double synth_rtf);

// RIFF/WAVE, PCM 16-bit mono.
std::string EncodeWav(const std::vector<int16_t>& samples, int sample_rate = kSampleRate);

struct PipelineOutput {
  BaseOutput base;
  RefineResult refined;
  SynthResult synth;
};

// total / audio duration. Throws Error(kZeroDuration).
double RtfOf(const SynthResult& result);

class Pipeline {
 public:
  // Loads the core artifacts. Service mode spawns its own service unless one
  // is supplied.
  Pipeline(GtpConfig config, Mode mode, std::shared_ptr<ServiceHandle> service = nullptr);
  ~Pipeline();

  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  // Base phonemization and refinement, then the synth stub.
  PipelineOutput Run(std::string_view text, const TraceFn& trace = {});
  // Same without synthesis; synth fields stay zero.
  PipelineOutput Phonemize(std::string_view text, const TraceFn& trace = {});

  Mode mode() const { return mode_; }
  const GtpConfig& config() const { return config_; }
  const CoreArtifacts& core() const { return core_; }
  const std::shared_ptr<ServiceHandle>& service() const { return service_; }

  // Shuts down a service this pipeline spawned.
  void Close();

 private:
  PipelineOutput Process(std::string_view text, const TraceFn& trace, bool synthesize);
  RefineResult RefineDirect(const BaseOutput& base, const TraceFn& trace, double* load_s);
  RefineResult RefineRemote(const BaseOutput& base, const TraceFn& trace);

  GtpConfig config_;
  Mode mode_;
  CoreArtifacts core_;
  std::optional<RefineModels> warm_;
  std::shared_ptr<ServiceHandle> service_;
  bool owns_service_ = false;
};

// Entry point of the `serve` subcommand: opens the configured transport,
// loads the models, sleeps load_delay_s, then runs Serve. Returns when the
// loop ends.
void RunServiceHost(const GtpConfig& config);

}  // namespace gtp

#endif  // GTP_MESH_PIPELINE_HPP_
