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

#include "gtp_mesh/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void SleepSeconds(double s) {
  if (s > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(s));
}

void PutLe16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutLe32(std::string& out, uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xFF));
}

}  // namespace

Mode ParseMode(std::string_view name) {
  if (name == "direct_cold") return Mode::kDirectCold;
  if (name == "direct_warm") return Mode::kDirectWarm;
  if (name == "service") return Mode::kService;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "' (direct_cold|direct_warm|service)");
}

const char* ModeName(Mode mode) {
  switch (mode) {
    case Mode::kDirectCold: return "direct_cold";
    case Mode::kDirectWarm: return "direct_warm";
    case Mode::kService: return "service";
  }
  return "unknown";
}

std::string FormatTimingTrace(const StageTimings& t) {
  std::string out;
  const std::pair<const char*, double> stages[] = {
      {"load", t.load}, {"base_g2p", t.base_g2p}, {"refine", t.refine},
      {"synth", t.synth}, {"total", t.total}};
  for (const auto& [name, seconds] : stages) {
    out += "stage=";
    out += name;
    out += " seconds=";
    out += FormatDouble(seconds);
    out += '\n';
  }
  return out;
}

SynthResult SynthesizeStub(size_t phoneme_count, double sec_per_phoneme, double synth_rtf) {
  SynthResult result;
  const auto start = Clock::now();
  result.audio_duration_s = static_cast<double>(phoneme_count) * sec_per_phoneme;
  SleepSeconds(result.audio_duration_s * synth_rtf);
  const auto n = static_cast<size_t>(std::llround(result.audio_duration_s * kSampleRate));
  result.samples.assign(n, 0);
  result.timings.synth = SecondsSince(start);
  return result;
}

std::string EncodeWav(const std::vector<int16_t>& samples, int sample_rate) {
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * sizeof(int16_t));
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutLe32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  PutLe32(out, 16);
  PutLe16(out, 1);  // PCM
  PutLe16(out, 1);  // mono
  PutLe32(out, static_cast<uint32_t>(sample_rate));
  PutLe32(out, static_cast<uint32_t>(sample_rate) * 2);
  PutLe16(out, 2);
  PutLe16(out, 16);
  out += "data";
  PutLe32(out, data_bytes);
  for (int16_t s : samples) PutLe16(out, static_cast<uint16_t>(s));
  return out;
}

double RtfOf(const SynthResult& result) {
  if (!(result.audio_duration_s > 0.0)) {
    throw Error(ErrorCode::kZeroDuration, "RTF undefined for zero-length audio");
  }
  return result.timings.total / result.audio_duration_s;
}

Pipeline::Pipeline(GtpConfig config, Mode mode, std::shared_ptr<ServiceHandle> service)
    : config_(std::move(config)), mode_(mode), service_(std::move(service)) {
  config_.Validate();
  core_ = LoadCore(config_);
  if (mode_ == Mode::kService && !service_) {
    service_ = ServiceHandle::Spawn(config_);
    owns_service_ = true;
  }
}

Pipeline::~Pipeline() {
  try {
    Close();
  } catch (...) {
  }
}

void Pipeline::Close() {
  if (owns_service_ && service_) {
    service_->Shutdown(std::chrono::duration<double>(config_.shutdown_timeout_s));
  }
  owns_service_ = false;
}

PipelineOutput Pipeline::Run(std::string_view text, const TraceFn& trace) {
  return Process(text, trace, true);
}

PipelineOutput Pipeline::Phonemize(std::string_view text, const TraceFn& trace) {
  return Process(text, trace, false);
}

PipelineOutput Pipeline::Process(std::string_view text, const TraceFn& trace, bool synthesize) {
  const auto start = Clock::now();
  PipelineOutput out;
  StageTimings timings;

  auto t0 = Clock::now();
  out.base = PhonemizeUtterance(text, core_.lexicon, core_.lts);
  timings.base_g2p = SecondsSince(t0);

  double load_s = 0.0;
  t0 = Clock::now();
  if (mode_ == Mode::kService) {
    out.refined = RefineRemote(out.base, trace);
  } else {
    out.refined = RefineDirect(out.base, trace, &load_s);
  }
  timings.load = load_s;
  timings.refine = SecondsSince(t0) - load_s;

  if (synthesize) {
    out.synth = SynthesizeStub(out.refined.seq.PhonemeCount(), config_.sec_per_phoneme,
                               config_.synth_rtf);
    timings.synth = out.synth.timings.synth;
  }
  timings.total = SecondsSince(start);
  out.synth.timings = timings;
  return out;
}

RefineResult Pipeline::RefineDirect(const BaseOutput& base, const TraceFn& trace,
                                    double* load_s) {
  const std::vector<std::string> tokens = Surfaces(base.tokens);
  auto load = [&]() {
    const auto t0 = Clock::now();
    RefineModels models = LoadRefineModels(config_);
    SleepSeconds(config_.load_delay_s);
    *load_s = SecondsSince(t0);
    return models;
  };
  if (mode_ == Mode::kDirectCold) {
    // Loaded for this call only and released on return.
    const RefineModels models = load();
    return Refine(tokens, base.seq, base.sites, core_, models, trace);
  }
  if (!warm_) warm_ = load();
  return Refine(tokens, base.seq, base.sites, core_, *warm_, trace);
}

RefineResult Pipeline::RefineRemote(const BaseOutput& base, const TraceFn& trace) {
  if (!service_ || service_->state() != ServiceState::kReady) {
    throw Error(ErrorCode::kServiceUnavailable, "refinement service is not running");
  }
  const Json body = RefineRequestToJson(Surfaces(base.tokens), base.seq, base.sites,
                                        static_cast<bool>(trace));
  Json response;
  try {
    response = service_->Request("refine", body,
                                 std::chrono::duration<double>(config_.request_timeout_s));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBrokenPipe) {
      throw Error(ErrorCode::kServiceUnavailable, e.what());
    }
    throw;
  }
  RefineResult result = ParseRefineResponse(response, core_.inventory);
  if (trace) {
    for (const std::string& event : result.trace) trace(event);
  }
  return result;
}

void RunServiceHost(const GtpConfig& config) {
  ::signal(SIGPIPE, SIG_IGN);
  int in_fd = STDIN_FILENO;
  int out_fd = STDOUT_FILENO;
  if (config.transport == Transport::kFifo) {
    EnsureFifo(config.fifo_in);
    EnsureFifo(config.fifo_out);
    in_fd = ::open(config.fifo_in.c_str(), O_RDONLY | O_CLOEXEC);
    if (in_fd < 0) throw Error(ErrorCode::kIo, "open " + config.fifo_in + ": " + std::strerror(errno));
    out_fd = ::open(config.fifo_out.c_str(), O_WRONLY | O_CLOEXEC);
    if (out_fd < 0) throw Error(ErrorCode::kIo, "open " + config.fifo_out + ": " + std::strerror(errno));
  }

  const CoreArtifacts core = LoadCore(config);
  const RefineModels models = LoadRefineModels(config);
  SleepSeconds(config.load_delay_s);

  if (config.hang_after_ready) {
    WriteAll(out_fd, EncodeFrame(Frame{0, "ready", Json::object()}));
    while (true) ::pause();
  }

  Serve(
      [&](const std::string& op, const Json& body) -> Json {
        if (op != "refine") throw Error(ErrorCode::kInvalidArgument, "unknown op '" + op + "'");
        RefineRequest req = ParseRefineRequest(body, core.inventory);
        RefineResult result = Refine(req.tokens, req.seq, req.sites, core, models);
        if (!req.trace) result.trace.clear();
        return RefineResultToJson(result);
      },
      in_fd, out_fd);

  if (config.transport == Transport::kFifo) {
    ::close(in_fd);
    ::close(out_fd);
  }
}

}  // namespace gtp
