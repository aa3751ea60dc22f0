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

#include "gtp_mesh/gtp_mesh.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/ezafe.hpp"
#include "gtp_mesh/homograph.hpp"
#include "gtp_mesh/metrics.hpp"
#include "gtp_mesh/pipeline.hpp"
#include "gtp_mesh/text.hpp"

struct gtp_pipeline {
  std::unique_ptr<gtp::Pipeline> impl;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
gtp_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return GTP_OK;
  } catch (const gtp::Error& e) {
    g_last_error = e.what();
    return static_cast<gtp_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GTP_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return GTP_E_INTERNAL;
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(const void* p, const char* what) {
  if (p == nullptr) {
    throw gtp::Error(gtp::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
  }
}

gtp::GtpConfig ResolveConfig(const char* path) {
  std::string p = path != nullptr ? path : "";
  if (p.empty()) {
    const char* env = std::getenv("GTP_MESH_CONFIG");
    if (env != nullptr) p = env;
  }
  if (p.empty()) {
    throw gtp::Error(gtp::ErrorCode::kInvalidArgument,
                     "no config given and GTP_MESH_CONFIG is unset");
  }
  return gtp::GtpConfig::Load(p);
}

gtp::Mode ResolveMode(const gtp::GtpConfig& cfg, const char* mode) {
  return gtp::ParseMode(mode != nullptr && *mode != '\0' ? mode : cfg.mode);
}

std::string TraceText(const std::vector<std::string>& events, const gtp::StageTimings& t) {
  std::string out;
  for (const std::string& e : events) out += "event=" + e + "\n";
  return out + gtp::FormatTimingTrace(t);
}

}  // namespace

extern "C" {

const char* gtp_last_error(void) { return g_last_error.c_str(); }

const char* gtp_status_name(gtp_status status) {
  if (status == GTP_OK) return "Ok";
  if (status == GTP_E_INTERNAL) return "Internal";
  return gtp::ErrorCodeName(static_cast<gtp::ErrorCode>(status));
}

void gtp_string_free(char* s) { std::free(s); }

gtp_status gtp_pipeline_open(const char* config_path, const char* mode, gtp_pipeline** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    gtp::GtpConfig cfg = ResolveConfig(config_path);
    const gtp::Mode m = ResolveMode(cfg, mode);
    auto handle = std::make_unique<gtp_pipeline>();
    handle->impl = std::make_unique<gtp::Pipeline>(std::move(cfg), m);
    *out = handle.release();
  });
}

void gtp_pipeline_close(gtp_pipeline* p) {
  if (p == nullptr) return;
  Guard([&] { p->impl->Close(); });
  delete p;
}

gtp_status gtp_pipeline_phonemize(gtp_pipeline* p, const char* text, char** out_phonemes,
                                  char** out_trace) {
  return Guard([&] {
    Require(p, "pipeline");
    Require(text, "text");
    Require(out_phonemes, "out_phonemes");
    std::vector<std::string> events;
    gtp::TraceFn trace;
    if (out_trace != nullptr) trace = [&](std::string_view e) { events.emplace_back(e); };
    const gtp::PipelineOutput out = p->impl->Phonemize(text, trace);
    *out_phonemes = Dup(gtp::SeqToText(out.refined.seq));
    if (out_trace != nullptr) *out_trace = Dup(TraceText(events, out.synth.timings));
  });
}

gtp_status gtp_pipeline_synth(gtp_pipeline* p, const char* text, const char* wav_path,
                              double* out_duration_s, char** out_trace) {
  return Guard([&] {
    Require(p, "pipeline");
    Require(text, "text");
    Require(wav_path, "wav_path");
    std::vector<std::string> events;
    gtp::TraceFn trace;
    if (out_trace != nullptr) trace = [&](std::string_view e) { events.emplace_back(e); };
    const gtp::PipelineOutput out = p->impl->Run(text, trace);
    gtp::WriteFile(wav_path, gtp::EncodeWav(out.synth.samples));
    if (out_duration_s != nullptr) *out_duration_s = out.synth.audio_duration_s;
    if (out_trace != nullptr) *out_trace = Dup(TraceText(events, out.synth.timings));
  });
}

gtp_status gtp_serve(const char* config_path) {
  return Guard([&] { gtp::RunServiceHost(ResolveConfig(config_path)); });
}

gtp_status gtp_build_db(const char* corpus_path, const char* lexicon_path,
                        const char* inventory_path, const char* out_path, int window,
                        double alpha, char** out_summary) {
  return Guard([&] {
    Require(corpus_path, "corpus_path");
    Require(lexicon_path, "lexicon_path");
    Require(out_path, "out_path");
    std::optional<gtp::PhonemeInventory> inv;
    if (inventory_path != nullptr && *inventory_path != '\0') {
      inv = gtp::PhonemeInventory::Load(inventory_path);
    }
    const gtp::Lexicon lex = gtp::Lexicon::Load(lexicon_path, inv ? &*inv : nullptr);
    const gtp::AnnotatedCorpus corpus = gtp::AnnotatedCorpus::Load(corpus_path);
    const gtp::HomographDb db = gtp::BuildDb(corpus, lex, window, alpha);
    gtp::SaveDb(db, out_path);
    if (out_summary != nullptr) {
      *out_summary = Dup("homographs=" + std::to_string(db.words.size()) +
                         " vocab=" + std::to_string(db.vocab_size) + "\n");
    }
  });
}

gtp_status gtp_train_ezafe(const char* corpus_path, const char* out_path, int epochs,
                           char** out_summary) {
  return Guard([&] {
    Require(corpus_path, "corpus_path");
    Require(out_path, "out_path");
    const gtp::EzafeCorpus corpus = gtp::EzafeCorpus::Load(corpus_path);
    const gtp::EzafeModel model = gtp::Train(corpus, epochs);
    gtp::SaveModel(model, out_path);
    if (out_summary != nullptr) {
      const gtp::Prf prf = gtp::Evaluate(model, corpus);
      *out_summary = Dup("epochs=" + std::to_string(model.epochs_trained) +
                         " features=" + std::to_string(model.weights.size()) +
                         " train_f1=" + gtp::FormatDouble(prf.f1) + "\n");
    }
  });
}

gtp_status gtp_eval(const char* config_path, const char* cases_path, const char* mode,
                    char** out_report) {
  return Guard([&] {
    Require(cases_path, "cases_path");
    Require(out_report, "out_report");
    gtp::GtpConfig cfg = ResolveConfig(config_path);
    const gtp::Mode m = ResolveMode(cfg, mode);
    gtp::Pipeline pipeline(std::move(cfg), m);
    const auto cases = gtp::LoadEvalCases(cases_path, pipeline.core().inventory);
    std::vector<gtp::RefineResult> outputs;
    for (const gtp::EvalCase& c : cases) outputs.push_back(pipeline.Phonemize(c.text).refined);
    pipeline.Close();
    const gtp::QualityMetrics q =
        gtp::ScoreOutputs(cases, outputs, pipeline.core().inventory.ezafe_symbol());
    *out_report = Dup("cases=" + std::to_string(cases.size()) +
                      "\nper=" + gtp::FormatDouble(q.per) +
                      "\nezafe_f1=" + gtp::FormatDouble(q.ezafe_f1) +
                      "\nhomograph_acc=" + gtp::FormatDouble(q.homograph_acc) +
                      "\ng2p_quality=" + gtp::FormatDouble(q.g2p_quality) + "\n");
  });
}

gtp_status gtp_bench(const char* config_path, const char* cases_path, const char* modes,
                     int runs, const char* csv_path, const char* points_path,
                     char** out_summary) {
  return Guard([&] {
    Require(cases_path, "cases_path");
    Require(modes, "modes");
    Require(csv_path, "csv_path");
    const gtp::GtpConfig cfg = ResolveConfig(config_path);
    const gtp::CoreArtifacts core = gtp::LoadCore(cfg);
    const auto cases = gtp::LoadEvalCases(cases_path, core.inventory);
    std::vector<gtp::BenchReport> reports;
    for (const std::string& name : gtp::SplitChar(modes, ',')) {
      const std::string_view trimmed = gtp::TrimAscii(name);
      if (trimmed.empty()) continue;
      reports.push_back(gtp::Bench(cases, cfg, gtp::ParseMode(trimmed), runs));
    }
    if (reports.empty()) throw gtp::Error(gtp::ErrorCode::kInvalidArgument, "no modes given");
    gtp::EmitCsv(reports, csv_path);
    if (points_path != nullptr && *points_path != '\0') gtp::EmitPoints(reports, points_path);
    if (out_summary != nullptr) *out_summary = Dup(gtp::ReportsToCsv(reports));
  });
}

}  // extern "C"
