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

#include <cstdio>
#include <iostream>
#include <iterator>
#include <string>

#include "CLI11.hpp"
#include "gtp_mesh/gtp_mesh.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int Fail(gtp_status st, const std::string& message) {
  std::cerr << "error: " << gtp_status_name(st) << ": " << message << "\n";
  return kExitRuntime;
}

int Fail(gtp_status st) { return Fail(st, gtp_last_error()); }

// Prints and frees a string from the library.
void Emit(char* s, std::ostream& os) {
  if (s == nullptr) return;
  os << s;
  gtp_string_free(s);
}

int RunPhonemize(const std::string& config, const std::string& mode, const std::string& text,
                 bool from_stdin, bool trace) {
  gtp_pipeline* p = nullptr;
  gtp_status st = gtp_pipeline_open(OrNull(config), OrNull(mode), &p);
  if (st != GTP_OK) return Fail(st);
  auto one = [&](const std::string& line) {
    char* phonemes = nullptr;
    char* trace_text = nullptr;
    st = gtp_pipeline_phonemize(p, line.c_str(), &phonemes, trace ? &trace_text : nullptr);
    if (st != GTP_OK) return false;
    Emit(phonemes, std::cout);
    std::cout << "\n";
    Emit(trace_text, std::cerr);
    return true;
  };
  bool ok = true;
  if (from_stdin) {
    std::string line;
    while (ok && std::getline(std::cin, line)) ok = one(line);
  } else {
    ok = one(text);
  }
  const gtp_status failed = st;
  const std::string message = ok ? "" : gtp_last_error();
  gtp_pipeline_close(p);
  return ok ? 0 : Fail(failed, message);
}

int RunSynth(const std::string& config, const std::string& mode, const std::string& text,
             const std::string& wav, bool trace) {
  gtp_pipeline* p = nullptr;
  gtp_status st = gtp_pipeline_open(OrNull(config), OrNull(mode), &p);
  if (st != GTP_OK) return Fail(st);
  double duration = 0.0;
  char* trace_text = nullptr;
  st = gtp_pipeline_synth(p, text.c_str(), wav.c_str(), &duration, trace ? &trace_text : nullptr);
  const std::string message = st == GTP_OK ? "" : gtp_last_error();
  gtp_pipeline_close(p);
  if (st != GTP_OK) return Fail(st, message);
  std::cout << "audio_duration_s=" << duration << "\n";
  Emit(trace_text, std::cerr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gtp-mesh: context-aware phonemization with a decoupled refinement service"};
  app.require_subcommand(1, 1);

  std::string config, mode, text, wav, corpus, lexicon, inventory, out, cases, modes, csv,
      points;
  bool from_stdin = false, trace = false;
  int window = 5, epochs = 10, runs = 5;
  double alpha = 1.0;

  auto* phonemize = app.add_subcommand("phonemize", "print the refined phoneme sequence");
  phonemize->add_option("--config", config, "config file (default $GTP_MESH_CONFIG)");
  phonemize->add_option("--mode", mode, "direct_cold | direct_warm | service");
  auto* text_opt = phonemize->add_option("--text", text, "input text");
  auto* stdin_opt = phonemize->add_flag("--stdin", from_stdin, "read one utterance per line");
  text_opt->excludes(stdin_opt);
  phonemize->add_flag("--trace", trace, "stage timings on stderr");

  auto* serve = app.add_subcommand("serve", "run the refinement service loop");
  serve->add_option("--config", config, "config file (default $GTP_MESH_CONFIG)");

  auto* build_db = app.add_subcommand("build-db", "count a homograph-annotated corpus");
  build_db->add_option("--corpus", corpus, "annotated corpus")->required();
  build_db->add_option("--lexicon", lexicon, "lexicon TSV")->required();
  build_db->add_option("--inventory", inventory, "phoneme inventory for lexicon checks");
  build_db->add_option("--out", out, "output db")->required();
  build_db->add_option("--window", window, "context window")->check(CLI::NonNegativeNumber);
  build_db->add_option("--alpha", alpha, "smoothing")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train-ezafe", "train the Ezafe tagger");
  train->add_option("--corpus", corpus, "tagged corpus")->required();
  train->add_option("--out", out, "output model")->required();
  train->add_option("--epochs", epochs, "training epochs")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "score the pipeline on evaluation cases");
  eval->add_option("--cases", cases, "evaluation TSV")->required();
  eval->add_option("--config", config, "config file (default $GTP_MESH_CONFIG)");
  eval->add_option("--mode", mode, "direct_cold | direct_warm | service");

  auto* bench = app.add_subcommand("bench", "benchmark modes and write a CSV report");
  bench->add_option("--cases", cases, "evaluation TSV")->required();
  bench->add_option("--config", config, "config file (default $GTP_MESH_CONFIG)");
  bench->add_option("--modes", modes, "comma-separated modes")->required();
  bench->add_option("--runs", runs, "runs per mode")->check(CLI::PositiveNumber);
  bench->add_option("--csv", csv, "report CSV")->required();
  bench->add_option("--points", points, "log10(rtf),quality points file");

  auto* synth = app.add_subcommand("synth", "run the full pipeline and write a WAV");
  synth->add_option("--config", config, "config file (default $GTP_MESH_CONFIG)");
  synth->add_option("--mode", mode, "direct_cold | direct_warm | service");
  synth->add_option("--text", text, "input text")->required();
  synth->add_option("--wav", wav, "output WAV")->required();
  synth->add_flag("--trace", trace, "stage timings on stderr");

  try {
    app.parse(argc, argv);
    if (phonemize->parsed() && text_opt->count() == 0 && !from_stdin) {
      throw CLI::RequiredError("--text or --stdin");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    const CLI::App* failed = &app;
    for (CLI::App* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return kExitUsage;
  }

  char* summary = nullptr;
  gtp_status st = GTP_OK;
  if (phonemize->parsed()) return RunPhonemize(config, mode, text, from_stdin, trace);
  if (synth->parsed()) return RunSynth(config, mode, text, wav, trace);
  if (serve->parsed()) {
    st = gtp_serve(OrNull(config));
  } else if (build_db->parsed()) {
    st = gtp_build_db(corpus.c_str(), lexicon.c_str(), OrNull(inventory), out.c_str(), window,
                      alpha, &summary);
  } else if (train->parsed()) {
    st = gtp_train_ezafe(corpus.c_str(), out.c_str(), epochs, &summary);
  } else if (eval->parsed()) {
    st = gtp_eval(OrNull(config), cases.c_str(), OrNull(mode), &summary);
  } else if (bench->parsed()) {
    st = gtp_bench(OrNull(config), cases.c_str(), modes.c_str(), runs, csv.c_str(),
                   OrNull(points), &summary);
  }
  if (st != GTP_OK) return Fail(st);
  Emit(summary, std::cout);
  return 0;
}
