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

#ifndef GTP_MESH_METRICS_HPP_
#define GTP_MESH_METRICS_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtp_mesh/config.hpp"
#include "gtp_mesh/phoneme.hpp"
#include "gtp_mesh/pipeline.hpp"
#include "gtp_mesh/refine.hpp"

namespace gtp {

// Unit-cost Levenshtein distance between two label lists.
size_t EditDistance(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Phoneme labels of `seq` with boundary markers removed.
std::vector<std::string> PhonemesOnly(const PhonemeSequence& seq);

// Edit distance / reference phoneme count * 100, boundaries excluded.
// Throws Error(kEmptyReference).
double Per(const PhonemeSequence& ref, const PhonemeSequence& hyp);

// (gold, predicted) variant pairs. Throws Error(kEmptyCases).
double HomographAccuracy(const std::vector<std::pair<int, int>>& cases);

// (ezafe_f1 + homograph_acc) / per. Throws Error(kZeroPer) when per <= 0.
double G2pQuality(double ezafe_f1, double homograph_acc, double per);

struct EvalCase {
  std::string text;
  PhonemeSequence reference;
  std::vector<HomographChoice> gold_choices;
  std::vector<bool> gold_tags;  // one per token
};

// TSV: text<TAB>ref<TAB>idx:variant,...<TAB>0/1,... ; '#' comments. The
// choices column may be empty.
std::vector<EvalCase> ParseEvalCases(std::string_view content, const PhonemeInventory& inv);
std::vector<EvalCase> LoadEvalCases(const std::string& path, const PhonemeInventory& inv);

// Per-word ezafe presence read off each output's spans, against gold tags,
// as a percentage. Throws Error(kEmptyCases) or Error(kTagLengthMismatch).
double PipelineEzafeF1(const std::vector<EvalCase>& cases,
                       const std::vector<PhonemeSequence>& outputs,
                       const std::string& ezafe_symbol);

// Gold choices scored against the refined choices; a gold index the
// pipeline made no choice for counts as variant 0.
double PipelineHomographAccuracy(const std::vector<EvalCase>& cases,
                                 const std::vector<RefineResult>& outputs);

struct QualityMetrics {
  double per = 0.0;
  double ezafe_f1 = 0.0;
  double homograph_acc = 0.0;
  double g2p_quality = 0.0;  // +inf when per is 0
};

// Corpus PER pools edits and reference lengths over all cases.
QualityMetrics ScoreOutputs(const std::vector<EvalCase>& cases,
                            const std::vector<RefineResult>& outputs,
                            const std::string& ezafe_symbol);

struct BenchReport {
  std::string model;
  std::string mode;
  double per = 0.0;
  double ezafe_f1 = 0.0;
  double homograph_acc = 0.0;
  double rtf_mean = 0.0;
  double rtf_std = 0.0;
  bool std_defined = false;  // false when n_runs < 2
  int n_runs = 0;
  double g2p_quality = 0.0;
  std::vector<double> run_rtfs;
};

// Runs the pipeline over the corpus n_runs times. Each run's RTF is the
// summed processing time over the summed audio duration. Quality comes from
// the first run; later runs must reproduce it.
BenchReport Bench(const std::vector<EvalCase>& cases, const GtpConfig& config, Mode mode,
                  int n_runs);

// Same, on a pipeline the caller owns.
BenchReport BenchWith(Pipeline& pipeline, const std::vector<EvalCase>& cases, int n_runs);

inline constexpr std::string_view kCsvHeader =
    "model,mode,per,ezafe_f1,homograph_acc,rtf_mean,rtf_std,g2p_quality";
inline constexpr std::string_view kPointsHeader = "model,log10_rtf,g2p_quality";

std::string ReportsToCsv(const std::vector<BenchReport>& reports);
// Fills the CSV columns only.
std::vector<BenchReport> ParseCsv(std::string_view content);
void EmitCsv(const std::vector<BenchReport>& reports, const std::string& path);
std::string ReportsToPoints(const std::vector<BenchReport>& reports);
void EmitPoints(const std::vector<BenchReport>& reports, const std::string& path);

}  // namespace gtp

#endif  // GTP_MESH_METRICS_HPP_
