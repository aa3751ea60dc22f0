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

#include "gtp_mesh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/ezafe.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

size_t EditDistance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  // Single-row DP.
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t up = row[j];
      const size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

std::vector<std::string> PhonemesOnly(const PhonemeSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.items.size());
  for (const std::string& item : seq.items) {
    if (item != kBoundary) out.push_back(item);
  }
  return out;
}

double Per(const PhonemeSequence& ref, const PhonemeSequence& hyp) {
  const std::vector<std::string> r = PhonemesOnly(ref);
  if (r.empty()) throw Error(ErrorCode::kEmptyReference, "reference has no phonemes");
  return 100.0 * static_cast<double>(EditDistance(r, PhonemesOnly(hyp))) /
         static_cast<double>(r.size());
}

double HomographAccuracy(const std::vector<std::pair<int, int>>& cases) {
  if (cases.empty()) throw Error(ErrorCode::kEmptyCases, "no homograph cases");
  size_t hits = 0;
  for (const auto& [gold, predicted] : cases) hits += gold == predicted ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(cases.size());
}

double G2pQuality(double ezafe_f1, double homograph_acc, double per) {
  if (!(per > 0.0)) throw Error(ErrorCode::kZeroPer, "quality undefined for PER 0");
  return (ezafe_f1 + homograph_acc) / per;
}

namespace {

std::string CaseError(size_t line_no, const std::string& why) {
  return "line " + std::to_string(line_no) + ": " + why;
}

std::vector<HomographChoice> ParseChoices(std::string_view field, size_t line_no) {
  std::vector<HomographChoice> out;
  if (TrimAscii(field).empty()) return out;
  for (const std::string& item : SplitChar(TrimAscii(field), ',')) {
    const auto colon = item.find(':');
    uint64_t idx = 0, variant = 0;
    if (colon == std::string::npos ||
        !ParseUint64(TrimAscii(std::string_view(item).substr(0, colon)), &idx) ||
        !ParseUint64(TrimAscii(std::string_view(item).substr(colon + 1)), &variant)) {
      throw ParseError(line_no, "bad choice '" + item + "', want idx:variant");
    }
    out.push_back(HomographChoice{static_cast<size_t>(idx), static_cast<int>(variant)});
  }
  return out;
}

std::vector<bool> ParseTags(std::string_view field, size_t line_no) {
  std::vector<bool> out;
  if (TrimAscii(field).empty()) return out;
  for (const std::string& item : SplitChar(TrimAscii(field), ',')) {
    const std::string_view t = TrimAscii(item);
    if (t == "1") out.push_back(true);
    else if (t == "0") out.push_back(false);
    else throw ParseError(line_no, "bad tag '" + item + "', want 0 or 1");
  }
  return out;
}

}  // namespace

std::vector<EvalCase> ParseEvalCases(std::string_view content, const PhonemeInventory& inv) {
  std::vector<EvalCase> cases;
  size_t line_no = 0;
  for (const std::string& raw : SplitChar(content, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (TrimAscii(line).empty() || TrimAscii(line).front() == '#') continue;
    const std::vector<std::string> fields = SplitChar(line, '\t');
    if (fields.size() != 4) throw ParseError(line_no, "want 4 tab-separated fields");
    EvalCase c;
    c.text = fields[0];
    try {
      c.reference = ParseSeq(fields[1], inv);
    } catch (const Error& e) {
      throw Error(e.code(), CaseError(line_no, e.what()));
    }
    c.gold_choices = ParseChoices(fields[2], line_no);
    c.gold_tags = ParseTags(fields[3], line_no);
    const size_t n_tokens = Tokenize(c.text).size();
    if (c.gold_tags.size() != n_tokens) {
      throw Error(ErrorCode::kTagLengthMismatch,
                  CaseError(line_no, std::to_string(c.gold_tags.size()) + " tags for " +
                                         std::to_string(n_tokens) + " tokens"));
    }
    for (const HomographChoice& ch : c.gold_choices) {
      if (ch.token_index >= n_tokens) {
        throw ParseError(line_no, "choice index " + std::to_string(ch.token_index) +
                                      " out of range");
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<EvalCase> LoadEvalCases(const std::string& path, const PhonemeInventory& inv) {
  return ParseEvalCases(ReadFile(path), inv);
}

namespace {

struct Counts {
  size_t tp = 0, fp = 0, fn = 0;
};

Counts EzafeCounts(const std::vector<EvalCase>& cases,
                   const std::vector<PhonemeSequence>& outputs,
                   const std::string& ezafe_symbol) {
  if (cases.empty()) throw Error(ErrorCode::kEmptyCases, "no evaluation cases");
  if (cases.size() != outputs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one output per case required");
  }
  Counts n;
  for (size_t i = 0; i < cases.size(); ++i) {
    const PhonemeSequence& out = outputs[i];
    CheckAlignment(out);
    const std::vector<bool>& gold = cases[i].gold_tags;
    if (out.alignment->size() != gold.size()) {
      throw Error(ErrorCode::kTagLengthMismatch,
                  "case " + std::to_string(i) + ": " + std::to_string(gold.size()) +
                      " gold tags for " + std::to_string(out.alignment->size()) + " words");
    }
    for (size_t w = 0; w < gold.size(); ++w) {
      const Span& s = (*out.alignment)[w];
      const bool has = s.end > s.begin && out.items[s.end - 1] == ezafe_symbol;
      if (has && gold[w]) ++n.tp;
      else if (has) ++n.fp;
      else if (gold[w]) ++n.fn;
    }
  }
  return n;
}

}  // namespace

double PipelineEzafeF1(const std::vector<EvalCase>& cases,
                       const std::vector<PhonemeSequence>& outputs,
                       const std::string& ezafe_symbol) {
  const Counts n = EzafeCounts(cases, outputs, ezafe_symbol);
  return 100.0 * PrfFromCounts(n.tp, n.fp, n.fn).f1;
}

double PipelineHomographAccuracy(const std::vector<EvalCase>& cases,
                                 const std::vector<RefineResult>& outputs) {
  if (cases.size() != outputs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one output per case required");
  }
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < cases.size(); ++i) {
    for (const HomographChoice& gold : cases[i].gold_choices) {
      int predicted = 0;
      for (const HomographChoice& c : outputs[i].choices) {
        if (c.token_index == gold.token_index) predicted = c.variant;
      }
      pairs.emplace_back(gold.variant, predicted);
    }
  }
  return HomographAccuracy(pairs);
}

QualityMetrics ScoreOutputs(const std::vector<EvalCase>& cases,
                            const std::vector<RefineResult>& outputs,
                            const std::string& ezafe_symbol) {
  if (cases.empty()) throw Error(ErrorCode::kEmptyCases, "no evaluation cases");
  if (cases.size() != outputs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one output per case required");
  }
  QualityMetrics q;
  size_t edits = 0, ref_len = 0;
  std::vector<PhonemeSequence> seqs;
  for (size_t i = 0; i < cases.size(); ++i) {
    const std::vector<std::string> ref = PhonemesOnly(cases[i].reference);
    edits += EditDistance(ref, PhonemesOnly(outputs[i].seq));
    ref_len += ref.size();
    seqs.push_back(outputs[i].seq);
  }
  if (ref_len == 0) throw Error(ErrorCode::kEmptyReference, "references have no phonemes");
  q.per = 100.0 * static_cast<double>(edits) / static_cast<double>(ref_len);
  q.ezafe_f1 = PipelineEzafeF1(cases, seqs, ezafe_symbol);
  bool any_gold = false;
  for (const EvalCase& c : cases) any_gold = any_gold || !c.gold_choices.empty();
  // No homograph occurrences at all: nothing can be wrong.
  q.homograph_acc = any_gold ? PipelineHomographAccuracy(cases, outputs) : 100.0;
  try {
    q.g2p_quality = G2pQuality(q.ezafe_f1, q.homograph_acc, q.per);
  } catch (const Error&) {
    q.g2p_quality = std::numeric_limits<double>::infinity();
  }
  return q;
}

BenchReport BenchWith(Pipeline& pipeline, const std::vector<EvalCase>& cases, int n_runs) {
  if (n_runs < 1) throw Error(ErrorCode::kInvalidArgument, "n_runs must be >= 1");
  if (cases.empty()) throw Error(ErrorCode::kEmptyCases, "no evaluation cases");
  BenchReport report;
  report.model = pipeline.config().model_name;
  report.mode = ModeName(pipeline.mode());
  report.n_runs = n_runs;
  const std::string& ezafe = pipeline.core().inventory.ezafe_symbol();

  std::vector<std::string> first_texts;
  for (int run = 0; run < n_runs; ++run) {
    double processing = 0.0, audio = 0.0;
    std::vector<RefineResult> outputs;
    outputs.reserve(cases.size());
    for (const EvalCase& c : cases) {
      PipelineOutput out = pipeline.Run(c.text);
      processing += out.synth.timings.total;
      audio += out.synth.audio_duration_s;
      outputs.push_back(std::move(out.refined));
    }
    if (!(audio > 0.0)) throw Error(ErrorCode::kZeroDuration, "corpus produced no audio");
    report.run_rtfs.push_back(processing / audio);

    std::vector<std::string> texts;
    for (const RefineResult& r : outputs) texts.push_back(SeqToText(r.seq));
    if (run == 0) {
      const QualityMetrics q = ScoreOutputs(cases, outputs, ezafe);
      report.per = q.per;
      report.ezafe_f1 = q.ezafe_f1;
      report.homograph_acc = q.homograph_acc;
      report.g2p_quality = q.g2p_quality;
      first_texts = std::move(texts);
    } else if (texts != first_texts) {
      throw Error(ErrorCode::kInvalidArgument,
                  "refined output changed between runs " + std::to_string(run));
    }
  }

  const double n = static_cast<double>(n_runs);
  report.rtf_mean = std::accumulate(report.run_rtfs.begin(), report.run_rtfs.end(), 0.0) / n;
  if (n_runs >= 2) {
    double ss = 0.0;
    for (double r : report.run_rtfs) ss += (r - report.rtf_mean) * (r - report.rtf_mean);
    report.rtf_std = std::sqrt(ss / (n - 1.0));
    report.std_defined = true;
  }
  return report;
}

BenchReport Bench(const std::vector<EvalCase>& cases, const GtpConfig& config, Mode mode,
                  int n_runs) {
  Pipeline pipeline(config, mode);
  BenchReport report = BenchWith(pipeline, cases, n_runs);
  pipeline.Close();
  return report;
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180 records.
std::vector<std::vector<std::string>> CsvRecords(std::string_view content) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"' && i + 1 < content.size() && content[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(records.size() + 1, "unterminated quote");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

double CsvNumber(const std::string& s, size_t line_no) {
  double v = 0.0;
  if (!ParseDouble(s, &v)) throw ParseError(line_no, "bad number '" + s + "'");
  return v;
}

}  // namespace

std::string ReportsToCsv(const std::vector<BenchReport>& reports) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const BenchReport& r : reports) {
    out += CsvField(r.model) + ',' + CsvField(r.mode) + ',' + FormatDouble(r.per) + ',' +
           FormatDouble(r.ezafe_f1) + ',' + FormatDouble(r.homograph_acc) + ',' +
           FormatDouble(r.rtf_mean) + ',' + FormatDouble(r.rtf_std) + ',' +
           FormatDouble(r.g2p_quality) + '\n';
  }
  return out;
}

std::vector<BenchReport> ParseCsv(std::string_view content) {
  const auto records = CsvRecords(content);
  if (records.empty() || JoinStrings(records[0], ",") != kCsvHeader) {
    throw ParseError(1, "missing CSV header");
  }
  std::vector<BenchReport> reports;
  for (size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 8) throw ParseError(i + 1, "want 8 columns");
    BenchReport r;
    r.model = f[0];
    r.mode = f[1];
    r.per = CsvNumber(f[2], i + 1);
    r.ezafe_f1 = CsvNumber(f[3], i + 1);
    r.homograph_acc = CsvNumber(f[4], i + 1);
    r.rtf_mean = CsvNumber(f[5], i + 1);
    r.rtf_std = CsvNumber(f[6], i + 1);
    r.g2p_quality = CsvNumber(f[7], i + 1);
    reports.push_back(std::move(r));
  }
  return reports;
}

void EmitCsv(const std::vector<BenchReport>& reports, const std::string& path) {
  WriteFile(path, ReportsToCsv(reports));
}

std::string ReportsToPoints(const std::vector<BenchReport>& reports) {
  std::string out(kPointsHeader);
  out += '\n';
  for (const BenchReport& r : reports) {
    out += CsvField(r.model + "/" + r.mode) + ',' + FormatDouble(std::log10(r.rtf_mean)) +
           ',' + FormatDouble(r.g2p_quality) + '\n';
  }
  return out;
}

void EmitPoints(const std::vector<BenchReport>& reports, const std::string& path) {
  WriteFile(path, ReportsToPoints(reports));
}

}  // namespace gtp
