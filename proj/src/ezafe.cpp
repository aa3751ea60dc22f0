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

#include "gtp_mesh/ezafe.hpp"

#include <cmath>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

namespace {

constexpr std::string_view kMarker = "=e";

std::string LastScalars(const std::vector<std::string>& scalars, size_t n) {
  std::string out;
  for (size_t k = scalars.size() - n; k < scalars.size(); ++k) out += scalars[k];
  return out;
}

EzafeClass Predict(const EzafeModel& model, const std::vector<std::string>& features) {
  double none = 0.0;
  double ezafe = 0.0;
  for (const std::string& f : features) {
    auto it = model.weights.find(f);
    if (it == model.weights.end()) continue;
    none += it->second[0];
    ezafe += it->second[1];
  }
  return ezafe > none ? EzafeClass::kEzafe : EzafeClass::kNone;
}

}  // namespace

const char* EzafeClassName(EzafeClass c) {
  return c == EzafeClass::kEzafe ? "ezafe" : "none";
}

EzafeCorpus EzafeCorpus::Parse(std::string_view content) {
  EzafeCorpus corpus;
  size_t line_no = 0;
  for (const std::string& line : SplitChar(content, '\n')) {
    ++line_no;
    std::string_view trimmed = TrimAscii(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    EzafeUtterance utt;
    for (const std::string& piece : SplitWhitespace(trimmed)) {
      std::string_view surface = piece;
      bool ezafe = false;
      if (surface.size() > kMarker.size() &&
          surface.substr(surface.size() - kMarker.size()) == kMarker) {
        surface.remove_suffix(kMarker.size());
        ezafe = true;
      }
      if (surface.find(kMarker) != std::string_view::npos) {
        throw ParseError(line_no, "Ezafe marker not at token end in '" + piece + "'");
      }
      std::string stripped = StripPunctuation(surface);
      if (stripped.empty()) {
        if (ezafe) throw ParseError(line_no, "Ezafe marker on empty token");
        continue;
      }
      utt.tokens.push_back(std::move(stripped));
      utt.gold.push_back(ezafe);
    }
    if (!utt.tokens.empty()) corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

EzafeCorpus EzafeCorpus::Load(const std::string& path) { return Parse(ReadFile(path)); }

std::vector<std::string> ExtractFeatures(const std::vector<std::string>& tokens, size_t i) {
  if (i >= tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument, "feature index out of range");
  }
  const std::string& tok = tokens[i];
  const std::vector<std::string> scalars = Utf8Scalars(tok);
  std::vector<std::string> out;
  out.reserve(8);
  out.push_back("w=" + tok);
  out.push_back("prev=" + (i > 0 ? tokens[i - 1] : std::string("^")));
  out.push_back("next=" + (i + 1 < tokens.size() ? tokens[i + 1] : std::string("$")));
  for (size_t n = 1; n <= 3 && n <= scalars.size(); ++n) {
    out.push_back("suf" + std::to_string(n) + "=" + LastScalars(scalars, n));
  }
  if (i + 1 < tokens.size()) {
    const std::vector<std::string> next = Utf8Scalars(tokens[i + 1]);
    out.push_back("next_suf1=" + (next.empty() ? std::string("$") : next.back()));
  } else {
    out.push_back("next_suf1=$");
  }
  out.push_back("bias");
  return out;
}

EzafeModel Train(const EzafeCorpus& corpus, int epochs) {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (corpus.utterances.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty Ezafe corpus");

  struct Slot {
    std::array<double, 2> weight{0.0, 0.0};
    std::array<double, 2> total{0.0, 0.0};
    std::array<uint64_t, 2> stamp{0, 0};
  };
  // Current (non-averaged) weights live in `live` so prediction during
  // training reads them directly.
  EzafeModel live;
  std::map<std::string, Slot, std::less<>> slots;
  uint64_t step = 0;

  auto update = [&](const std::string& feature, int cls, double delta) {
    Slot& slot = slots[feature];
    slot.total[cls] += static_cast<double>(step - slot.stamp[cls]) * slot.weight[cls];
    slot.stamp[cls] = step;
    slot.weight[cls] += delta;
    live.weights[feature][cls] = slot.weight[cls];
  };

  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (const EzafeUtterance& utt : corpus.utterances) {
      for (size_t i = 0; i < utt.tokens.size(); ++i) {
        const std::vector<std::string> features = ExtractFeatures(utt.tokens, i);
        const int gold = utt.gold[i] ? 1 : 0;
        const int predicted = static_cast<int>(Predict(live, features));
        if (predicted != gold) {
          for (const std::string& f : features) {
            update(f, gold, 1.0);
            update(f, predicted, -1.0);
          }
        }
        ++step;
      }
    }
  }

  EzafeModel model;
  model.epochs_trained = epochs;
  model.feature_template_version = kFeatureTemplateVersion;
  for (auto& [feature, slot] : slots) {
    std::array<double, 2> avg{};
    for (int cls = 0; cls < 2; ++cls) {
      double total = slot.total[cls] +
                     static_cast<double>(step - slot.stamp[cls]) * slot.weight[cls];
      avg[cls] = total / static_cast<double>(step);
    }
    if (avg[0] != 0.0 || avg[1] != 0.0) model.weights[feature] = avg;
  }
  return model;
}

std::vector<bool> Tag(const EzafeModel& model, const std::vector<std::string>& tokens) {
  std::vector<bool> tags(tokens.size(), false);
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    tags[i] = Predict(model, ExtractFeatures(tokens, i)) == EzafeClass::kEzafe;
  }
  return tags;
}

PhonemeSequence InsertEzafe(const PhonemeSequence& seq, const std::vector<bool>& tags,
                            const PhonemeInventory& inv, const GlideRule& glide) {
  if (!seq.alignment) {
    throw Error(ErrorCode::kMissingAlignment, "Ezafe insertion needs alignment");
  }
  if (tags.size() != seq.alignment->size()) {
    throw Error(ErrorCode::kTagLengthMismatch,
                std::to_string(tags.size()) + " tags for " +
                    std::to_string(seq.alignment->size()) + " words");
  }
  const std::string& ezafe = inv.ezafe_symbol();
  return RewriteWords(seq, [&](size_t w, std::vector<std::string>& phonemes) {
    if (!tags[w]) return;
    if (!phonemes.empty() && phonemes.back() == ezafe) return;
    if (!glide.triggers.empty() && !phonemes.empty() &&
        glide.triggers.count(phonemes.back()) > 0) {
      phonemes.push_back(glide.label);
    }
    phonemes.push_back(ezafe);
  });
}

Prf PrfFromCounts(size_t tp, size_t fp, size_t fn) {
  Prf prf;
  if (tp + fp > 0) prf.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) prf.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (prf.precision + prf.recall > 0.0) {
    prf.f1 = 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall);
  }
  return prf;
}

Prf PrfFromTags(const std::vector<bool>& gold, const std::vector<bool>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kTagLengthMismatch, "gold and predicted tags differ in length");
  }
  size_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] && predicted[i]) ++tp;
    else if (!gold[i] && predicted[i]) ++fp;
    else if (gold[i] && !predicted[i]) ++fn;
  }
  return PrfFromCounts(tp, fp, fn);
}

Prf Evaluate(const EzafeModel& model, const EzafeCorpus& corpus) {
  if (corpus.utterances.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty Ezafe corpus");
  std::vector<bool> gold;
  std::vector<bool> predicted;
  for (const EzafeUtterance& utt : corpus.utterances) {
    std::vector<bool> tags = Tag(model, utt.tokens);
    gold.insert(gold.end(), utt.gold.begin(), utt.gold.end());
    predicted.insert(predicted.end(), tags.begin(), tags.end());
  }
  return PrfFromTags(gold, predicted);
}

std::string SerializeModel(const EzafeModel& model) {
  std::string out = "epochs=" + std::to_string(model.epochs_trained) +
                    "\ttemplate=" + std::to_string(model.feature_template_version) + "\n";
  // Class names sort as "ezafe" < "none".
  for (const auto& [feature, w] : model.weights) {
    for (int cls : {1, 0}) {
      if (w[cls] == 0.0) continue;
      out += feature;
      out += '\t';
      out += EzafeClassName(static_cast<EzafeClass>(cls));
      out += '\t';
      out += FormatDouble(w[cls]);
      out += '\n';
    }
  }
  return out;
}

EzafeModel ParseModel(std::string_view content) {
  std::vector<std::string> lines = SplitChar(content, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty Ezafe model");
  EzafeModel model;
  std::vector<std::string> header = SplitChar(lines[0], '\t');
  uint64_t epochs = 0;
  uint64_t version = 0;
  if (header.size() != 2 || header[0].rfind("epochs=", 0) != 0 ||
      header[1].rfind("template=", 0) != 0 ||
      !ParseUint64(std::string_view(header[0]).substr(7), &epochs) ||
      !ParseUint64(std::string_view(header[1]).substr(9), &version)) {
    throw ParseError(1, "expected epochs=<n>\\ttemplate=<v> header");
  }
  if (version != static_cast<uint64_t>(kFeatureTemplateVersion)) {
    throw ParseError(1, "unsupported feature template " + std::to_string(version));
  }
  model.epochs_trained = static_cast<int>(epochs);
  model.feature_template_version = static_cast<int>(version);
  for (size_t n = 1; n < lines.size(); ++n) {
    std::vector<std::string> fields = SplitChar(lines[n], '\t');
    double weight = 0.0;
    if (fields.size() != 3 || fields[0].empty() || !ParseDouble(fields[2], &weight) ||
        !std::isfinite(weight)) {
      throw ParseError(n + 1, "expected feature<TAB>class<TAB>weight");
    }
    int cls;
    if (fields[1] == "ezafe") cls = 1;
    else if (fields[1] == "none") cls = 0;
    else throw ParseError(n + 1, "unknown class '" + fields[1] + "'");
    model.weights[fields[0]][cls] = weight;
  }
  return model;
}

void SaveModel(const EzafeModel& model, const std::string& path) {
  WriteFile(path, SerializeModel(model));
}

EzafeModel LoadModel(const std::string& path) { return ParseModel(ReadFile(path)); }

}  // namespace gtp
