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

#ifndef GTP_MESH_EZAFE_HPP_
#define GTP_MESH_EZAFE_HPP_

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gtp_mesh/phoneme.hpp"

namespace gtp {

inline constexpr int kFeatureTemplateVersion = 1;

enum class EzafeClass : int { kNone = 0, kEzafe = 1 };

const char* EzafeClassName(EzafeClass c);

// Binary per-token tagger weights: feature -> {none, ezafe}. Features whose
// weights are both zero are not stored.
struct EzafeModel {
  std::map<std::string, std::array<double, 2>, std::less<>> weights;
  int epochs_trained = 0;
  int feature_template_version = kFeatureTemplateVersion;

  bool operator==(const EzafeModel&) const = default;
};

struct EzafeUtterance {
  std::vector<std::string> tokens;
  std::vector<bool> gold;

  bool operator==(const EzafeUtterance&) const = default;
};

struct EzafeCorpus {
  std::vector<EzafeUtterance> utterances;

  // One utterance per line; Ezafe-bearing tokens end in "=e".
  static EzafeCorpus Parse(std::string_view content);
  static EzafeCorpus Load(const std::string& path);
};

// w=, prev=, next=, suf1..suf3 (as many as the token has), next_suf1=, bias.
std::vector<std::string> ExtractFeatures(const std::vector<std::string>& tokens, size_t i);

// Averaged perceptron, fixed corpus order, no shuffling. Ties predict none.
// Throws Error(kInvalidArgument) for epochs < 1 and Error(kEmptyCorpus).
EzafeModel Train(const EzafeCorpus& corpus, int epochs);

// Per-token argmax; the last token is always none.
std::vector<bool> Tag(const EzafeModel& model, const std::vector<std::string>& tokens);

struct GlideRule {
  std::set<std::string, std::less<>> triggers;  // empty disables the rule
  std::string label;
};

// Appends the Ezafe symbol to every tagged word whose span does not already
// end with it, preceded by the glide label when the word ends in a trigger.
PhonemeSequence InsertEzafe(const PhonemeSequence& seq, const std::vector<bool>& tags,
                            const PhonemeInventory& inv, const GlideRule& glide = {});

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Binary precision/recall/F1 for the positive class; zero denominators
// yield 0.
Prf PrfFromCounts(size_t tp, size_t fp, size_t fn);
Prf PrfFromTags(const std::vector<bool>& gold, const std::vector<bool>& predicted);

Prf Evaluate(const EzafeModel& model, const EzafeCorpus& corpus);

std::string SerializeModel(const EzafeModel& model);
EzafeModel ParseModel(std::string_view content);
void SaveModel(const EzafeModel& model, const std::string& path);
EzafeModel LoadModel(const std::string& path);

}  // namespace gtp

#endif  // GTP_MESH_EZAFE_HPP_
