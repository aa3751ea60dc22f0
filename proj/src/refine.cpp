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

#include "gtp_mesh/refine.hpp"

#include "gtp_mesh/error.hpp"

namespace gtp {

CoreArtifacts LoadCore(const GtpConfig& config) {
  if (config.inventory.empty() || config.lexicon.empty() || config.lts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "config needs inventory, lexicon and lts");
  }
  CoreArtifacts core;
  core.inventory = PhonemeInventory::Load(config.inventory);
  core.lexicon = Lexicon::Load(config.lexicon, &core.inventory);
  core.lts = LtsTable::Load(config.lts, &core.inventory);
  core.glide.triggers = config.glide_triggers;
  core.glide.label = config.glide_label;
  if (!core.glide.triggers.empty() && !core.inventory.Contains(core.glide.label)) {
    throw UnknownPhonemeError(core.glide.label, 0);
  }
  return core;
}

RefineModels LoadRefineModels(const GtpConfig& config) {
  RefineModels models;
  if (!config.homograph_db.empty()) models.db = LoadDb(config.homograph_db);
  if (!config.ezafe_model.empty()) models.ezafe = LoadModel(config.ezafe_model);
  return models;
}

RefineResult Refine(const std::vector<std::string>& tokens, const PhonemeSequence& seq,
                    const std::vector<HomographSite>& sites, const CoreArtifacts& core,
                    const RefineModels& models, const TraceFn& trace) {
  CheckAlignment(seq);
  if (seq.alignment->size() != tokens.size()) {
    throw Error(ErrorCode::kMissingAlignment,
                std::to_string(tokens.size()) + " tokens but " +
                    std::to_string(seq.alignment->size()) + " aligned words");
  }
  RefineResult result;
  auto emit = [&](std::string_view event) {
    result.trace.emplace_back(event);
    if (trace) trace(event);
  };

  std::vector<int> variants;
  variants.reserve(sites.size());
  for (const HomographSite& site : sites) {
    Disambiguation d = Disambiguate(models.db, site, tokens, core.lexicon);
    variants.push_back(d.variant);
    result.choices.push_back(HomographChoice{site.token_index, d.variant});
  }
  PhonemeSequence corrected = ApplyHomographs(seq, sites, variants, core.lexicon);
  emit("homograph");

  result.ezafe_tags = Tag(models.ezafe, tokens);
  result.seq = InsertEzafe(corrected, result.ezafe_tags, core.inventory, core.glide);
  emit("ezafe");
  return result;
}

Json RefineRequestToJson(const std::vector<std::string>& tokens, const PhonemeSequence& seq,
                         const std::vector<HomographSite>& sites, bool trace) {
  Json site_list = Json::array();
  for (const HomographSite& s : sites) site_list.push_back(Json::array({s.token_index, s.word}));
  Json body{{"tokens", tokens}, {"phonemes", SeqToText(seq)}, {"sites", site_list}};
  if (trace) body["trace"] = true;
  return body;
}

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedPayload, what);
}

std::vector<std::string> StringList(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_array()) Malformed(std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const Json& v : *it) {
    if (!v.is_string()) Malformed(std::string(key) + " entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

PhonemeSequence SequenceField(const Json& body, const PhonemeInventory& inv) {
  auto it = body.find("phonemes");
  if (it == body.end() || !it->is_string()) Malformed("phonemes must be a string");
  return AlignByBoundaries(ParseSeq(it->get<std::string>(), inv));
}

}  // namespace

RefineRequest ParseRefineRequest(const Json& body, const PhonemeInventory& inv) {
  if (!body.is_object()) Malformed("refine body must be an object");
  RefineRequest req;
  req.tokens = StringList(body, "tokens");
  req.seq = SequenceField(body, inv);
  auto sites = body.find("sites");
  if (sites == body.end() || !sites->is_array()) Malformed("sites must be an array");
  for (const Json& s : *sites) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_string()) {
      Malformed("site entries must be [index, word]");
    }
    req.sites.push_back(HomographSite{s[0].get<size_t>(), s[1].get<std::string>()});
  }
  req.trace = body.value("trace", false);
  return req;
}

Json RefineResultToJson(const RefineResult& result) {
  Json choices = Json::array();
  for (const HomographChoice& c : result.choices) {
    choices.push_back(Json::array({c.token_index, c.variant}));
  }
  Json tags = Json::array();
  for (bool t : result.ezafe_tags) tags.push_back(t);
  Json body{{"phonemes", SeqToText(result.seq)}, {"choices", choices}, {"ezafe_tags", tags}};
  if (!result.trace.empty()) body["trace"] = result.trace;
  return body;
}

RefineResult ParseRefineResponse(const Json& body, const PhonemeInventory& inv) {
  if (!body.is_object()) Malformed("refine response must be an object");
  RefineResult result;
  result.seq = SequenceField(body, inv);
  auto choices = body.find("choices");
  if (choices == body.end() || !choices->is_array()) Malformed("choices must be an array");
  for (const Json& c : *choices) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_unsigned() || !c[1].is_number_integer()) {
      Malformed("choice entries must be [index, variant]");
    }
    result.choices.push_back(HomographChoice{c[0].get<size_t>(), c[1].get<int>()});
  }
  auto tags = body.find("ezafe_tags");
  if (tags == body.end() || !tags->is_array()) Malformed("ezafe_tags must be an array");
  for (const Json& t : *tags) {
    if (!t.is_boolean()) Malformed("ezafe_tags entries must be booleans");
    result.ezafe_tags.push_back(t.get<bool>());
  }
  if (body.contains("trace")) result.trace = StringList(body, "trace");
  return result;
}

}  // namespace gtp
