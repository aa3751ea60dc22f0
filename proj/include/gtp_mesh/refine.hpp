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

#ifndef GTP_MESH_REFINE_HPP_
#define GTP_MESH_REFINE_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gtp_mesh/config.hpp"
#include "gtp_mesh/ezafe.hpp"
#include "gtp_mesh/frame.hpp"
#include "gtp_mesh/homograph.hpp"
#include "gtp_mesh/lexicon.hpp"
#include "gtp_mesh/phoneme.hpp"

namespace gtp {

// Artifacts the core engine needs for base phonemization. The service needs
// the inventory and lexicon as well.
struct CoreArtifacts {
  PhonemeInventory inventory;
  Lexicon lexicon;
  LtsTable lts;
  GlideRule glide;
};

// The context-aware models whose loading the service decouples from the
// request path.
struct RefineModels {
  HomographDb db;
  EzafeModel ezafe;
};

CoreArtifacts LoadCore(const GtpConfig& config);

// An empty homograph_db or ezafe_model path yields an empty db / an
// all-none tagger.
RefineModels LoadRefineModels(const GtpConfig& config);

struct HomographChoice {
  size_t token_index = 0;
  int variant = 0;

  bool operator==(const HomographChoice&) const = default;
};

struct RefineResult {
  PhonemeSequence seq;
  std::vector<HomographChoice> choices;
  std::vector<bool> ezafe_tags;
  std::vector<std::string> trace;
};

using TraceFn = std::function<void(std::string_view event)>;

// Homograph disambiguation first, then Ezafe insertion. `seq` must carry
// one alignment span per token. Emits "homograph" then "ezafe" to `trace`.
RefineResult Refine(const std::vector<std::string>& tokens, const PhonemeSequence& seq,
                    const std::vector<HomographSite>& sites, const CoreArtifacts& core,
                    const RefineModels& models, const TraceFn& trace = {});

Json RefineRequestToJson(const std::vector<std::string>& tokens, const PhonemeSequence& seq,
                         const std::vector<HomographSite>& sites, bool trace);

struct RefineRequest {
  std::vector<std::string> tokens;
  PhonemeSequence seq;  // aligned by boundaries
  std::vector<HomographSite> sites;
  bool trace = false;
};

// Throws Error(kMalformedPayload) for structural problems and the usual
// phoneme errors for bad sequences.
RefineRequest ParseRefineRequest(const Json& body, const PhonemeInventory& inv);

Json RefineResultToJson(const RefineResult& result);
RefineResult ParseRefineResponse(const Json& body, const PhonemeInventory& inv);

}  // namespace gtp

#endif  // GTP_MESH_REFINE_HPP_
