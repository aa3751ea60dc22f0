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

#include "gtp_mesh/config.hpp"

#include <cmath>
#include <filesystem>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

namespace fs = std::filesystem;

KeyValueConfig KeyValueConfig::Parse(std::string_view content, std::string base_dir) {
  KeyValueConfig cfg;
  cfg.base_dir_ = std::move(base_dir);
  size_t line_no = 0;
  for (const std::string& raw : SplitChar(content, '\n')) {
    ++line_no;
    std::string_view line = TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError(line_no, "expected key=value");
    }
    cfg.values_[std::string(TrimAscii(line.substr(0, eq)))] =
        std::string(TrimAscii(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Load(const std::string& path) {
  fs::path abs = fs::absolute(path);
  return Parse(ReadFile(path), abs.parent_path().string());
}

std::optional<std::string> KeyValueConfig::Get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetString(std::string_view key, std::string fallback) const {
  auto v = Get(key);
  return v ? *v : std::move(fallback);
}

std::string KeyValueConfig::GetPath(std::string_view key) const {
  auto v = Get(key);
  if (!v || v->empty()) return {};
  fs::path p(*v);
  if (p.is_relative() && !base_dir_.empty()) p = fs::path(base_dir_) / p;
  return p.lexically_normal().string();
}

double KeyValueConfig::GetDouble(std::string_view key, double fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  double out = 0.0;
  if (!ParseDouble(*v, &out) || !std::isfinite(out)) {
    throw Error(ErrorCode::kInvalidArgument,
                "config key " + std::string(key) + ": bad number '" + *v + "'");
  }
  return out;
}

int KeyValueConfig::GetInt(std::string_view key, int fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  uint64_t out = 0;
  if (!ParseUint64(*v, &out) || out > 1000000000u) {
    throw Error(ErrorCode::kInvalidArgument,
                "config key " + std::string(key) + ": bad integer '" + *v + "'");
  }
  return static_cast<int>(out);
}

bool KeyValueConfig::GetBool(std::string_view key, bool fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes") return true;
  if (*v == "0" || *v == "false" || *v == "no") return false;
  throw Error(ErrorCode::kInvalidArgument,
              "config key " + std::string(key) + ": bad boolean '" + *v + "'");
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

GtpConfig GtpConfig::FromKeyValue(const KeyValueConfig& kv, std::string config_path) {
  GtpConfig cfg;
  cfg.config_path = std::move(config_path);
  cfg.inventory = kv.GetPath("inventory");
  cfg.lexicon = kv.GetPath("lexicon");
  cfg.lts = kv.GetPath("lts");
  cfg.homograph_db = kv.GetPath("homograph_db");
  cfg.ezafe_model = kv.GetPath("ezafe_model");

  std::string transport = kv.GetString("transport", "stdio");
  if (transport == "stdio") {
    cfg.transport = Transport::kStdio;
  } else if (transport == "fifo") {
    cfg.transport = Transport::kFifo;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "transport must be stdio or fifo");
  }
  cfg.fifo_in = kv.GetPath("fifo_in");
  cfg.fifo_out = kv.GetPath("fifo_out");
  cfg.service_exe = kv.GetPath("service_exe");

  cfg.load_delay_s = kv.GetDouble("load_delay_s", cfg.load_delay_s);
  cfg.ready_timeout_s = kv.GetDouble("ready_timeout_s", cfg.ready_timeout_s);
  cfg.request_timeout_s = kv.GetDouble("request_timeout_s", cfg.request_timeout_s);
  cfg.shutdown_timeout_s = kv.GetDouble("shutdown_timeout_s", cfg.shutdown_timeout_s);
  cfg.hang_after_ready = kv.GetBool("hang_after_ready", false);
  cfg.sec_per_phoneme = kv.GetDouble("sec_per_phoneme", cfg.sec_per_phoneme);
  cfg.synth_rtf = kv.GetDouble("synth_rtf", cfg.synth_rtf);

  if (auto triggers = kv.Get("glide_triggers")) {
    for (const std::string& t : SplitChar(*triggers, ',')) {
      std::string_view label = TrimAscii(t);
      if (!label.empty()) cfg.glide_triggers.emplace(label);
    }
  }
  cfg.glide_label = kv.GetString("glide_label", cfg.glide_label);
  cfg.mode = kv.GetString("mode", cfg.mode);
  cfg.model_name = kv.GetString("model_name", cfg.model_name);
  cfg.Validate();
  return cfg;
}

GtpConfig GtpConfig::Load(const std::string& path) {
  return FromKeyValue(KeyValueConfig::Load(path), fs::absolute(path).lexically_normal().string());
}

void GtpConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(sec_per_phoneme > 0.0, "sec_per_phoneme must be > 0");
  require(synth_rtf >= 0.0, "synth_rtf must be >= 0");
  require(load_delay_s >= 0.0, "load_delay_s must be >= 0");
  require(ready_timeout_s > 0.0, "ready_timeout_s must be > 0");
  require(request_timeout_s > 0.0, "request_timeout_s must be > 0");
  require(shutdown_timeout_s > 0.0, "shutdown_timeout_s must be > 0");
  if (transport == Transport::kFifo) {
    require(!fifo_in.empty() && !fifo_out.empty(), "fifo transport needs fifo_in and fifo_out");
  }
}

const char* TransportName(Transport t) {
  return t == Transport::kFifo ? "fifo" : "stdio";
}

}  // namespace gtp
