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

#ifndef GTP_MESH_CONFIG_HPP_
#define GTP_MESH_CONFIG_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace gtp {

// key=value lines, '#' comments. Relative paths resolve against the
// directory of the file they came from.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view content, std::string base_dir);
  static KeyValueConfig Load(const std::string& path);

  std::optional<std::string> Get(std::string_view key) const;
  std::string GetString(std::string_view key, std::string fallback) const;
  // Empty when the key is absent.
  std::string GetPath(std::string_view key) const;
  double GetDouble(std::string_view key, double fallback) const;
  int GetInt(std::string_view key, int fallback) const;
  bool GetBool(std::string_view key, bool fallback) const;

  void Set(const std::string& key, const std::string& value);
  const std::string& base_dir() const { return base_dir_; }
  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::string base_dir_;
};

enum class Transport { kStdio, kFifo };

// Everything the pipeline, the service host and the client read from one
// config file.
struct GtpConfig {
  std::string config_path;  // absolute path of the source file, if any

  std::string inventory;
  std::string lexicon;
  std::string lts;
  std::string homograph_db;
  std::string ezafe_model;

  Transport transport = Transport::kStdio;
  std::string fifo_in;   // service reads requests here
  std::string fifo_out;  // service writes responses here
  std::string service_exe;

  double load_delay_s = 0.0;
  double ready_timeout_s = 30.0;
  double request_timeout_s = 30.0;
  double shutdown_timeout_s = 5.0;
  bool hang_after_ready = false;  // fault injection for shutdown tests

  double sec_per_phoneme = 0.08;
  double synth_rtf = 0.153;

  std::set<std::string, std::less<>> glide_triggers;
  std::string glide_label = "y";

  std::string mode = "service";
  std::string model_name = "gtp-mesh";

  static GtpConfig FromKeyValue(const KeyValueConfig& kv, std::string config_path);
  static GtpConfig Load(const std::string& path);

  // Throws Error(kInvalidArgument) on out-of-range values.
  void Validate() const;
};

const char* TransportName(Transport t);

}  // namespace gtp

#endif  // GTP_MESH_CONFIG_HPP_
