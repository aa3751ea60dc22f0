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

#ifndef GTP_MESH_TESTS_SUPPORT_HPP_
#define GTP_MESH_TESTS_SUPPORT_HPP_

#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtp_mesh/config.hpp"
#include "gtp_mesh/ezafe.hpp"
#include "gtp_mesh/homograph.hpp"
#include "gtp_mesh/lexicon.hpp"
#include "gtp_mesh/phoneme.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp::testing {

inline const std::string kDataDir = GTP_DATA_DIR;
inline const std::string kCliPath = GTP_CLI_PATH;

inline std::string DataPath(const std::string& name) { return kDataDir + "/" + name; }

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "gtp-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) std::abort();
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string File(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

// Builds the db and tagger from the bundled corpora into `dir` and writes a
// config there. Extra lines are appended verbatim.
inline std::string WriteFixtureConfig(const TempDir& dir, const std::string& extra = "") {
  const PhonemeInventory inv = PhonemeInventory::Load(DataPath("inventory.txt"));
  const Lexicon lex = Lexicon::Load(DataPath("lexicon.tsv"), &inv);
  const std::string db_path = dir.File("homograph.db");
  const std::string model_path = dir.File("ezafe.model");
  if (!std::filesystem::exists(db_path)) {
    SaveDb(BuildDb(AnnotatedCorpus::Load(DataPath("homograph_corpus.txt")), lex, 5, 1.0),
           db_path);
  }
  if (!std::filesystem::exists(model_path)) {
    SaveModel(Train(EzafeCorpus::Load(DataPath("ezafe_corpus.txt")), 10), model_path);
  }
  std::string cfg;
  cfg += "inventory=" + DataPath("inventory.txt") + "\n";
  cfg += "lexicon=" + DataPath("lexicon.tsv") + "\n";
  cfg += "lts=" + DataPath("lts.tsv") + "\n";
  cfg += "homograph_db=" + db_path + "\n";
  cfg += "ezafe_model=" + model_path + "\n";
  cfg += "glide_triggers=aa,eh,o,u,uw,iy,ey,ow,ay,ih,ah,ae\n";
  cfg += "service_exe=" + kCliPath + "\n";
  cfg += extra;
  const std::string path = dir.File("gtp.conf");
  WriteFile(path, cfg);
  return path;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

inline CommandResult RunCommand(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

inline std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

// Random phoneme sequences over a small inventory.
inline PhonemeInventory SmallInventory() {
  return PhonemeInventory({"k", "e", "t", "A", "b", "m", "a", "n", "y", "u", "s"}, "e");
}

inline PhonemeSequence RandomAlignedSequence(std::mt19937_64& rng, const PhonemeInventory& inv,
                                             size_t max_words = 6, size_t max_len = 5) {
  std::uniform_int_distribution<size_t> n_words(0, max_words);
  std::uniform_int_distribution<size_t> len(1, max_len);
  std::uniform_int_distribution<size_t> pick(0, inv.symbols().size() - 1);
  std::vector<std::vector<std::string>> words(n_words(rng));
  for (auto& w : words) {
    const size_t n = len(rng);
    for (size_t i = 0; i < n; ++i) w.push_back(inv.symbols()[pick(rng)]);
  }
  return FromWords(words);
}

// Fixture grammar over the bundled lexicon: English clauses with one of the
// homographs, and transliterated Persian noun phrases.
class FixtureGrammar {
 public:
  explicit FixtureGrammar(uint64_t seed) : rng_(seed) {}

  std::string Utterance() {
    std::vector<std::string> parts;
    const int n = Pick(std::vector<int>{1, 2, 2, 3});
    for (int i = 0; i < n; ++i) parts.push_back(Coin(0.5) ? Clause() : Persian());
    return JoinStrings(parts, " ");
  }

  std::string Clause() {
    const std::string subj = Pick({"we", "they", "i", "she", "he"});
    switch (Pick(std::vector<int>{0, 1, 2, 3, 4, 5})) {
      case 0: return subj + " " + Pick({"will", "can", "must"}) + " read the " + Obj();
      case 1: return subj + " " + Pick({"had", "has", "already"}) + " read the " + Obj() +
                     (Coin(0.5) ? " yesterday" : " last week");
      case 2: return subj + " will lead the team";
      case 3: return "the pipe is made of lead";
      case 4: return subj + " live in the city";
      default: return Pick({"the", "a"}) + std::string(" live ") + Pick({"show", "concert", "music"});
    }
  }

  std::string Persian() {
    std::string out = NounPhrase();
    if (Coin(0.4)) out += " " + Pick({"va", "ba", "az"}) + " " + NounPhrase();
    return out + " " + Pick({"ra didam", "ast", "bud"});
  }

 private:
  std::string Obj() { return Pick({"book", "letter", "news", "paper"}); }

  std::string NounPhrase() {
    std::string out = Pick({"ketab", "khane", "dast", "shahr", "mard", "zan", "ab", "bagh",
                            "kuh", "daftar", "dust", "pesar", "dokhtar"});
    const int n_adj = Pick(std::vector<int>{0, 1, 1, 2});
    for (int i = 0; i < n_adj; ++i) {
      out += " " + Pick({"bozorg", "kuchak", "sefid", "siyah", "ziba", "garm", "sard", "no",
                         "khub"});
    }
    return out;
  }

  bool Coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  template <typename T>
  T Pick(const std::vector<T>& xs) {
    return xs[std::uniform_int_distribution<size_t>(0, xs.size() - 1)(rng_)];
  }
  std::string Pick(std::initializer_list<const char*> xs) {
    return Pick(std::vector<std::string>(xs.begin(), xs.end()));
  }

  std::mt19937_64 rng_;
};

}  // namespace gtp::testing

#endif  // GTP_MESH_TESTS_SUPPORT_HPP_
