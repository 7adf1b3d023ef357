// Copyright 2026 The MediPipe Authors.
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

// Dialogue/note corpus handling: text normalization, the default tokenizer
// used by every metric, and loading of a split-annotated corpus tree.
//
// On-disk layout:
//   <root>/<id>.dialogue.txt   speaker-tagged conversation
//   <root>/<id>.note.txt       reference note
//   manifest                   UTF-8 lines of "<id>\t<split>"

#ifndef MEDIPIPE_CORPUS_HPP_
#define MEDIPIPE_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace medipipe {

enum class Split { kTrain, kValid, kTest1, kTest2, kTest3 };

inline constexpr std::array<Split, 5> kAllSplits = {
    Split::kTrain, Split::kValid, Split::kTest1, Split::kTest2, Split::kTest3};

std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view name);

// Optional term standardization applied after normalization. Each pair maps
// a whole-token occurrence of `from` to `to`. Empty by default.
using TermTable = std::vector<std::pair<std::string, std::string>>;

// NFC composition; control characters other than '\n' removed; tabs become
// spaces; runs of spaces collapse to one; each line is trimmed.
std::string normalize_text(std::string_view raw);

std::string standardize_terms(std::string_view text, const TermTable& table);

// Tokenizer contract: text -> token list. Tokens are never empty and never
// contain whitespace.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

// Lowercases; maximal letter/digit runs form tokens; every other
// non-whitespace character is a token of its own.
class RuleTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

const Tokenizer& default_tokenizer();

std::vector<std::string> tokenize(std::string_view text);

struct DialogueRecord {
  std::string id;
  Split split = Split::kTrain;
  std::string dialogue_text;
  std::string reference_note;

  bool operator==(const DialogueRecord&) const = default;
};

struct CorpusStats {
  std::array<std::size_t, 5> counts{};
  double mean_dialogue_tokens = 0.0;
  double mean_note_tokens = 0.0;

  std::size_t count(Split split) const {
    return counts[static_cast<std::size_t>(split)];
  }
  std::size_t test_total() const;
  std::size_t total() const;
};

// Ordered id -> split assignment as read from a manifest file.
using Manifest = std::vector<std::pair<std::string, Split>>;

// Throws ValidationError listing ids assigned more than once, and
// Error(kLoad) if the file cannot be read or a line is malformed.
Manifest read_manifest(const std::filesystem::path& path);

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<DialogueRecord> records);

  const std::vector<DialogueRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  std::vector<const DialogueRecord*> in_split(Split split) const;
  const DialogueRecord* find(std::string_view id) const;

  CorpusStats stats(const Tokenizer& tokenizer = default_tokenizer()) const;

 private:
  std::vector<DialogueRecord> records_;
};

// Loads every manifest record from `root`, normalizing both texts. Records
// come back sorted by id. Failures:
//   empty root / empty manifest  -> Error(kLoad)
//   missing file                 -> ValidationError(kLoad code) naming ids
//   duplicate id                 -> ValidationError
//   empty dialogue or note       -> ValidationError
Corpus load_corpus(const std::filesystem::path& root, const Manifest& manifest,
                   const TermTable& terms = {});

Corpus load_corpus(const std::filesystem::path& root,
                   const std::filesystem::path& manifest_path,
                   const TermTable& terms = {});

}  // namespace medipipe

#endif  // MEDIPIPE_CORPUS_HPP_
