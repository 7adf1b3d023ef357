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

#include "medipipe/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "medipipe/errors.hpp"
#include "medipipe/utf8.hpp"

namespace medipipe {
namespace {

namespace fs = std::filesystem;

std::string to_nfc(const std::string& text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return text;
  const icu::UnicodeString src = icu::UnicodeString::fromUTF8(text);
  if (nfc->isNormalized(src, status) && U_SUCCESS(status)) return text;
  status = U_ZERO_ERROR;
  const icu::UnicodeString composed = nfc->normalize(src, status);
  if (U_FAILURE(status)) return text;
  std::string out;
  composed.toUTF8String(out);
  return out;
}

bool is_word_char(char32_t cp) {
  return u_isalnum(static_cast<UChar32>(cp)) != 0;
}

bool is_mark(char32_t cp) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & U_GC_M_MASK) != 0;
}

bool is_space(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0 ||
         u_isspace(static_cast<UChar32>(cp)) != 0;
}

bool is_ascii_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80 || c == '_';
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double mean_tokens(const std::vector<DialogueRecord>& records,
                   const Tokenizer& tokenizer, bool dialogue) {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) {
    sum += static_cast<double>(
        tokenizer.tokenize(dialogue ? r.dialogue_text : r.reference_note)
            .size());
  }
  return sum / static_cast<double>(records.size());
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest1: return "test1";
    case Split::kTest2: return "test2";
    case Split::kTest3: return "test3";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  for (Split s : kAllSplits) {
    if (split_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string normalize_text(std::string_view raw) {
  // Controls go first so NFC sees the final neighbourhood of every mark;
  // otherwise a removed control could enable a new composition on a second
  // pass and break idempotence.
  const std::u32string cps = utf8::decode(raw);
  std::string out;
  out.reserve(raw.size());
  std::string line;
  bool pending_space = false;
  auto flush_line = [&]() {
    out += line;
    line.clear();
    pending_space = false;
  };
  for (char32_t cp : cps) {
    if (cp == U'\n') {
      flush_line();
      out.push_back('\n');
      continue;
    }
    if (cp == U'\t' || cp == U' ') {
      if (!line.empty()) pending_space = true;
      continue;
    }
    if (u_charType(static_cast<UChar32>(cp)) == U_CONTROL_CHAR) continue;
    if (pending_space) {
      line.push_back(' ');
      pending_space = false;
    }
    utf8::append(line, cp);
  }
  flush_line();
  return to_nfc(out);
}

std::string standardize_terms(std::string_view text, const TermTable& table) {
  std::string out(text);
  for (const auto& [from, to] : table) {
    if (from.empty()) continue;
    std::string next;
    std::size_t pos = 0;
    while (true) {
      const std::size_t hit = out.find(from, pos);
      if (hit == std::string::npos) break;
      const std::size_t end = hit + from.size();
      const bool left_ok =
          hit == 0 || !is_ascii_word_byte(static_cast<unsigned char>(out[hit - 1]));
      const bool right_ok =
          end >= out.size() ||
          !is_ascii_word_byte(static_cast<unsigned char>(out[end]));
      next.append(out, pos, hit - pos);
      if (left_ok && right_ok) {
        next += to;
      } else {
        next += from;
      }
      pos = end;
    }
    next.append(out, pos, std::string::npos);
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> RuleTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&]() {
    if (!word.empty()) {
      tokens.push_back(std::move(word));
      word.clear();
    }
  };
  for (char32_t cp : utf8::decode(text)) {
    if (is_word_char(cp) || (!word.empty() && is_mark(cp))) {
      utf8::append(word, static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
      continue;
    }
    flush();
    if (is_space(cp)) continue;
    std::string punct;
    utf8::append(punct, static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
    tokens.push_back(std::move(punct));
  }
  flush();
  return tokens;
}

const Tokenizer& default_tokenizer() {
  static const RuleTokenizer tokenizer;
  return tokenizer;
}

std::vector<std::string> tokenize(std::string_view text) {
  return default_tokenizer().tokenize(text);
}

std::size_t CorpusStats::test_total() const {
  return count(Split::kTest1) + count(Split::kTest2) + count(Split::kTest3);
}

std::size_t CorpusStats::total() const {
  std::size_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kLoad, "cannot read manifest " + path.string());
  Manifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(Errc::kLoad, "manifest line " + std::to_string(line_no) +
                                   ": expected <id>\\t<split>");
    }
    std::string id = line.substr(0, tab);
    const std::string split_text = line.substr(tab + 1);
    const auto split = parse_split(split_text);
    if (id.empty() || !split) {
      throw Error(Errc::kLoad, "manifest line " + std::to_string(line_no) +
                                   ": bad id or split '" + split_text + "'");
    }
    manifest.emplace_back(std::move(id), *split);
  }
  std::vector<std::string> dups;
  std::map<std::string, int> occurrences;
  for (const auto& [id, split] : manifest) ++occurrences[id];
  for (const auto& [id, n] : occurrences) {
    if (n > 1) dups.push_back(id);
  }
  if (!dups.empty()) {
    std::string msg = "manifest assigns ids more than once:";
    for (const auto& id : dups) msg += " " + id;
    throw ValidationError(msg, dups);
  }
  return manifest;
}

Corpus::Corpus(std::vector<DialogueRecord> records)
    : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
}

std::vector<const DialogueRecord*> Corpus::in_split(Split split) const {
  std::vector<const DialogueRecord*> out;
  for (const auto& r : records_) {
    if (r.split == split) out.push_back(&r);
  }
  return out;
}

const DialogueRecord* Corpus::find(std::string_view id) const {
  auto it = std::lower_bound(
      records_.begin(), records_.end(), id,
      [](const DialogueRecord& r, std::string_view key) { return r.id < key; });
  if (it == records_.end() || it->id != id) return nullptr;
  return &*it;
}

CorpusStats Corpus::stats(const Tokenizer& tokenizer) const {
  CorpusStats s;
  for (const auto& r : records_) ++s.counts[static_cast<std::size_t>(r.split)];
  s.mean_dialogue_tokens = mean_tokens(records_, tokenizer, true);
  s.mean_note_tokens = mean_tokens(records_, tokenizer, false);
  return s;
}

Corpus load_corpus(const fs::path& root, const Manifest& manifest,
                   const TermTable& terms) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(Errc::kLoad, "corpus root is not a directory: " + root.string());
  }
  if (fs::is_empty(root, ec)) {
    throw Error(Errc::kLoad, "corpus root is empty: " + root.string());
  }
  if (manifest.empty()) throw Error(Errc::kLoad, "manifest lists no records");

  std::map<std::string, int> occurrences;
  for (const auto& [id, split] : manifest) ++occurrences[id];
  std::vector<std::string> dups;
  for (const auto& [id, n] : occurrences) {
    if (n > 1) dups.push_back(id);
  }
  if (!dups.empty()) {
    std::string msg = "duplicate record ids:";
    for (const auto& id : dups) msg += " " + id;
    throw ValidationError(msg, dups);
  }

  std::vector<std::string> missing;
  std::vector<std::string> empty;
  std::vector<DialogueRecord> records;
  records.reserve(manifest.size());
  for (const auto& [id, split] : manifest) {
    const fs::path dialogue_path = root / (id + ".dialogue.txt");
    const fs::path note_path = root / (id + ".note.txt");
    if (!fs::is_regular_file(dialogue_path, ec) ||
        !fs::is_regular_file(note_path, ec)) {
      missing.push_back(id);
      continue;
    }
    DialogueRecord r;
    r.id = id;
    r.split = split;
    r.dialogue_text = standardize_terms(normalize_text(read_file(dialogue_path)), terms);
    r.reference_note = standardize_terms(normalize_text(read_file(note_path)), terms);
    // Normalized text keeps bare newlines; a text of only those is empty.
    auto blank = [](const std::string& t) { return t.find_first_not_of('\n') == std::string::npos; };
    if (blank(r.dialogue_text) || blank(r.reference_note)) {
      empty.push_back(id);
      continue;
    }
    records.push_back(std::move(r));
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = "missing dialogue/note files for ids:";
    for (const auto& id : missing) msg += " " + id;
    throw ValidationError(msg, missing, Errc::kLoad);
  }
  if (!empty.empty()) {
    std::sort(empty.begin(), empty.end());
    std::string msg = "records with empty dialogue or note:";
    for (const auto& id : empty) msg += " " + id;
    throw ValidationError(msg, empty);
  }
  return Corpus(std::move(records));
}

Corpus load_corpus(const fs::path& root, const fs::path& manifest_path,
                   const TermTable& terms) {
  return load_corpus(root, read_manifest(manifest_path), terms);
}

}  // namespace medipipe
