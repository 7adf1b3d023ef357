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

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "medipipe/corpus.hpp"
#include "medipipe/errors.hpp"
#include "test_util.hpp"

namespace medipipe {
namespace {

using testutil::TempDir;

TEST(NormalizeText, CollapsesWhitespaceAndTrimsLines) {
  EXPECT_EQ(normalize_text("  a\t b "), "a b");
  EXPECT_EQ(normalize_text(" x  y \n  z\t"), "x y\nz");
}

TEST(NormalizeText, DropsControlCharactersButKeepsNewlines) {
  EXPECT_EQ(normalize_text("x\u0007y"), "xy");
  EXPECT_EQ(normalize_text("a\r\nb"), "a\nb");
}

TEST(NormalizeText, ComposesToNfc) {
  // "e" + combining acute accent -> U+00E9.
  EXPECT_EQ(normalize_text("caf" "e\xCC\x81"), "caf\xC3\xA9");
}

TEST(NormalizeText, IdempotentOnRandomStrings) {
  const std::vector<std::string> atoms = {"a", "Z", " ", "  ", "\t", "\n", "\r", "\x07",
                                          "\xC3\xA9", "e\xCC\x81", "\xE2\x80\x83", ".", "9",
                                          "\x1b", "\xF0\x9F\x98\x80", "\xFF"};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::uniform_int_distribution<int> len(0, 30);
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    for (int n = len(rng); n > 0; --n) s += atoms[pick(rng)];
    const std::string once = normalize_text(s);
    ASSERT_EQ(normalize_text(once), once) << "input #" << i;
  }
}

TEST(StandardizeTerms, ReplacesWholeTokensOnly) {
  const TermTable table = {{"bp", "blood pressure"}};
  EXPECT_EQ(standardize_terms("bp is high, bpm normal", table), "blood pressure is high, bpm normal");
  EXPECT_EQ(standardize_terms("nothing here", {}), "nothing here");
}

TEST(Tokenize, DefinitionInstance) {
  EXPECT_EQ(tokenize("The cat sat."), (std::vector<std::string>{"the", "cat", "sat", "."}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("55-year-old"),
            (std::vector<std::string>{"55", "-", "year", "-", "old"}));
}

TEST(Tokenize, ConcatenationPropertyOnRandomWords) {
  const std::string letters = "abcdefgXYZ019";
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::uniform_int_distribution<int> len(1, 8);
  auto word = [&] {
    std::string w;
    for (int n = len(rng); n > 0; --n) w += letters[pick(rng)];
    return w;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = word();
    const std::string b = word();
    auto expected = tokenize(a);
    const auto tb = tokenize(b);
    expected.insert(expected.end(), tb.begin(), tb.end());
    ASSERT_EQ(tokenize(a + " " + b), expected);
  }
}

TEST(Tokenize, NeverEmitsEmptyOrWhitespaceTokens) {
  for (const auto& t : tokenize("  Hello,\tworld!\n  ok?  \xC3\xA9t\xC3\xA9 ")) {
    ASSERT_FALSE(t.empty());
    for (char c : t) ASSERT_FALSE(std::isspace(static_cast<unsigned char>(c)));
  }
}

TEST(LoadCorpus, BenchmarkShapedTreeHasSplitSizes) {
  TempDir dir;
  testutil::write_benchmark_tree(dir.path());
  const Corpus c = load_corpus(dir.path(), dir / "manifest.tsv");
  const CorpusStats s = c.stats();
  EXPECT_EQ(s.count(Split::kTrain), 67u);
  EXPECT_EQ(s.count(Split::kValid), 20u);
  EXPECT_EQ(s.test_total(), 120u);
  EXPECT_EQ(s.total(), 207u);
  EXPECT_GT(s.mean_dialogue_tokens, 0.0);
  EXPECT_GT(s.mean_note_tokens, 0.0);
}

TEST(LoadCorpus, CountsMatchIndependentDirectoryScan) {
  TempDir dir;
  testutil::write_benchmark_tree(dir.path());
  std::map<std::string, std::size_t> by_prefix;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    const std::string name = e.path().filename().string();
    const auto dot = name.find(".dialogue.txt");
    if (dot == std::string::npos) continue;
    ++by_prefix[name.substr(0, name.find('-'))];
  }
  const CorpusStats s = load_corpus(dir.path(), dir / "manifest.tsv").stats();
  EXPECT_EQ(s.count(Split::kTrain), by_prefix["train"]);
  EXPECT_EQ(s.count(Split::kValid), by_prefix["valid"]);
  EXPECT_EQ(s.count(Split::kTest1), by_prefix["test1"]);
  EXPECT_EQ(s.count(Split::kTest2), by_prefix["test2"]);
  EXPECT_EQ(s.count(Split::kTest3), by_prefix["test3"]);
}

TEST(LoadCorpus, IsDeterministicAndSortedById) {
  TempDir dir;
  testutil::write_benchmark_tree(dir.path());
  const Corpus a = load_corpus(dir.path(), dir / "manifest.tsv");
  const Corpus b = load_corpus(dir.path(), dir / "manifest.tsv");
  EXPECT_EQ(a.records(), b.records());
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_LT(a.records()[i - 1].id, a.records()[i].id);
  }
}

TEST(LoadCorpus, EmptyDirectoryIsLoadError) {
  TempDir dir;
  try {
    load_corpus(dir.path(), Manifest{{"x", Split::kTrain}});
    FAIL() << "expected a load error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLoad);
  }
}

TEST(LoadCorpus, DuplicateManifestIdIsValidationError) {
  TempDir dir;
  testutil::write(dir / "a.dialogue.txt", "[doctor] hi");
  testutil::write(dir / "a.note.txt", "CHIEF COMPLAINT\nx");
  testutil::write(dir / "m.tsv", "a\ttrain\na\ttest1\n");
  try {
    read_manifest(dir / "m.tsv");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), Errc::kValidation);
    EXPECT_EQ(e.ids(), std::vector<std::string>{"a"});
  }
}

TEST(LoadCorpus, MissingFileNamesTheId) {
  TempDir dir;
  testutil::write(dir / "a.dialogue.txt", "[doctor] hi");
  try {
    load_corpus(dir.path(), Manifest{{"a", Split::kTrain}});
    FAIL() << "expected a load error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), Errc::kLoad);
    EXPECT_EQ(e.ids(), std::vector<std::string>{"a"});
  }
}

TEST(LoadCorpus, EmptyNoteAfterNormalizationIsRejected) {
  TempDir dir;
  testutil::write(dir / "a.dialogue.txt", "[doctor] hi");
  testutil::write(dir / "a.note.txt", " \t \n \x07 ");
  EXPECT_THROW(load_corpus(dir.path(), Manifest{{"a", Split::kTrain}}), ValidationError);
}

TEST(ReadManifest, MalformedLineIsLoadError) {
  TempDir dir;
  testutil::write(dir / "m.tsv", "a train\n");
  try {
    read_manifest(dir / "m.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLoad);
  }
}

}  // namespace
}  // namespace medipipe
