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

#include "medipipe/errors.hpp"
#include "medipipe/fixtures.hpp"
#include "medipipe/rag.hpp"
#include "medipipe/utf8.hpp"
#include "oracles.hpp"

namespace medipipe {
namespace {

TranscriptSession fig2_session(bool finalized = true) {
  TranscriptSession s("fig2");
  for (auto& seg : fixtures::back_pain_segments()) s.append(seg);
  if (finalized) s.finalize();
  return s;
}

SoapNote reference_note() {
  SoapNote n = parse_note_text(fixtures::back_pain_reference_note());
  n.note_id = "note-ref";
  return n;
}

// Fails on the n-th text of any batch.
class FailingEmbedder final : public Embedder {
 public:
  explicit FailingEmbedder(std::size_t fail_at) : fail_at_(fail_at) {}

 private:
  std::vector<EmbeddingVector> do_embed(const std::vector<std::string>& texts) const override {
    std::vector<EmbeddingVector> out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (i == fail_at_) throw ProviderError("embedder down", true);
      out.push_back(mock_embed(texts[i]));
    }
    return out;
  }
  std::size_t fail_at_;
};

class FailingGenerator final : public Generator {
  std::string do_generate(const GenerationRequest&) const override {
    throw ProviderError("generator down", true);
  }
};

class FixedGenerator final : public Generator {
 public:
  explicit FixedGenerator(std::string text) : text_(std::move(text)) {}

 private:
  std::string do_generate(const GenerationRequest&) const override { return text_; }
  std::string text_;
};

TEST(GenerateNote, SampleSessionWithMock) {
  const SoapNote n = generate_note(fig2_session(), MockGenerator());
  EXPECT_EQ(n.note_id, "note-fig2");
  EXPECT_EQ(n.source_session, "fig2");
  EXPECT_FALSE(n.section(SectionKey::kChiefComplaint).empty());
  const std::string text = render_note(n);
  for (auto k : kSectionOrder) EXPECT_NE(text.find(section_header(k)), std::string::npos);
  EXPECT_EQ(generate_note(fig2_session(), MockGenerator()), n);
}

TEST(GenerateNote, OpenSessionIsPrecondition) {
  try {
    generate_note(fig2_session(false), MockGenerator());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kPrecondition);
  }
}

TEST(GenerateNote, ProviderAndParseFailures) {
  try {
    generate_note(fig2_session(), FailingGenerator());
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.stage(), "generate");
  }
  try {
    generate_note(fig2_session(), FixedGenerator("just prose"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.raw_text(), "just prose");
  }
}

TEST(IngestNote, ShortNoteIsOneEntryWithMetadata) {
  VectorIndex idx;
  const auto ids = ingest_note(reference_note(), MockEmbedder(), idx, RagConfig{});
  ASSERT_EQ(ids.size(), 1u);
  const auto e = idx.entries().front();
  EXPECT_EQ(e.metadata.source_id, "note-ref");
  EXPECT_EQ(e.metadata.note_id, "note-ref");
  EXPECT_EQ(e.metadata.seq, 0);
  EXPECT_EQ(e.chunk_text, render_note(reference_note()));
}

TEST(IngestNote, SelfRetrievalThroughFullPath) {
  VectorIndex idx;
  RagConfig cfg;
  cfg.chunk_cfg.chunk_size = 60;
  cfg.chunk_cfg.overlap = 10;
  const SoapNote n = generate_note(fig2_session(), MockGenerator());
  const auto ids = ingest_note(n, MockEmbedder(), idx, cfg);
  ASSERT_GT(ids.size(), 2u);
  const auto entries = idx.entries();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto hits = idx.knn(mock_embed(entries[i].chunk_text), 1);
    EXPECT_NEAR(hits[0].score, 1.0, 1e-9);
    EXPECT_EQ(hits[0].chunk_text, entries[i].chunk_text);
  }
}

TEST(IngestNote, EmbedFailureAddsNothing) {
  VectorIndex idx;
  RagConfig cfg;
  cfg.chunk_cfg.chunk_size = 60;
  cfg.chunk_cfg.overlap = 0;
  try {
    ingest_note(generate_note(fig2_session(), MockGenerator()), FailingEmbedder(2), idx, cfg);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.stage(), "embed");
  }
  EXPECT_EQ(idx.size(), 0u);
}

SearchHit hit(std::uint64_t id, double score, std::string text) {
  return SearchHit{id, score, std::move(text), EntryMetadata{"src", std::nullopt, 0}};
}

TEST(AssemblePrompt, EmptyContextLayout) {
  const auto p = assemble_prompt("SYS", {}, "q?", 100);
  EXPECT_EQ(p.text, "SYS\nContext:\nQuestion: q?\nAnswer:");
  EXPECT_EQ(p.hits_used, 0u);
  EXPECT_THROW(assemble_prompt("SYS", {}, "", 100), Error);
}

TEST(AssemblePrompt, KeepsHitOrder) {
  const auto p = assemble_prompt("S", {hit(1, .9, "A"), hit(2, .8, "B"), hit(3, .7, "C")}, "q", 1000);
  EXPECT_EQ(p.text, "S\nContext:\n[1] A\n[2] B\n[3] C\nQuestion: q\nAnswer:");
}

TEST(AssemblePrompt, TruncationMatchesGreedyOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> n(0, 8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SearchHit> hits;
    for (int i = n(rng); i > 0; --i) hits.push_back(hit(static_cast<std::uint64_t>(i), 0.5, std::string(static_cast<std::size_t>(len(rng)), 'x')));
    const std::size_t budget = static_cast<std::size_t>(len(rng)) * 3;
    // Oracle: whole lines while the running total fits.
    std::string context;
    std::size_t used = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const std::string line = "[" + std::to_string(i + 1) + "] " + hits[i].chunk_text + "\n";
      if (total + line.size() > budget) break;
      total += line.size();
      context += line;
      ++used;
    }
    const auto p = assemble_prompt("S", hits, "q", budget);
    ASSERT_EQ(p.text, "S\nContext:\n" + context + "Question: q\nAnswer:");
    ASSERT_EQ(p.hits_used, used);
  }
}

TEST(AnswerQuery, EmptyIndexHasNoContext) {
  VectorIndex idx;
  const Answer a = answer_query("back pain", RagConfig{}, MockEmbedder(), idx, MockGenerator());
  EXPECT_FALSE(a.context_used);
  EXPECT_TRUE(a.citations.empty());
  EXPECT_THROW(answer_query("", RagConfig{}, MockEmbedder(), idx, MockGenerator()), Error);
}

TEST(AnswerQuery, BackPainChunkRanksFirstAgainstOracle) {
  VectorIndex idx;
  const RagConfig cfg;
  ingest_note(generate_note(fig2_session(), MockGenerator()), MockEmbedder(), idx, cfg);
  ingest_note(reference_note(), MockEmbedder(), idx, cfg);
  const Answer a = answer_query("back pain", cfg, MockEmbedder(), idx, MockGenerator());
  ASSERT_TRUE(a.context_used);
  ASSERT_FALSE(a.citations.empty());
  const auto entries = idx.entries();
  std::vector<std::vector<float>> stored;
  for (const auto& e : entries) stored.push_back(e.vector);
  const auto ref = oracle::knn_scan(stored, mock_embed("back pain").values, cfg.k);
  ASSERT_EQ(a.citations.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(a.citations[i].entry_id, entries[ref[i].position].entry_id);
    EXPECT_NEAR(a.citations[i].score, ref[i].score, 1e-12);
  }
  EXPECT_NE(entries[a.citations[0].entry_id].chunk_text.find("Back pain"), std::string::npos);
  EXPECT_EQ(a.citations[0].source_id, "note-ref");
  EXPECT_EQ(answer_query("back pain", cfg, MockEmbedder(), idx, MockGenerator()), a);
}

TEST(AnswerQuery, StageTags) {
  VectorIndex idx;
  ingest_note(reference_note(), MockEmbedder(), idx, RagConfig{});
  auto stage_of = [&](const Embedder& e, const Generator& g) {
    try {
      answer_query("back pain", RagConfig{}, e, idx, g);
    } catch (const ProviderError& err) {
      return err.stage();
    }
    return std::string("none");
  };
  EXPECT_EQ(stage_of(FailingEmbedder(0), MockGenerator()), "embed");
  EXPECT_EQ(stage_of(MockEmbedder(32), MockGenerator()), "search");
  EXPECT_EQ(stage_of(MockEmbedder(), FailingGenerator()), "generate");
}

TEST(AnswerQuery, CitationsAreBoundedByK) {
  VectorIndex idx;
  RagConfig cfg;
  cfg.k = 2;
  cfg.chunk_cfg.chunk_size = 40;
  cfg.chunk_cfg.overlap = 5;
  ingest_note(generate_note(fig2_session(), MockGenerator()), MockEmbedder(), idx, cfg);
  const Answer a = answer_query("back", cfg, MockEmbedder(), idx, MockGenerator());
  EXPECT_LE(a.citations.size(), 2u);
  for (std::size_t i = 1; i < a.citations.size(); ++i) {
    EXPECT_TRUE(a.citations[i - 1].score > a.citations[i].score ||
                (a.citations[i - 1].score == a.citations[i].score &&
                 a.citations[i - 1].entry_id < a.citations[i].entry_id));
  }
}

}  // namespace
}  // namespace medipipe
