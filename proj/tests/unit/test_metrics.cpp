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

#include <algorithm>
#include <cmath>
#include <random>

#include "medipipe/errors.hpp"
#include "medipipe/metrics.hpp"
#include "oracles.hpp"

namespace medipipe {
namespace {

Tokens random_tokens(std::mt19937_64& rng, std::size_t max_len, int vocab) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  Tokens t(len(rng));
  for (auto& w : t) w = "w" + std::to_string(word(rng));
  return t;
}

Tokens words(const std::string& s) { return default_tokenizer().tokenize(s); }

TEST(RougeN, MatchesMultisetOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Tokens c = random_tokens(rng, 20, 10);
    const Tokens r = random_tokens(rng, 20, 10);
    for (std::size_t n : {1u, 2u}) {
      const auto got = rouge_n(c, r, n);
      const auto want = oracle::rouge_n(c, r, n);
      ASSERT_NEAR(got.precision, want.p, 1e-12);
      ASSERT_NEAR(got.recall, want.r, 1e-12);
      ASSERT_NEAR(got.f1, want.f, 1e-12);
    }
  }
}

TEST(RougeN, WorkedExample) {
  const auto s = rouge_n(words("the cat sat"), words("the cat"), 1);
  EXPECT_NEAR(s.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.recall, 1.0, 1e-12);
  EXPECT_NEAR(s.f1, 0.8, 1e-12);
}

TEST(RougeN, IdentityAndDisjoint) {
  const Tokens a = words("knee pain after a fall last week");
  for (std::size_t n : {1u, 2u}) {
    EXPECT_EQ(rouge_n(a, a, n), (RougeScore{1.0, 1.0, 1.0}));
    EXPECT_EQ(rouge_n(a, words("no overlap here at all"), n), (RougeScore{0.0, 0.0, 0.0}));
  }
  EXPECT_EQ(rouge_n({}, a, 1), (RougeScore{0.0, 0.0, 0.0}));
  EXPECT_EQ(rouge_n(words("one"), words("one"), 2), (RougeScore{0.0, 0.0, 0.0}));
}

TEST(RougeN, ClippedCounts) {
  const auto s = rouge_n(words("the the the"), words("the cat"), 1);
  EXPECT_NEAR(s.precision, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.recall, 0.5, 1e-12);
}

TEST(Lcs, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Tokens a = random_tokens(rng, 10, 4);
    const Tokens b = random_tokens(rng, 10, 4);
    ASSERT_EQ(lcs_length(a, b), oracle::lcs_exhaustive(a, b));
    ASSERT_EQ(lcs_length(a, b), lcs_length(b, a));
    ASSERT_EQ(lcs_ref_positions(a, b).size(), lcs_length(a, b));
  }
  EXPECT_EQ(lcs_length(words("a b c d"), words("a c b d")), 3u);
}

TEST(Lcs, RefPositionsFormCommonSubsequence) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const Tokens r = random_tokens(rng, 15, 5);
    const Tokens c = random_tokens(rng, 15, 5);
    const auto pos = lcs_ref_positions(r, c);
    ASSERT_TRUE(std::is_sorted(pos.begin(), pos.end()));
    ASSERT_EQ(std::adjacent_find(pos.begin(), pos.end()), pos.end());
    Tokens sub;
    for (auto p : pos) sub.push_back(r[p]);
    // The picked reference tokens must appear in order inside the candidate.
    std::size_t j = 0;
    for (const auto& t : c) {
      if (j < sub.size() && t == sub[j]) ++j;
    }
    ASSERT_EQ(j, sub.size());
  }
}

TEST(RougeL, MatchesOracle) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const Tokens c = random_tokens(rng, 10, 4);
    const Tokens r = random_tokens(rng, 10, 4);
    const auto want = oracle::prf(static_cast<double>(oracle::lcs_exhaustive(c, r)),
                                  static_cast<double>(c.size()), static_cast<double>(r.size()));
    const auto got = rouge_l(c, r);
    ASSERT_NEAR(got.precision, want.p, 1e-12);
    ASSERT_NEAR(got.recall, want.r, 1e-12);
    ASSERT_NEAR(got.f1, want.f, 1e-12);
  }
}

TEST(RougeLsum, SingleSentenceEqualsRougeL) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    Tokens c = random_tokens(rng, 12, 5);
    Tokens r = random_tokens(rng, 12, 5);
    std::string cs;
    std::string rs;
    for (const auto& t : c) cs += t + " ";
    for (const auto& t : r) rs += t + " ";
    ASSERT_EQ(rouge_lsum(cs, rs), rouge_l(c, r));
  }
}

TEST(RougeLsum, UnionLcsAcrossSentences) {
  // Candidate sentences jointly cover w1 w2 w3 w5 of the reference.
  const auto s = rouge_lsum("w1 w2 w6 w7 w8\nw1 w3 w8 w9 w5", "w1 w2 w3 w4 w5");
  EXPECT_NEAR(s.recall, 4.0 / 5.0, 1e-12);
  EXPECT_NEAR(s.precision, 4.0 / 10.0, 1e-12);
  EXPECT_NEAR(s.f1, 2 * 0.8 * 0.4 / 1.2, 1e-12);
}

TEST(RougeLsum, SentenceOrderFreedom) {
  const std::string a = "the patient has knee pain. no swelling noted.";
  const std::string b = "no swelling noted. the patient has knee pain.";
  EXPECT_EQ(rouge_lsum(a, b).f1, 1.0);
  EXPECT_LT(rouge_l(words(a), words(b)).f1, 1.0);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0;
  double na = 0;
  double nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

TEST(BertScore, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(16);
  const MockEmbedder emb;
  for (int i = 0; i < 50; ++i) {
    Tokens c = random_tokens(rng, 12, 8);
    Tokens r = random_tokens(rng, 12, 8);
    if (c.empty() || r.empty()) continue;
    double recall = 0;
    for (const auto& rt : r) {
      double best = -2;
      for (const auto& ct : c) best = std::max(best, cosine(mock_embed(rt).values, mock_embed(ct).values));
      recall += best;
    }
    recall /= static_cast<double>(r.size());
    double precision = 0;
    for (const auto& ct : c) {
      double best = -2;
      for (const auto& rt : r) best = std::max(best, cosine(mock_embed(rt).values, mock_embed(ct).values));
      precision += best;
    }
    precision /= static_cast<double>(c.size());
    const auto got = bertscore(c, r, emb);
    ASSERT_NEAR(got.precision, precision, 1e-12);
    ASSERT_NEAR(got.recall, recall, 1e-12);
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    ASSERT_NEAR(got.f1, f1, 1e-12);
  }
}

TEST(BertScore, IdentityPermutationAndSymmetry) {
  const MockEmbedder emb;
  const Tokens a = words("patient reports lower back pain for two weeks");
  Tokens shuffled = a;
  std::mt19937_64 rng(17);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto id = bertscore(a, a, emb);
  EXPECT_NEAR(id.precision, 1.0, 1e-9);
  EXPECT_NEAR(id.recall, 1.0, 1e-9);
  EXPECT_NEAR(id.f1, 1.0, 1e-9);
  EXPECT_NEAR(bertscore(shuffled, a, emb).f1, 1.0, 1e-9);
  const Tokens b = words("knee pain after a fall");
  const auto ab = bertscore(a, b, emb);
  const auto ba = bertscore(b, a, emb);
  EXPECT_NEAR(ab.precision, ba.recall, 1e-12);
  EXPECT_NEAR(ab.recall, ba.precision, 1e-12);
  EXPECT_THROW(bertscore({}, a, emb), Error);
}

TEST(BertScore, ExactMatchRaisesRecall) {
  const MockEmbedder emb;
  const Tokens ref = words("back pain worse at night");
  const auto base = bertscore(words("back"), ref, emb);
  const auto more = bertscore(words("back pain"), ref, emb);
  EXPECT_GE(more.recall, base.recall);
}

TEST(Evaluate, MeansOverPairs) {
  const MockEmbedder emb;
  const std::vector<TextPair> pairs = {{"the cat sat", "the cat"}, {"a b", "a b"}};
  const EvalRow row = evaluate_system(pairs, "sys", emb);
  const auto r0 = rouge_n(words("the cat sat"), words("the cat"), 1);
  EXPECT_NEAR(row.rouge1.f1, (r0.f1 + 1.0) / 2, 1e-12);
  EXPECT_NEAR(row.rouge1.precision, (r0.precision + 1.0) / 2, 1e-12);
  EXPECT_FALSE(row.bleurt.has_value());
  const EvalRow with = evaluate_system(pairs, "sys", emb, default_tokenizer(),
                                       [](std::string_view, std::string_view) { return 0.5; });
  ASSERT_TRUE(with.bleurt.has_value());
  EXPECT_NEAR(*with.bleurt, 0.5, 1e-12);
  EXPECT_THROW(evaluate_system({}, "x", emb), Error);
}

TEST(Report, ColumnsFormattingAndRoundTrip) {
  const MockEmbedder emb;
  EvalRow a = evaluate_system({{"the cat sat", "the cat"}}, "Model, A", emb);
  EvalRow b = evaluate_system({{"x y", "x y"}}, "B", emb, default_tokenizer(),
                              [](std::string_view, std::string_view) { return 0.25; });
  const RenderedReport rep = render_report({a, b});
  const std::string header = rep.csv.substr(0, rep.csv.find('\n'));
  EXPECT_EQ(header,
            "System,Rouge1,Rouge2,RougeL,RougeLsum,BERTScore-precision,BERTScore-recall,"
            "BERTScore-F1,BLEURT");
  EXPECT_NE(rep.csv.find("\"Model, A\""), std::string::npos);
  EXPECT_NE(rep.csv.find(",n/a\n"), std::string::npos);
  EXPECT_NE(rep.table.find("80.00"), std::string::npos);

  const auto recs = parse_report_csv(rep.csv);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].system_name, "Model, A");
  EXPECT_FALSE(recs[0].values[7].has_value());
  ASSERT_TRUE(recs[1].values[7].has_value());
  EXPECT_NEAR(*recs[1].values[7], 25.0, 1e-9);
  EXPECT_NEAR(*recs[0].values[0], 80.0, 1e-9);
  EXPECT_NEAR(*recs[1].values[0], 100.0, 1e-9);
}

TEST(Report, Errors) {
  const MockEmbedder emb;
  const EvalRow a = evaluate_system({{"a", "a"}}, "A", emb);
  try {
    render_report({a, a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kReport);
  }
  EXPECT_THROW(render_report({}), Error);
  EXPECT_THROW(parse_report_csv("Name,Rouge1\nx,1\n"), Error);
}

TEST(Report, FormatScore) {
  EXPECT_EQ(format_score(0.8), "80.00");
  EXPECT_EQ(format_score(1.0), "100.00");
  EXPECT_EQ(format_score(0.0), "0.00");
  EXPECT_EQ(format_score(-0.0), "0.00");
  EXPECT_EQ(format_score(0.123456), "12.35");
}

}  // namespace
}  // namespace medipipe
