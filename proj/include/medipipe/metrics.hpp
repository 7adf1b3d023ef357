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

// Note-quality metrics: ROUGE-N, ROUGE-L, ROUGE-Lsum and BERTScore, plus the
// per-system comparison report.
//
// All text metrics tokenize with the corpus tokenizer (lowercase,
// punctuation split, no stemming, no stopword removal). BERTScore uses plain
// greedy max-cosine matching: no idf weighting, no baseline rescaling.

#ifndef MEDIPIPE_METRICS_HPP_
#define MEDIPIPE_METRICS_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "medipipe/corpus.hpp"
#include "medipipe/providers.hpp"

namespace medipipe {

using Tokens = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const RougeScore&) const = default;
};

struct BertScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const BertScoreTriple&) const = default;
};

// 2pr/(p+r), or 0 when p + r == 0.
double harmonic_mean(double p, double r);

// Clipped n-gram overlap. Throws Error(kPrecondition) for n == 0.
RougeScore rouge_n(const Tokens& cand, const Tokens& ref, std::size_t n);

std::size_t lcs_length(const Tokens& a, const Tokens& b);

// Indices into `ref` of one longest common subsequence with `cand`,
// ascending. Backtracking prefers a match, then moving along `cand`.
std::vector<std::size_t> lcs_ref_positions(const Tokens& ref, const Tokens& cand);

RougeScore rouge_l(const Tokens& cand, const Tokens& ref);

// Splits on newlines and after '.', '!' or '?' followed by whitespace;
// sentences without tokens are dropped.
std::vector<Tokens> sentence_tokens(std::string_view text,
                                    const Tokenizer& tokenizer = default_tokenizer());

// Union-LCS summary-level ROUGE-L.
RougeScore rouge_lsum(std::string_view cand_text, std::string_view ref_text,
                      const Tokenizer& tokenizer = default_tokenizer());

// Every token embedded on its own. Throws Error(kPrecondition) when either
// side is empty.
BertScoreTriple bertscore(const Tokens& cand, const Tokens& ref, const Embedder& embedder);

// Learned metric hook (text pair -> score in [0, 1]). Not built in.
using ExternalScorer = std::function<double(std::string_view cand, std::string_view ref)>;

struct EvalRow {
  std::string system_name;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  RougeScore rougeLsum;
  BertScoreTriple bert;
  std::optional<double> bleurt;
};

struct TextPair {
  std::string generated;
  std::string reference;
};

// Arithmetic mean of per-pair scores. Throws Error(kPrecondition) for an
// empty pair list.
EvalRow evaluate_system(const std::vector<TextPair>& pairs, std::string name,
                        const Embedder& embedder,
                        const Tokenizer& tokenizer = default_tokenizer(),
                        const ExternalScorer& bleurt = {});

inline constexpr std::array<std::string_view, 8> kReportColumns = {
    "Rouge1",           "Rouge2",          "RougeL",       "RougeLsum",
    "BERTScore-precision", "BERTScore-recall", "BERTScore-F1", "BLEURT"};

inline constexpr std::string_view kSystemColumn = "System";

struct RenderedReport {
  std::string table;
  std::string csv;
};

// ROUGE columns report F1; all values x100 with two decimals; BLEURT prints
// "n/a" when absent. Throws Error(kReport) on an empty list or duplicate
// system names.
RenderedReport render_report(const std::vector<EvalRow>& rows);

struct ReportRecord {
  std::string system_name;
  std::array<std::optional<double>, 8> values{};  // nullopt for "n/a"
};

// Inverse of the CSV half of render_report.
std::vector<ReportRecord> parse_report_csv(std::string_view csv);

std::string format_score(double unit_value);

}  // namespace medipipe

#endif  // MEDIPIPE_METRICS_HPP_
