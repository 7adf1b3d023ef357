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

#include "medipipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "medipipe/errors.hpp"

namespace medipipe {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::size_t ngram_total(const Tokens& tokens, std::size_t n) {
  return tokens.size() >= n ? tokens.size() - n + 1 : 0;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

RougeScore make_score(double matches, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = ratio(matches, cand_total);
  s.recall = ratio(matches, ref_total);
  s.f1 = harmonic_mean(s.precision, s.recall);
  return s;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  const double denom = a.norm() * b.norm();
  return denom > 0.0 ? dot / denom : 0.0;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv_rows(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(Errc::kReport, "unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double harmonic_mean(double p, double r) {
  return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

RougeScore rouge_n(const Tokens& cand, const Tokens& ref, std::size_t n) {
  if (n == 0) throw Error(Errc::kPrecondition, "rouge_n needs n >= 1");
  const NgramCounts cand_counts = count_ngrams(cand, n);
  const NgramCounts ref_counts = count_ngrams(ref, n);
  std::size_t matches = 0;
  for (const auto& [gram, c] : cand_counts) {
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) matches += std::min(c, it->second);
  }
  return make_score(static_cast<double>(matches),
                    static_cast<double>(ngram_total(cand, n)),
                    static_cast<double>(ngram_total(ref, n)));
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::size_t> lcs_ref_positions(const Tokens& ref, const Tokens& cand) {
  const std::size_t rows = ref.size() + 1;
  const std::size_t cols = cand.size() + 1;
  std::vector<std::size_t> table(rows * cols, 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return table[i * cols + j]; };
  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) {
      at(i, j) = ref[i - 1] == cand[j - 1] ? at(i - 1, j - 1) + 1
                                           : std::max(at(i - 1, j), at(i, j - 1));
    }
  }
  std::vector<std::size_t> positions;
  std::size_t i = ref.size();
  std::size_t j = cand.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      positions.push_back(i - 1);
      --i;
      --j;
    } else if (at(i, j - 1) > at(i - 1, j)) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(positions.begin(), positions.end());
  return positions;
}

RougeScore rouge_l(const Tokens& cand, const Tokens& ref) {
  return make_score(static_cast<double>(lcs_length(cand, ref)),
                    static_cast<double>(cand.size()), static_cast<double>(ref.size()));
}

std::vector<Tokens> sentence_tokens(std::string_view text, const Tokenizer& tokenizer) {
  std::vector<Tokens> out;
  for (const auto& sentence : split_sentences(text)) {
    Tokens toks = tokenizer.tokenize(sentence);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

RougeScore rouge_lsum(std::string_view cand_text, std::string_view ref_text,
                      const Tokenizer& tokenizer) {
  const auto cand = sentence_tokens(cand_text, tokenizer);
  const auto ref = sentence_tokens(ref_text, tokenizer);
  std::size_t cand_total = 0;
  for (const auto& s : cand) cand_total += s.size();
  std::size_t ref_total = 0;
  for (const auto& s : ref) ref_total += s.size();

  std::size_t hits = 0;
  for (const auto& r : ref) {
    std::set<std::size_t> matched;
    for (const auto& c : cand) {
      for (std::size_t pos : lcs_ref_positions(r, c)) matched.insert(pos);
    }
    hits += matched.size();
  }
  return make_score(static_cast<double>(hits), static_cast<double>(cand_total),
                    static_cast<double>(ref_total));
}

BertScoreTriple bertscore(const Tokens& cand, const Tokens& ref, const Embedder& embedder) {
  if (cand.empty() || ref.empty()) {
    throw Error(Errc::kPrecondition, "bertscore needs nonempty candidate and reference");
  }
  std::map<std::string, std::size_t> slot;
  std::vector<std::string> distinct;
  for (const auto* side : {&cand, &ref}) {
    for (const auto& tok : *side) {
      if (slot.emplace(tok, distinct.size()).second) distinct.push_back(tok);
    }
  }
  const std::vector<EmbeddingVector> vecs = embedder.embed_texts(distinct);

  std::vector<std::vector<double>> sim(ref.size(), std::vector<double>(cand.size()));
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < cand.size(); ++j) {
      sim[i][j] = cosine(vecs[slot.at(ref[i])], vecs[slot.at(cand[j])]);
    }
  }
  double recall = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    recall += *std::max_element(sim[i].begin(), sim[i].end());
  }
  recall /= static_cast<double>(ref.size());
  double precision = 0.0;
  for (std::size_t j = 0; j < cand.size(); ++j) {
    double best = sim[0][j];
    for (std::size_t i = 1; i < ref.size(); ++i) best = std::max(best, sim[i][j]);
    precision += best;
  }
  precision /= static_cast<double>(cand.size());
  return {precision, recall, harmonic_mean(precision, recall)};
}

EvalRow evaluate_system(const std::vector<TextPair>& pairs, std::string name,
                        const Embedder& embedder, const Tokenizer& tokenizer,
                        const ExternalScorer& bleurt) {
  if (pairs.empty()) throw Error(Errc::kPrecondition, "evaluate_system needs >= 1 pair");
  EvalRow row;
  row.system_name = std::move(name);
  auto add = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  double bleurt_sum = 0.0;
  for (const auto& pair : pairs) {
    const Tokens cand = tokenizer.tokenize(pair.generated);
    const Tokens ref = tokenizer.tokenize(pair.reference);
    add(row.rouge1, rouge_n(cand, ref, 1));
    add(row.rouge2, rouge_n(cand, ref, 2));
    add(row.rougeL, rouge_l(cand, ref));
    add(row.rougeLsum, rouge_lsum(pair.generated, pair.reference, tokenizer));
    if (!cand.empty() && !ref.empty()) {
      const BertScoreTriple b = bertscore(cand, ref, embedder);
      row.bert.precision += b.precision;
      row.bert.recall += b.recall;
      row.bert.f1 += b.f1;
    }
    if (bleurt) bleurt_sum += bleurt(pair.generated, pair.reference);
  }
  const double n = static_cast<double>(pairs.size());
  for (RougeScore* s : {&row.rouge1, &row.rouge2, &row.rougeL, &row.rougeLsum}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  row.bert.precision /= n;
  row.bert.recall /= n;
  row.bert.f1 /= n;
  if (bleurt) row.bleurt = bleurt_sum / n;
  return row;
}

std::string format_score(double unit_value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", unit_value * 100.0);
  std::string out(buf);
  if (out == "-0.00") out = "0.00";
  return out;
}

RenderedReport render_report(const std::vector<EvalRow>& rows) {
  if (rows.empty()) throw Error(Errc::kReport, "report needs at least one row");
  std::set<std::string> names;
  for (const auto& r : rows) {
    if (!names.insert(r.system_name).second) {
      throw Error(Errc::kReport, "duplicate system name in report: " + r.system_name);
    }
  }

  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.system_name, format_score(r.rouge1.f1), format_score(r.rouge2.f1),
                     format_score(r.rougeL.f1), format_score(r.rougeLsum.f1),
                     format_score(r.bert.precision), format_score(r.bert.recall),
                     format_score(r.bert.f1), r.bleurt ? format_score(*r.bleurt) : "n/a"});
  }
  std::vector<std::string> header = {std::string(kSystemColumn)};
  for (auto c : kReportColumns) header.emplace_back(c);

  RenderedReport out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c > 0) out.csv += ',';
    out.csv += header[c];
  }
  out.csv += '\n';
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.csv += ',';
      out.csv += csv_field(row[c]);
    }
    out.csv += '\n';
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.table += "  ";
      if (c == 0) {
        out.table += row[c] + std::string(width[c] - row[c].size(), ' ');
      } else {
        out.table += std::string(width[c] - row[c].size(), ' ') + row[c];
      }
    }
    while (!out.table.empty() && out.table.back() == ' ') out.table.pop_back();
    out.table += '\n';
  };
  emit_row(header);
  for (const auto& row : cells) emit_row(row);
  return out;
}

std::vector<ReportRecord> parse_report_csv(std::string_view csv) {
  const auto rows = parse_csv_rows(csv);
  if (rows.empty()) throw Error(Errc::kReport, "empty CSV report");
  const auto& header = rows.front();
  if (header.size() != kReportColumns.size() + 1 || header[0] != kSystemColumn) {
    throw Error(Errc::kReport, "unexpected CSV header");
  }
  for (std::size_t c = 0; c < kReportColumns.size(); ++c) {
    if (header[c + 1] != kReportColumns[c]) {
      throw Error(Errc::kReport, "unexpected CSV column " + header[c + 1]);
    }
  }
  std::vector<ReportRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(Errc::kReport, "CSV row " + std::to_string(r) + " has wrong field count");
    }
    ReportRecord rec;
    rec.system_name = row[0];
    for (std::size_t c = 0; c < kReportColumns.size(); ++c) {
      if (row[c + 1] == "n/a") continue;
      try {
        std::size_t used = 0;
        rec.values[c] = std::stod(row[c + 1], &used);
        if (used != row[c + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(Errc::kReport, "bad CSV value '" + row[c + 1] + "'");
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace medipipe
