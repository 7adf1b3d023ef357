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

#include <json.hpp>
#include <random>

#include "medipipe/errors.hpp"
#include "medipipe/fixtures.hpp"
#include "medipipe/soap.hpp"

namespace medipipe {
namespace {

SoapNote random_note(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {
      "Back",   "pain", "lower", "right", "side", "patient", "denies", "fever",
      "55-year-old", "male", "with", "prior", "discectomy.", "Exam:", "tenderness",
      "normal", "MRI", "ordered,", "ibuprofen", "600", "mg", "results", "plan", "chief"};
  std::uniform_int_distribution<std::size_t> w(0, words.size() - 1);
  std::uniform_int_distribution<int> count(0, 12);
  std::bernoulli_distribution newline(0.15);
  SoapNote n;
  for (auto& s : n.sections) {
    const int c = count(rng);
    for (int i = 0; i < c; ++i) {
      if (i) s += newline(rng) ? "\n" : " ";
      s += words[w(rng)];
    }
    // A single word alone on a line must not be a header name.
    for (std::size_t pos = 0; pos <= s.size();) {
      std::size_t eol = s.find('\n', pos);
      if (eol == std::string::npos) eol = s.size();
      const std::string line = s.substr(pos, eol - pos);
      if (line == "results" || line == "Results") s.insert(eol, " noted");
      pos = s.find('\n', pos);
      if (pos == std::string::npos) break;
      ++pos;
    }
  }
  if (!n.is_valid()) n.section(SectionKey::kResults) = "normal";
  return n;
}

std::size_t non_ws(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) n += std::isspace(static_cast<unsigned char>(c)) ? 0 : 1;
  return n;
}

TEST(Prompt, LayoutAndDeterminism) {
  const std::string dialogue = fixtures::back_pain_dialogue_inline();
  const std::string p = build_instruction_prompt(dialogue);
  const auto& tmpl = default_instruction_template();
  EXPECT_EQ(p, tmpl.instruction_text + "\n\nThe conversation:\n" + dialogue + "\nThe clinic note:");
  EXPECT_EQ(p.rfind("Summarize medical dialogues into a SOAP note format", 0), 0u);
  EXPECT_EQ(build_instruction_prompt(dialogue), p);
  EXPECT_THROW(build_instruction_prompt(""), Error);
}

TEST(Template, HeaderMapIsTotalOntoFourSections) {
  const auto& t = default_instruction_template();
  EXPECT_EQ(t.template_id, kDefaultTemplateId);
  EXPECT_EQ(t.logical_section(SectionKey::kChiefComplaint), LogicalSection::kSubjective);
  EXPECT_EQ(t.logical_section(SectionKey::kHistoryOfPresentIllness), LogicalSection::kSubjective);
  EXPECT_EQ(t.logical_section(SectionKey::kReviewOfSystems), LogicalSection::kSubjective);
  EXPECT_EQ(t.logical_section(SectionKey::kPhysicalExamination), LogicalSection::kObjectiveExam);
  EXPECT_EQ(t.logical_section(SectionKey::kResults), LogicalSection::kObjectiveResults);
  EXPECT_EQ(t.logical_section(SectionKey::kAssessmentAndPlan), LogicalSection::kAssessmentAndPlan);
  for (auto s : {LogicalSection::kSubjective, LogicalSection::kObjectiveExam,
                 LogicalSection::kObjectiveResults, LogicalSection::kAssessmentAndPlan}) {
    EXPECT_NE(t.instruction_text.find(logical_section_name(s)), std::string::npos);
  }
}

TEST(Parse, InlineHeaderLayout) {
  const SoapNote n = parse_note_text(fixtures::back_pain_reference_note());
  EXPECT_EQ(n.section(SectionKey::kChiefComplaint), "Back pain.");
  EXPECT_EQ(n.section(SectionKey::kHistoryOfPresentIllness).rfind("Bryan Smith is a 55-year-old male", 0), 0u);
  EXPECT_EQ(n.section(SectionKey::kReviewOfSystems), "");
  EXPECT_EQ(n.section(SectionKey::kAssessmentAndPlan), "");
}

TEST(Parse, NoHeaderIsParseErrorWithRawText) {
  try {
    parse_note_text("no headers here");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.raw_text(), "no headers here");
  }
}

TEST(Parse, CaseInsensitiveStandaloneAnyOrderAndPreamble) {
  ParseDiagnostics diag;
  const SoapNote n = parse_note_text(
      "Summary follows.\nAssessment and Plan:\nRest.\nchief complaint\nKnee pain.\n"
      "The results were normal.\nSOCIAL HISTORY\nNonsmoker.",
      &diag);
  EXPECT_EQ(n.section(SectionKey::kAssessmentAndPlan), "Rest.");
  EXPECT_EQ(n.section(SectionKey::kChiefComplaint),
            "Summary follows.\nKnee pain.\nThe results were normal.\nSOCIAL HISTORY\nNonsmoker.");
  EXPECT_EQ(n.section(SectionKey::kResults), "");
  EXPECT_EQ(diag.headers.size(), 2u);
  EXPECT_EQ(diag.missing.size(), 4u);
  EXPECT_EQ(diag.unknown_headers, std::vector<std::string>{"SOCIAL HISTORY"});
}

TEST(Parse, RepeatedHeadersAppend) {
  const SoapNote n = parse_note_text("RESULTS\nA\nRESULTS\nB");
  EXPECT_EQ(n.section(SectionKey::kResults), "A\nB");
}

TEST(Parse, ConservesNonWhitespaceCharacters) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const std::string text = "Intro words.\n" + render_note(random_note(rng));
    ParseDiagnostics diag;
    const SoapNote n = parse_note_text(text, &diag);
    std::size_t accounted = 0;
    for (const auto& h : diag.headers) accounted += non_ws(text.substr(h.offset, h.length));
    for (const auto& s : n.sections) accounted += non_ws(s);
    ASSERT_EQ(accounted, non_ws(text));
  }
}

TEST(Render, SixHeadersFixedLayout) {
  SoapNote n;
  n.section(SectionKey::kChiefComplaint) = "Back pain.";
  EXPECT_EQ(render_note(n),
            "CHIEF COMPLAINT\nBack pain.\n\nHISTORY OF PRESENT ILLNESS\n\nREVIEW OF SYSTEMS\n\n"
            "PHYSICAL EXAMINATION\n\nRESULTS\n\nASSESSMENT AND PLAN\n");
}

TEST(Render, ParseRenderRoundTripAndFixpoint) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const SoapNote n = random_note(rng);
    const SoapNote back = parse_note_text(render_note(n));
    ASSERT_EQ(back.sections, n.sections) << render_note(n);
    ASSERT_EQ(parse_note_text(render_note(back)), back);
  }
}

TEST(Render, InjectiveOnDistinctContents) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const SoapNote a = random_note(rng);
    const SoapNote b = random_note(rng);
    if (a.sections == b.sections) continue;
    EXPECT_NE(render_note(a), render_note(b));
  }
}

TEST(Export, TextEqualsRender) {
  std::mt19937_64 rng(31);
  const SoapNote n = random_note(rng);
  EXPECT_EQ(export_note(n, ExportFormat::kText), render_note(n));
}

TEST(Export, JsonSchemaAndRoundTrip) {
  std::mt19937_64 rng(37);
  SoapNote n = random_note(rng);
  n.note_id = "note-s1";
  n.source_session = "s1";
  const std::string js = export_note(n, ExportFormat::kJson);
  const auto j = nlohmann::ordered_json::parse(js);
  ASSERT_EQ(j.size(), 8u);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"note_id", "chief_complaint", "history_of_present_illness",
                                            "review_of_systems", "physical_examination", "results",
                                            "assessment_and_plan", "source_session"}));
  EXPECT_EQ(note_from_json(js), n);
  n.source_session.reset();
  EXPECT_TRUE(nlohmann::json::parse(export_note(n, ExportFormat::kJson))["source_session"].is_null());
  EXPECT_EQ(note_from_json(export_note(n, ExportFormat::kJson)), n);
  EXPECT_THROW(note_from_json("{\"note_id\": 3}"), Error);
}

}  // namespace
}  // namespace medipipe
