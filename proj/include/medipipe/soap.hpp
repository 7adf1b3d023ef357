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

#ifndef MEDIPIPE_SOAP_HPP_
#define MEDIPIPE_SOAP_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medipipe {

enum class SectionKey {
  kChiefComplaint,
  kHistoryOfPresentIllness,
  kReviewOfSystems,
  kPhysicalExamination,
  kResults,
  kAssessmentAndPlan,
};

inline constexpr std::size_t kSectionCount = 6;

inline constexpr std::array<SectionKey, kSectionCount> kSectionOrder = {
    SectionKey::kChiefComplaint,      SectionKey::kHistoryOfPresentIllness,
    SectionKey::kReviewOfSystems,     SectionKey::kPhysicalExamination,
    SectionKey::kResults,             SectionKey::kAssessmentAndPlan,
};

// "CHIEF COMPLAINT", "HISTORY OF PRESENT ILLNESS", ...
std::string_view section_header(SectionKey key);
// "chief_complaint", "history_of_present_illness", ...
std::string_view section_field(SectionKey key);

enum class LogicalSection { kSubjective, kObjectiveExam, kObjectiveResults, kAssessmentAndPlan };

std::string_view logical_section_name(LogicalSection section);

struct SoapNote {
  std::string note_id;
  std::array<std::string, kSectionCount> sections{};
  std::optional<std::string> source_session;

  std::string& section(SectionKey key) { return sections[static_cast<std::size_t>(key)]; }
  const std::string& section(SectionKey key) const {
    return sections[static_cast<std::size_t>(key)];
  }

  // At least one section is nonempty.
  bool is_valid() const;

  bool operator==(const SoapNote&) const = default;
};

struct InstructionTemplate {
  std::string template_id;
  std::string instruction_text;
  std::array<LogicalSection, kSectionCount> header_map{};

  LogicalSection logical_section(SectionKey key) const {
    return header_map[static_cast<std::size_t>(key)];
  }
};

inline constexpr std::string_view kDefaultTemplateId = "soap-four-section-v1";

// Four-section instruction; history headers map to SUBJECTIVE, physical
// examination to OBJECTIVE_EXAM, results to OBJECTIVE_RESULTS.
const InstructionTemplate& default_instruction_template();

// instruction + "\n\n" + "The conversation:\n" + dialogue + "\n" +
// "The clinic note:". Throws Error(kPrecondition) for an empty dialogue.
std::string build_instruction_prompt(std::string_view dialogue,
                                     const InstructionTemplate& tmpl =
                                         default_instruction_template());

struct HeaderMatch {
  SectionKey key;
  std::size_t offset;  // byte offset of the header in the parsed text
  std::size_t length;  // bytes consumed, including an optional ':'
};

struct ParseDiagnostics {
  std::vector<HeaderMatch> headers;         // in text order
  std::vector<SectionKey> missing;          // known headers never seen
  std::vector<std::string> unknown_headers; // upper-case lines kept as body text
};

// Recognizes the six headers when a header sits alone on its line (any
// case, optional trailing ':'), or when it is written in upper case at a
// line start or inline after whitespace and is followed by whitespace, ':'
// or the end of the text. Body text between header i and the next header
// becomes section i, trimmed; repeated headers append with '\n'. Text before
// the first header is prepended to the chief complaint.
//
// Throws ParseError carrying the raw text when no header is found.
SoapNote parse_note_text(std::string_view text, ParseDiagnostics* diagnostics = nullptr);

// Headers in fixed order, each on its own line, body below, blank line
// between sections, trailing newline.
std::string render_note(const SoapNote& note);

enum class ExportFormat { kText, kJson };

// JSON fields: note_id, the six section fields, source_session (null when
// absent), in that order.
std::string export_note(const SoapNote& note, ExportFormat format);
// Throws Error(kParse) on malformed JSON or missing fields.
SoapNote note_from_json(std::string_view json_text);

}  // namespace medipipe

#endif  // MEDIPIPE_SOAP_HPP_
