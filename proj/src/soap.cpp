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

#include "medipipe/soap.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "medipipe/errors.hpp"

namespace medipipe {
namespace {

using ordered_json = nlohmann::ordered_json;

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

void append_body(std::string& section, std::string_view body) {
  if (body.empty()) return;
  if (!section.empty()) section += '\n';
  section += body;
}

// A header candidate on its own line: "<header>" or "<header>:" in any case.
void scan_standalone(std::string_view text, std::vector<HeaderMatch>& out) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    std::size_t lead = 0;
    while (lead < line.size() && is_ws(line[lead])) ++lead;
    std::string_view body = trim_view(line);
    bool colon = false;
    if (!body.empty() && body.back() == ':') {
      body.remove_suffix(1);
      colon = true;
    }
    for (SectionKey key : kSectionOrder) {
      if (iequals(body, section_header(key))) {
        out.push_back({key, pos + lead, body.size() + (colon ? 1 : 0)});
        break;
      }
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
}

// Upper-case headers at a line start or inline after whitespace.
void scan_inline(std::string_view text, std::vector<HeaderMatch>& out) {
  for (SectionKey key : kSectionOrder) {
    const std::string_view header = section_header(key);
    std::size_t pos = 0;
    while ((pos = text.find(header, pos)) != std::string_view::npos) {
      const std::size_t end = pos + header.size();
      const bool left = pos == 0 || is_ws(text[pos - 1]);
      const bool right = end == text.size() || is_ws(text[end]) || text[end] == ':';
      if (left && right) {
        const bool colon = end < text.size() && text[end] == ':';
        out.push_back({key, pos, header.size() + (colon ? 1 : 0)});
      }
      pos = end;
    }
  }
}

bool looks_like_header(std::string_view line) {
  line = trim_view(line);
  if (!line.empty() && line.back() == ':') line.remove_suffix(1);
  if (line.size() < 4) return false;
  bool letter = false;
  for (char c : line) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isupper(u)) {
      letter = true;
    } else if (c != ' ' && c != '&' && c != '/') {
      return false;
    }
  }
  return letter;
}

}  // namespace

std::string_view section_header(SectionKey key) {
  switch (key) {
    case SectionKey::kChiefComplaint: return "CHIEF COMPLAINT";
    case SectionKey::kHistoryOfPresentIllness: return "HISTORY OF PRESENT ILLNESS";
    case SectionKey::kReviewOfSystems: return "REVIEW OF SYSTEMS";
    case SectionKey::kPhysicalExamination: return "PHYSICAL EXAMINATION";
    case SectionKey::kResults: return "RESULTS";
    case SectionKey::kAssessmentAndPlan: return "ASSESSMENT AND PLAN";
  }
  return "";
}

std::string_view section_field(SectionKey key) {
  switch (key) {
    case SectionKey::kChiefComplaint: return "chief_complaint";
    case SectionKey::kHistoryOfPresentIllness: return "history_of_present_illness";
    case SectionKey::kReviewOfSystems: return "review_of_systems";
    case SectionKey::kPhysicalExamination: return "physical_examination";
    case SectionKey::kResults: return "results";
    case SectionKey::kAssessmentAndPlan: return "assessment_and_plan";
  }
  return "";
}

std::string_view logical_section_name(LogicalSection section) {
  switch (section) {
    case LogicalSection::kSubjective: return "SUBJECTIVE";
    case LogicalSection::kObjectiveExam: return "OBJECTIVE_EXAM";
    case LogicalSection::kObjectiveResults: return "OBJECTIVE_RESULTS";
    case LogicalSection::kAssessmentAndPlan: return "ASSESSMENT_AND_PLAN";
  }
  return "";
}

bool SoapNote::is_valid() const {
  return std::any_of(sections.begin(), sections.end(),
                     [](const std::string& s) { return !s.empty(); });
}

const InstructionTemplate& default_instruction_template() {
  static const InstructionTemplate tmpl = [] {
    InstructionTemplate t;
    t.template_id = std::string(kDefaultTemplateId);
    t.instruction_text =
        "Summarize medical dialogues into a SOAP note format, where the note is "
        "divided into four continuous sections: SUBJECTIVE, OBJECTIVE_EXAM, "
        "OBJECTIVE_RESULTS, and ASSESSMENT_AND_PLAN. The SUBJECTIVE section should "
        "contain information from the verbal examination.";
    t.header_map = {LogicalSection::kSubjective,       LogicalSection::kSubjective,
                    LogicalSection::kSubjective,       LogicalSection::kObjectiveExam,
                    LogicalSection::kObjectiveResults, LogicalSection::kAssessmentAndPlan};
    return t;
  }();
  return tmpl;
}

std::string build_instruction_prompt(std::string_view dialogue,
                                     const InstructionTemplate& tmpl) {
  if (dialogue.empty()) {
    throw Error(Errc::kPrecondition, "build_instruction_prompt: dialogue is empty");
  }
  std::string out = tmpl.instruction_text;
  out += "\n\nThe conversation:\n";
  out += dialogue;
  out += "\nThe clinic note:";
  return out;
}

SoapNote parse_note_text(std::string_view text, ParseDiagnostics* diagnostics) {
  std::vector<HeaderMatch> found;
  scan_standalone(text, found);
  scan_inline(text, found);
  std::sort(found.begin(), found.end(), [](const HeaderMatch& a, const HeaderMatch& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    return a.length > b.length;
  });
  std::vector<HeaderMatch> headers;
  std::size_t covered_to = 0;
  for (const auto& m : found) {
    if (!headers.empty() && m.offset < covered_to) continue;
    headers.push_back(m);
    covered_to = m.offset + m.length;
  }
  if (headers.empty()) {
    throw ParseError("no known note header found", std::string(text));
  }

  SoapNote note;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const std::size_t begin = headers[i].offset + headers[i].length;
    const std::size_t end = i + 1 < headers.size() ? headers[i + 1].offset : text.size();
    append_body(note.section(headers[i].key), trim_view(text.substr(begin, end - begin)));
  }
  const std::string_view preamble = trim_view(text.substr(0, headers.front().offset));
  if (!preamble.empty()) {
    std::string& cc = note.section(SectionKey::kChiefComplaint);
    cc = cc.empty() ? std::string(preamble) : std::string(preamble) + "\n" + cc;
  }

  if (diagnostics != nullptr) {
    diagnostics->headers = headers;
    diagnostics->missing.clear();
    for (SectionKey key : kSectionOrder) {
      const bool seen = std::any_of(headers.begin(), headers.end(),
                                    [key](const HeaderMatch& m) { return m.key == key; });
      if (!seen) diagnostics->missing.push_back(key);
    }
    diagnostics->unknown_headers.clear();
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      const bool is_known = std::any_of(headers.begin(), headers.end(), [&](const HeaderMatch& m) {
        return m.offset >= pos && m.offset < eol;
      });
      const std::string_view line = text.substr(pos, eol - pos);
      if (!is_known && looks_like_header(line)) {
        diagnostics->unknown_headers.emplace_back(trim_view(line));
      }
      pos = eol + 1;
    }
  }
  return note;
}

std::string render_note(const SoapNote& note) {
  std::string out;
  for (SectionKey key : kSectionOrder) {
    if (!out.empty()) out += "\n\n";
    out += section_header(key);
    const std::string& body = note.section(key);
    if (!body.empty()) {
      out += '\n';
      out += body;
    }
  }
  out += '\n';
  return out;
}

std::string export_note(const SoapNote& note, ExportFormat format) {
  if (format == ExportFormat::kText) return render_note(note);
  ordered_json j;
  j["note_id"] = note.note_id;
  for (SectionKey key : kSectionOrder) {
    j[std::string(section_field(key))] = note.section(key);
  }
  j["source_session"] =
      note.source_session ? ordered_json(*note.source_session) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

SoapNote note_from_json(std::string_view json_text) {
  try {
    const auto j = ordered_json::parse(json_text);
    SoapNote note;
    note.note_id = j.at("note_id").get<std::string>();
    for (SectionKey key : kSectionOrder) {
      note.section(key) = j.at(std::string(section_field(key))).get<std::string>();
    }
    if (j.contains("source_session") && !j.at("source_session").is_null()) {
      note.source_session = j.at("source_session").get<std::string>();
    }
    return note;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParse, std::string("malformed note JSON: ") + e.what());
  }
}

}  // namespace medipipe
