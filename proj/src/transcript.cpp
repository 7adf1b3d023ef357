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

#include "medipipe/transcript.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "medipipe/corpus.hpp"
#include "medipipe/errors.hpp"

namespace medipipe {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

double parse_seconds(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(Errc::kFormat, "session line " + std::to_string(line_no) +
                                   ": bad time '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Speaker Speaker::other(std::string label) {
  if (label.empty()) throw Error(Errc::kValidation, "speaker label is empty");
  return Speaker(Kind::kOther, std::move(label));
}

Speaker Speaker::parse(std::string_view text) {
  const std::string lower = ascii_lower(text);
  if (lower == "doctor") return doctor();
  if (lower == "patient") return patient();
  if (lower.rfind("other:", 0) == 0) return other(std::string(text.substr(6)));
  return other(std::string(text));
}

std::string Speaker::tag() const {
  switch (kind_) {
    case Kind::kDoctor: return "Doctor";
    case Kind::kPatient: return "Patient";
    case Kind::kOther: return label_;
  }
  return label_;
}

std::string Speaker::wire_name() const {
  switch (kind_) {
    case Kind::kDoctor: return "doctor";
    case Kind::kPatient: return "patient";
    case Kind::kOther: return "other:" + label_;
  }
  return label_;
}

Segment validated_segment(Segment seg) {
  if (!std::isfinite(seg.start_s) || !std::isfinite(seg.end_s)) {
    throw Error(Errc::kValidation, "segment times must be finite");
  }
  if (seg.start_s < 0.0) throw Error(Errc::kValidation, "segment start is negative");
  if (seg.end_s < seg.start_s) {
    throw Error(Errc::kValidation, "segment ends before it starts");
  }
  std::string flat = seg.text;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  std::replace(flat.begin(), flat.end(), '\r', ' ');
  seg.text = normalize_text(flat);
  if (seg.text.empty()) throw Error(Errc::kValidation, "segment text is empty");
  return seg;
}

TranscriptSession::TranscriptSession(std::string session_id,
                                     double ordering_tolerance_s)
    : session_id_(std::move(session_id)), tolerance_(ordering_tolerance_s) {
  if (session_id_.empty()) throw Error(Errc::kValidation, "session id is empty");
  if (!(tolerance_ >= 0.0)) {
    throw Error(Errc::kConfig, "ordering tolerance must be >= 0");
  }
}

void TranscriptSession::append(Segment seg) {
  if (finalized()) {
    throw Error(Errc::kState, "session " + session_id_ + " is finalized");
  }
  seg = validated_segment(std::move(seg));
  if (!segments_.empty()) {
    const double latest = segments_.back().start_s;
    if (seg.start_s < latest - tolerance_) {
      throw Error(Errc::kOrdering,
                  "segment starting at " + format_seconds(seg.start_s) +
                      "s arrives after one starting at " +
                      format_seconds(latest) + "s");
    }
  }
  auto pos = std::upper_bound(
      segments_.begin(), segments_.end(), seg.start_s,
      [](double start, const Segment& s) { return start < s.start_s; });
  segments_.insert(pos, std::move(seg));
}

void TranscriptSession::finalize() {
  if (finalized()) {
    throw Error(Errc::kState, "session " + session_id_ + " is already finalized");
  }
  state_ = SessionState::kFinalized;
}

TranscriptSession append_segment(TranscriptSession session, Segment seg) {
  session.append(std::move(seg));
  return session;
}

TranscriptSession finalize(TranscriptSession session) {
  session.finalize();
  return session;
}

std::string render_dialogue(const TranscriptSession& session) {
  const auto& segs = session.segments();
  if (segs.empty()) {
    throw Error(Errc::kPrecondition,
                "session " + session.session_id() + " has no segments");
  }
  std::string out;
  const Speaker* current = nullptr;
  for (const auto& seg : segs) {
    if (current != nullptr && *current == seg.speaker) {
      out += ' ';
      out += seg.text;
      continue;
    }
    if (current != nullptr) out += '\n';
    out += '[';
    out += seg.speaker.tag();
    out += "]: ";
    out += seg.text;
    current = &seg.speaker;
  }
  return out;
}

std::string format_seconds(double seconds) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), seconds);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::string export_session(const TranscriptSession& session) {
  std::string out;
  for (const auto& seg : session.segments()) {
    out += format_seconds(seg.start_s);
    out += '\t';
    out += format_seconds(seg.end_s);
    out += '\t';
    out += seg.speaker.wire_name();
    out += '\t';
    out += seg.text;
    out += '\n';
  }
  return out;
}

TranscriptSession import_session(std::string session_id, std::string_view data) {
  TranscriptSession session(std::move(session_id));
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string_view::npos) eol = data.size();
    std::string_view line = data.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::array<std::string_view, 3> fields;
    std::size_t start = 0;
    for (auto& field : fields) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string_view::npos) {
        throw Error(Errc::kFormat, "session line " + std::to_string(line_no) +
                                       ": expected 4 tab-separated fields");
      }
      field = line.substr(start, tab - start);
      start = tab + 1;
    }
    Segment seg;
    seg.start_s = parse_seconds(fields[0], line_no);
    seg.end_s = parse_seconds(fields[1], line_no);
    seg.speaker = Speaker::parse(fields[2]);
    seg.text = std::string(line.substr(start));
    session.append(std::move(seg));
  }
  return session;
}

}  // namespace medipipe
