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

#ifndef MEDIPIPE_TRANSCRIPT_HPP_
#define MEDIPIPE_TRANSCRIPT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace medipipe {

class Speaker {
 public:
  enum class Kind { kDoctor, kPatient, kOther };

  static Speaker doctor() { return Speaker(Kind::kDoctor, {}); }
  static Speaker patient() { return Speaker(Kind::kPatient, {}); }
  static Speaker other(std::string label);

  // "doctor" / "patient" (any case) map to the closed roles, "other:<label>"
  // and any other nonempty string become other(<label>).
  static Speaker parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  // Tag used inside rendered dialogue: "Doctor", "Patient" or the label.
  std::string tag() const;
  // Wire/export spelling, inverse of parse().
  std::string wire_name() const;

  bool operator==(const Speaker&) const = default;

 private:
  Speaker(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  Kind kind_;
  std::string label_;
};

struct Segment {
  Speaker speaker = Speaker::doctor();
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;

  bool operator==(const Segment&) const = default;
};

// Normalizes the text to a single line and checks the segment invariants.
// Throws Error(kValidation) on negative/non-finite times, end < start or
// empty text.
Segment validated_segment(Segment seg);

enum class SessionState { kOpen, kFinalized };

// Diarized capture of one encounter. Segments stay sorted by start time;
// a segment that starts before the latest one by more than the configured
// tolerance is rejected, smaller jitter is absorbed by sorted insertion.
class TranscriptSession {
 public:
  static constexpr double kDefaultOrderingTolerance = 0.5;

  explicit TranscriptSession(std::string session_id,
                             double ordering_tolerance_s = kDefaultOrderingTolerance);

  const std::string& session_id() const { return session_id_; }
  const std::vector<Segment>& segments() const { return segments_; }
  SessionState state() const { return state_; }
  bool finalized() const { return state_ == SessionState::kFinalized; }
  double ordering_tolerance() const { return tolerance_; }

  // Throws Error(kState) once finalized, Error(kOrdering) on out-of-order
  // starts and Error(kValidation) for invalid segments.
  void append(Segment seg);
  // Throws Error(kState) when already finalized.
  void finalize();

 private:
  std::string session_id_;
  double tolerance_;
  std::vector<Segment> segments_;
  SessionState state_ = SessionState::kOpen;
};

// Value-style wrappers over the mutating members.
TranscriptSession append_segment(TranscriptSession session, Segment seg);
TranscriptSession finalize(TranscriptSession session);

// One "[Tag]: text" line per maximal run of same-speaker segments, joined by
// '\n'. Throws Error(kPrecondition) for a session without segments.
std::string render_dialogue(const TranscriptSession& session);

// "start\tend\tspeaker\ttext" per segment, '\n' terminated.
std::string export_session(const TranscriptSession& session);
TranscriptSession import_session(std::string session_id, std::string_view data);

std::string format_seconds(double seconds);

}  // namespace medipipe

#endif  // MEDIPIPE_TRANSCRIPT_HPP_
